#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mrl/errors.hpp"
#include "mrl/quadrature.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace mrl;
using testutil::rel_err;

TEST_CASE("constant integrand") {
    const auto qr = integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, 1e-12, 1e-14);
    CHECK(qr.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(qr.abs_err_est < 1e-13);
    CHECK(qr.evals >= 1);
}

TEST_CASE("analytic antiderivatives") {
    const auto expdec = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 50.0,
                                           1e-12, 1e-300);
    CHECK(rel_err(expdec.value, 1.0 - std::exp(-50.0)) < 1e-12);

    const auto bell = integrate_adaptive([](double x) { return x * std::exp(-x * x); }, 0.0, 10.0,
                                         1e-12, 1e-300);
    CHECK(rel_err(bell.value, 0.5) < 1e-12);
}

TEST_CASE("error estimate is honest on smooth integrands") {
    const auto qr = integrate_adaptive([](double x) { return std::sin(3.0 * x) + 2.0; }, 0.0, 4.0,
                                       1e-10, 1e-300);
    const double exact = 8.0 + (1.0 - std::cos(12.0)) / 3.0;
    CHECK(std::fabs(qr.value - exact) <= std::max(qr.abs_err_est, 1e-13 * exact));
}

TEST_CASE("oscillatory integrand needing subdivision") {
    const auto qr = integrate_adaptive([](double x) { return std::cos(50.0 * x); }, 0.0, 1.0,
                                       1e-11, 1e-300);
    CHECK(std::fabs(qr.value - std::sin(50.0) / 50.0) < 1e-11);
    CHECK(qr.evals > 15);
}

TEST_CASE("argument validation") {
    const auto f = [](double x) { return x; };
    CHECK_THROWS_AS(integrate_adaptive(f, 1.0, 0.0, 1e-9, 1e-12), DomainError);
    CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, -1e-9, 1e-12), DomainError);
    CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, 1e-9, 0.0), DomainError);
}

TEST_CASE("budget exhaustion carries the best estimate") {
    // |x - pi/8|^{-1/3}: integrable singularity, slow convergence at a
    // tight tolerance and a tiny budget
    const auto f = [](double x) { return std::pow(std::fabs(x - M_PI / 8.0), -1.0 / 3.0); };
    try {
        integrate_adaptive(f, 0.0, 1.0, 1e-14, 1e-300, 600);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_value()));
        CHECK(e.best_value() > 0.0);
        CHECK(e.best_err() > 0.0);
    }
}

TEST_CASE("non-finite integrand is rejected") {
    const auto f = [](double x) { return 1.0 / (x - 0.5); };
    CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, 1e-9, 1e-300), EvaluationError);
}
