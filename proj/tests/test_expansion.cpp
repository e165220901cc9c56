#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mrl/errors.hpp"
#include "mrl/expansion.hpp"
#include "mrl/models.hpp"
#include "mrl/mrl.hpp"
#include "mrl/quadrature.hpp"

#include "test_util.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace mrl;
using namespace mrl::expansion;
using testutil::rel_err;

namespace {

HazardModel make(const std::string& text) { return HazardModel(parse_model_spec(text)); }

}  // namespace

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

TEST_CASE("coeffs_recurrence seeds and hand values") {
    const ExpansionCoefficients zero = coeffs_recurrence(std::vector<double>(4, 0.0), 6);
    REQUIRE(zero.b.size() == 7);
    CHECK(zero.b[0] == 1.0);
    for (int k = 1; k <= 6; ++k) {
        CHECK(zero.b[k] == 0.0);
    }

    // one step of the recurrence: r'' = 6 gives b_3 = -(1/3)(6/2!) = -1
    const ExpansionCoefficients one = coeffs_recurrence({6.0}, 3);
    CHECK(one.b[3] == doctest::Approx(-1.0).epsilon(1e-15));

    // r^{(5)} = s alone gives b_6 = -s/720
    const double s = 3.7;
    const ExpansionCoefficients five = coeffs_recurrence({0.0, 0.0, 0.0, s}, 6);
    CHECK(rel_err(five.b[6], -s / 720.0) < 1e-14);

    CHECK_THROWS_AS(coeffs_recurrence({}, 4), CapabilityError);
}

TEST_CASE("coeffs_multinomial base cases and hand values") {
    CHECK(coeffs_multinomial({}, 0) == 1.0);
    CHECK(coeffs_multinomial({}, 1) == 0.0);
    CHECK(coeffs_multinomial({}, 2) == 0.0);

    const double r2 = 4.2;
    CHECK(rel_err(coeffs_multinomial({r2}, 3), -r2 / 6.0) < 1e-14);
    CHECK(rel_err(coeffs_multinomial({r2}, 3), coeffs_recurrence({r2}, 3).b[3]) < 1e-14);

    // k = 6 with r'' and r^{(5)}: partitions alpha_2 = 2 and alpha_5 = 1
    const double r5 = -2.5;
    const double b6 = coeffs_multinomial({r2, 0.0, 0.0, r5}, 6);
    CHECK(rel_err(b6, r2 * r2 / 72.0 - r5 / 720.0) < 1e-13);
}

TEST_CASE("recurrence equals multinomial enumeration on random derivatives") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> uniform(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> derivs(11);  // r^{(2)} .. r^{(12)}
        for (double& d : derivs) {
            d = uniform(rng);
        }
        const ExpansionCoefficients rec = coeffs_recurrence(derivs, 12);
        CHECK(rec.b[0] == 1.0);
        CHECK(rec.b[1] == 0.0);
        CHECK(rec.b[2] == 0.0);
        for (int k = 0; k <= 12; ++k) {
            const double multi = coeffs_multinomial(derivs, k);
            const bool ok = rel_err(rec.b[k], multi) < 1e-11 ||
                            std::fabs(rec.b[k] - multi) < 1e-13;
            CHECK(ok);
        }
    }
}

// ---------------------------------------------------------------------------
// Lemma closed form and the phi family
// ---------------------------------------------------------------------------

TEST_CASE("lemma closed form against adaptive quadrature, any-sign a") {
    for (double a : {-1.0, 0.0, 1.0, 3.0}) {
        for (double b : {0.5, 1.0, 4.0}) {
            const LemmaSequence seq = lemma_closed_sequence(a, b, 8);
            for (int k = 0; k <= 8; ++k) {
                double upper = 1.0;
                while (a * upper + b * upper * upper - k * std::log1p(upper) < 45.0) {
                    upper *= 2.0;
                }
                const auto integrand = [&](double x) {
                    return std::pow(x, k) * std::exp(-a * x - b * x * x);
                };
                const double oracle =
                    integrate_adaptive(integrand, 0.0, upper, 1e-12, 1e-300).value;
                CHECK(rel_err(seq.values[k], oracle) < 1e-9);
            }
        }
    }
}

TEST_CASE("lemma closed form rejects the unstable range") {
    CHECK_THROWS_AS(lemma_closed_sequence(20.0, 1.0, 4), StabilityError);  // lambda = 100
    CHECK_THROWS_AS(phi_lemma(10.0, 1.0, 4), StabilityError);              // lambda = 50
}

TEST_CASE("phi_lemma spot values") {
    const PhiSequence seq = phi_lemma(0.0, 1.0, 1);
    CHECK(rel_err(seq.phi[0], std::sqrt(M_PI / 2.0)) < 1e-13);
    CHECK(rel_err(seq.phi[1], 1.0) < 1e-13);
    CHECK(seq.method[0] == PhiMethod::lemma_closed_form);

    // a = 1, b = 1 (r = 1, r' = 2), k = 0 against the quadrature oracle
    const PhiSequence one = phi_lemma(1.0, 2.0, 0);
    const auto integrand = [](double x) { return std::exp(-x - x * x); };
    const double oracle = integrate_adaptive(integrand, 0.0, 50.0, 1e-12, 1e-300).value;
    CHECK(rel_err(one.phi[0], oracle) < 1e-10);
}

TEST_CASE("phi_recurrence seeds and fallback behavior") {
    const PhiSequence seq = phi_recurrence(0.0, 1.0, 2);
    CHECK(rel_err(seq.phi[1], 1.0) < 1e-13);

    // phi_2 = (phi_0 - r phi_1)/r' consistent with the closed form
    for (double r : {0.3, 1.0, 2.5}) {
        for (double rp : {0.5, 1.0, 4.0}) {
            if (r * r / (2.0 * rp) > 10.0) continue;
            const PhiSequence rec = phi_recurrence(r, rp, 2);
            const PhiSequence lem = phi_lemma(r, rp, 2);
            CHECK(rel_err(rec.phi[2], lem.phi[2]) < 1e-9);
        }
    }

    // large-lambda regime: recurrence against quadrature
    for (int k = 0; k <= 6; ++k) {
        const PhiSequence rec = phi_recurrence(100.0, 1.0, 6);
        const QuadratureResult quad = phi_quadrature(100.0, 1.0, k);
        CHECK(rel_err(rec.phi[k], quad.value) < 1e-8);
    }
}

TEST_CASE("phi_quadrature spot values") {
    CHECK(rel_err(phi_quadrature(0.0, 1.0, 0).value, std::sqrt(M_PI / 2.0)) < 1e-10);
    CHECK(rel_err(phi_quadrature(1.0, 1.0, 3).value, phi_lemma(1.0, 1.0, 3).phi[3]) < 1e-9);
    CHECK(rel_err(phi_quadrature(5.0, 0.1, 1).value, phi_recurrence(5.0, 0.1, 1).phi[1]) < 1e-8);
    CHECK_THROWS_AS(phi_quadrature(1.0, 0.0, 1), DomainError);
}

TEST_CASE("phi triple agreement") {
    for (double r : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        for (double rp : {0.1, 1.0, 10.0}) {
            const double lambda = r * r / (2.0 * rp);
            const PhiSequence rec = phi_recurrence(r, rp, 8);
            for (int k = 0; k <= 8; ++k) {
                CHECK(rec.phi[k] > 0.0);
                CHECK(std::isfinite(rec.phi[k]));
                const QuadratureResult quad = phi_quadrature(r, rp, k);
                CHECK(rel_err(rec.phi[k], quad.value) < 1e-8);
                if (lambda <= 30.0) {
                    const PhiSequence lem = phi_lemma(r, rp, 8);
                    CHECK(lem.phi[k] > 0.0);
                    CHECK(rel_err(lem.phi[k], quad.value) < 1e-8);
                    CHECK(rel_err(lem.phi[k], rec.phi[k]) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("phi_best picks a stable method") {
    const PhiSequence small = phi_best(1.0, 1.0, 4);
    CHECK(small.method[0] == PhiMethod::lemma_closed_form);
    const PhiSequence large = phi_best(50.0, 1.0, 4);  // lambda = 1250
    CHECK(large.method[0] == PhiMethod::recurrence);
    for (int k = 0; k <= 4; ++k) {
        CHECK(rel_err(large.phi[k], phi_quadrature(50.0, 1.0, k).value) < 1e-8);
    }
}

// ---------------------------------------------------------------------------
// Expansion of m(t)
// ---------------------------------------------------------------------------

TEST_CASE("linear hazard expansion is exact at every order") {
    const HazardModel model = make("linear(alpha=1,beta=1)");
    const double t = 2.0;
    const double m1 = mrl_expansion(model, t, 1);

    // Example-1 closed form, written with the scaled survival
    const double exact = linear_exact_mrl(1.0, 1.0, t);
    CHECK(rel_err(m1, exact) < 1e-12);

    // all higher coefficients vanish, so every order gives the same value
    for (int n : {2, 3, 5, 8}) {
        CHECK(mrl_expansion(model, t, n) == m1);
    }

    // and both agree with the quadrature oracle
    for (double tt : testutil::linspace(0.0, 10.0, 11)) {
        const double expansion = mrl_expansion(model, tt, 3);
        CHECK(rel_err(expansion, linear_exact_mrl(1.0, 1.0, tt)) < 1e-10);
        CHECK(rel_err(expansion, mrl_quadrature(model, tt, 1e-11).value) < 1e-10);
    }
}

TEST_CASE("linear_exact_mrl spot values") {
    CHECK(rel_err(linear_exact_mrl(0.0, 1.0, 0.0), std::sqrt(M_PI / 2.0)) < 1e-14);

    const HazardModel model = make("linear(alpha=1,beta=2)");
    CHECK(rel_err(linear_exact_mrl(1.0, 2.0, 3.0), mrl_quadrature(model, 3.0, 1e-11).value) <
          1e-10);

    // far tail: no overflow, leading order 1/r(t)
    const double far = linear_exact_mrl(0.0, 1.0, 50.0);
    CHECK(std::isfinite(far));
    CHECK(rel_err(far, 1.0 / 50.0) < 0.01);

    CHECK_THROWS_AS(linear_exact_mrl(0.0, -1.0, 1.0), DomainError);
}

TEST_CASE("chen expansion converges to the quadrature oracle") {
    const HazardModel model = make("chen(lambda=1,beta=0.5)");

    // n = 6 at t = 6 lands well below 1e-4 relative of the oracle
    const double oracle6 = mrl_quadrature(model, 6.0, 1e-11).value;
    const double m6 = mrl_expansion(model, 6.0, 6);
    CHECK(rel_err(m6, oracle6) < 1e-4);

    // relative deviation nonincreasing in n over {2, 4, 6} (ties allowed)
    for (double t : {6.0, 8.0, 10.0}) {
        const double oracle = mrl_quadrature(model, t, 1e-11).value;
        double prev = std::numeric_limits<double>::infinity();
        for (int n : {2, 4, 6}) {
            const double dev = rel_err(mrl_expansion(model, t, n), oracle);
            CHECK(dev <= prev * (1.0 + 1e-12));
            prev = dev;
        }
    }
}

TEST_CASE("chen scaled expansion error stays controlled in t") {
    // |m_quad - m_n| r(t)^{1+2n/3} may grow by at most 2x from t=4 to t=10
    const HazardModel model = make("chen(lambda=1,beta=0.5)");
    for (int n : {3, 4, 5}) {
        std::vector<double> scaled;
        for (double t : {4.0, 6.0, 8.0, 10.0}) {
            const double oracle = mrl_quadrature(model, t, 1e-11).value;
            const double err = std::fabs(mrl_expansion(model, t, n) - oracle);
            scaled.push_back(err * std::pow(model.hazard(t), 1.0 + 2.0 * n / 3.0));
        }
        CHECK(scaled.back() <= 2.0 * scaled.front());
    }
}

TEST_CASE("mrl_expansion argument errors") {
    CHECK_THROWS_AS(mrl_expansion(make("linear(alpha=1,beta=1)"), 1.0, 0), DomainError);
    // declining hazard branch of chen (beta < 1, small t): r' <= 0
    CHECK_THROWS_AS(mrl_expansion(make("chen(lambda=1,beta=0.5)"), 0.5, 3), DomainError);
    // no analytic derivatives
    CHECK_THROWS_AS(mrl_expansion(make("gamma(mu=2,B=1)"), 1.0, 3), CapabilityError);
}

TEST_CASE("adaptive-order series mode") {
    const HazardModel model = make("chen(lambda=1,beta=0.5)");
    const SeriesResult series = mrl_expansion_series(model, 8.0, 1e-10, 20);
    const double oracle = mrl_quadrature(model, 8.0, 1e-11).value;
    CHECK(series.n_used >= 3);
    CHECK(series.n_used <= 20);
    CHECK(rel_err(series.value, oracle) < 1e-5);

    // linear: terms beyond k = 0 vanish, so the series settles immediately
    const HazardModel lin = make("linear(alpha=2,beta=1)");
    const SeriesResult linear_series = mrl_expansion_series(lin, 1.0, 1e-12, 12);
    CHECK(linear_series.value == linear_exact_mrl(2.0, 1.0, 1.0));

    // r(t) <= 1 is out of contract for the series mode
    CHECK_THROWS_AS(mrl_expansion_series(make("linear(alpha=0,beta=0.01)"), 1.0, 1e-10, 12),
                    DomainError);
}

// ---------------------------------------------------------------------------
// Hypothesis diagnostics
// ---------------------------------------------------------------------------

TEST_CASE("hypotheses trivially satisfied for the linear model") {
    const HazardModel model = make("linear(alpha=1,beta=1)");
    const HypothesisReport report =
        check_hypotheses(model, 5, 0.5, testutil::linspace(1.0, 9.0, 9));
    CHECK(report.verdict == HypothesisVerdict::consistent_with_decay);
    for (const auto& column : report.ratios_eps) {
        for (double v : column) {
            CHECK(v == 0.0);
        }
    }
}

TEST_CASE("chen hypotheses at the paper's epsilon") {
    const HazardModel model = make("chen(lambda=1,beta=0.5)");
    const HypothesisReport good =
        check_hypotheses(model, 5, 0.6, testutil::linspace(2.0, 12.0, 11));
    CHECK(good.verdict == HypothesisVerdict::consistent_with_decay);

    const HypothesisReport bad =
        check_hypotheses(model, 5, 2.0, testutil::linspace(2.0, 12.0, 11));
    CHECK(bad.verdict == HypothesisVerdict::violated);
}

TEST_CASE("check_hypotheses argument validation") {
    const HazardModel model = make("chen(lambda=1,beta=0.5)");
    CHECK_THROWS_AS(check_hypotheses(model, 2, 0.5, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(check_hypotheses(model, 4, 0.0, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(check_hypotheses(model, 4, 0.5, {}), DomainError);
    CHECK_THROWS_AS(check_hypotheses(model, 4, 0.5, {2.0, 1.0}), DomainError);
    CHECK_THROWS_AS(check_hypotheses(make("gamma(mu=2,B=1)"), 4, 0.5, {1.0, 2.0}),
                    CapabilityError);
}
