#include "mrl/mrl.hpp"

#include "mrl/errors.hpp"
#include "mrl/expansion.hpp"

#include <cmath>
#include <string>

namespace mrl {

namespace {

constexpr double kTailExponent = 40.0;  // integrand <= e^{-40} past the cut

// Doubling search for the truncation point X with
// R(t+X) - R(t) >= kTailExponent. The support end caps the search for
// bounded-support models.
double truncation_point(const HazardModel& model, double t, double cum_at_t) {
    const Support support = model.support();
    if (std::isfinite(support.hi)) {
        return support.hi - t;
    }
    double x = 1.0;
    for (int iter = 0; iter < 1100; ++iter) {
        if (model.cum_hazard(t + x) - cum_at_t >= kTailExponent) {
            return x;
        }
        x *= 2.0;
        if (!std::isfinite(t + x)) break;
    }
    throw EvaluationError("mrl_quadrature: cumulative hazard never reached the truncation level");
}

// MRL evaluation points: anywhere in the support short of its right
// end (t = 0 included for the lifetime families).
void require_evaluable(const HazardModel& model, double t, const char* op) {
    if (!std::isfinite(t) || !model.support().contains(t)) {
        throw DomainError(std::string(op) + ": t = " + std::to_string(t) +
                          " outside the support of " + family_name(model.family()));
    }
}

void require_interior(const HazardModel& model, double t, const char* op) {
    if (!std::isfinite(t) || !model.support().interior(t)) {
        throw DomainError(std::string(op) + ": t = " + std::to_string(t) +
                          " not in the support interior of " + family_name(model.family()));
    }
}

}  // namespace

QuadratureResult mrl_quadrature(const HazardModel& model, double t, double rel_tol) {
    require_evaluable(model, t, "mrl_quadrature");
    if (!(rel_tol >= 1e-12)) {
        throw DomainError("mrl_quadrature: rel_tol must be >= 1e-12");
    }
    if (model.family() == Family::beta1 && 1.0 - t <= 1e-12) {
        throw DomainError("mrl_quadrature: t too close to the beta1 right endpoint");
    }

    const double cum_at_t = model.cum_hazard(t);
    const double upper = truncation_point(model, t, cum_at_t);
    const auto integrand = [&](double x) {
        return std::exp(cum_at_t - model.cum_hazard(t + x));
    };

    QuadratureResult qr = integrate_adaptive(integrand, 0.0, upper, rel_tol, 1e-300);
    if (std::isinf(model.support().hi)) {
        qr.abs_err_est += std::exp(-kTailExponent) * upper;
    }
    return qr;
}

QuadratureResult mrl_quadrature_survival_form(const HazardModel& model, double t, double rel_tol) {
    require_evaluable(model, t, "mrl_quadrature_survival_form");
    const double sf_at_t = model.sf(t);
    if (sf_at_t <= 0.0) {
        throw EvaluationError("mrl_quadrature_survival_form: survival underflow");
    }
    const double upper = truncation_point(model, t, model.cum_hazard(t));
    const auto integrand = [&](double u) { return model.sf(u); };
    QuadratureResult qr = integrate_adaptive(integrand, t, t + upper, rel_tol, 1e-300);
    qr.value /= sf_at_t;
    qr.abs_err_est /= sf_at_t;
    if (std::isinf(model.support().hi)) {
        qr.abs_err_est += std::exp(-kTailExponent) * upper;
    }
    return qr;
}

double mrl_closed_family(const HazardModel& model, double t) {
    if (model.family() == Family::exponential) {
        return 1.0 / model.spec().param("rate");
    }
    if (!model.has_family_data()) {
        throw CapabilityError(std::string("mrl_closed_family: no (mu, g) data for ") +
                              family_name(model.family()) +
                              "; use the expansion or quadrature path");
    }
    require_interior(model, t, "mrl_closed_family");
    const FamilyData fd = model.family_data(t);
    return fd.mu - t + fd.g * model.hazard(t);
}

double conditional_mean(const HazardModel& model, double t) {
    return mrl_closed_family(model, t) + t;
}

double hazard_from_mrl(double m, double m_prime) {
    if (!(m > 0.0)) {
        throw DomainError("hazard_from_mrl: m must be > 0");
    }
    return (1.0 + m_prime) / m;
}

const char* mrl_method_name(MrlMethod method) {
    switch (method) {
        case MrlMethod::quadrature:
            return "quadrature";
        case MrlMethod::closed_family:
            return "closed";
        case MrlMethod::expansion:
            return "expansion";
    }
    return "?";
}

MrlCurve evaluate_mrl_curve(const HazardModel& model, const std::vector<double>& t_grid,
                            MrlMethod method, int order, double rel_tol) {
    if (t_grid.empty()) {
        throw DomainError("evaluate_mrl_curve: empty t grid");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw DomainError("evaluate_mrl_curve: t grid must be strictly increasing");
        }
    }

    MrlCurve curve;
    curve.t_grid = t_grid;
    curve.method = method;
    curve.order = (method == MrlMethod::expansion) ? order : 0;
    curve.values.reserve(t_grid.size());
    for (double t : t_grid) {
        double value = 0.0;
        switch (method) {
            case MrlMethod::quadrature:
                value = mrl_quadrature(model, t, rel_tol).value;
                break;
            case MrlMethod::closed_family:
                value = mrl_closed_family(model, t);
                break;
            case MrlMethod::expansion:
                value = expansion::mrl_expansion(model, t, order);
                break;
        }
        if (!(value > 0.0)) {
            throw EvaluationError("evaluate_mrl_curve: non-positive m(t) at t = " +
                                  std::to_string(t));
        }
        curve.values.push_back(value);
    }
    return curve;
}

}  // namespace mrl
