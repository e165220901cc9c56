#pragma once

// Mean-residual-life evaluation. The quadrature oracle integrates
// exp{R(t) - R(t+x)} over x >= 0 (no cancellation, integrand in (0,1]);
// an independent survival-function form is kept as a cross-check. The
// closed-form path evaluates m(t) = mu - t + g(t) r(t) for the families
// carrying (mu, g) data.

#include "mrl/models.hpp"
#include "mrl/quadrature.hpp"

#include <vector>

namespace mrl {

/// m(t) by adaptive quadrature of exp{R(t) - R(t+x)}. The semi-infinite
/// range is truncated by a doubling search for X with
/// R(t+X) - R(t) >= 40; the discarded tail is folded into abs_err_est.
/// For beta1 the range is [0, 1-t] exactly.
QuadratureResult mrl_quadrature(const HazardModel& model, double t, double rel_tol = 1e-9);

/// Cross-check form m(t) = (1/sf(t)) * int_t^... sf(u) du. Loses
/// precision deep in the tail where sf(t) is tiny; use mrl_quadrature
/// as the primary oracle.
QuadratureResult mrl_quadrature_survival_form(const HazardModel& model, double t,
                                              double rel_tol = 1e-9);

/// Closed form m(t) = mu - t + g(t) r(t) for families with (mu, g)
/// data; exponential is handled as the constant 1/rate. Throws
/// CapabilityError for linear and chen (use the expansion or the
/// quadrature oracle there).
double mrl_closed_family(const HazardModel& model, double t);

/// E(X | X > t) = mu + g(t) r(t) = mrl_closed_family(model, t) + t.
double conditional_mean(const HazardModel& model, double t);

/// Failure rate from the MRL and its derivative: r = (1 + m')/m.
double hazard_from_mrl(double m, double m_prime);

enum class MrlMethod {
    quadrature,
    closed_family,
    expansion,
};

const char* mrl_method_name(MrlMethod method);

/// m(t) sampled over a strictly increasing grid by one method.
struct MrlCurve {
    std::vector<double> t_grid;
    std::vector<double> values;
    MrlMethod method = MrlMethod::quadrature;
    int order = 0;  ///< truncation order when method == expansion
};

/// Evaluate m over a grid; validates grid monotonicity and positivity
/// of the resulting values.
MrlCurve evaluate_mrl_curve(const HazardModel& model, const std::vector<double>& t_grid,
                            MrlMethod method, int order = 6, double rel_tol = 1e-8);

}  // namespace mrl
