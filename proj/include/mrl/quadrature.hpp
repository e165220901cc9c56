#pragma once

#include <functional>

namespace mrl {

/// Outcome of one adaptive integration.
struct QuadratureResult {
    double value = 0.0;
    double abs_err_est = 0.0;  ///< accumulated error estimate, >= 0
    long evals = 0;            ///< integrand evaluations, >= 1
};

/// Adaptive quadrature on a finite interval using an embedded
/// Gauss(7)/Kronrod(15) pair with worst-interval-first bisection.
///
/// Refines until abs_err_est <= max(abs_tol, rel_tol * |value|) or the
/// evaluation budget (1e6 by default) is exhausted, in which case a
/// mrl::ConvergenceError carrying the best estimate is thrown.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol, double abs_tol, long max_evals = 1000000);

}  // namespace mrl
