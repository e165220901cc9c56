#pragma once

// Scalar special functions backing the closed forms: Gaussian CDF, the
// overflow-free scaled Gaussian survival e^{x^2/2}(1-Phi(x)), upper
// incomplete gamma (general, integer and half-integer orders), log-gamma
// and the regularized incomplete beta. All functions are pure and
// thread-safe; invalid arguments throw mrl::DomainError.

namespace mrl::specfun {

/// Standard normal CDF Phi(x). Absolute error <= 1e-15.
double gauss_cdf(double x);

/// e^{x^2/2} * (1 - Phi(x)), evaluated without overflow for arbitrarily
/// large positive x (scaled-survival / Mills-ratio kernel).
///
/// For x < -37.6 the value exceeds the double range; throws
/// mrl::EvaluationError in that case.
double gauss_sf_scaled(double x);

/// Upper incomplete gamma Gamma(alpha, lam) = int_lam^inf t^{alpha-1} e^{-t} dt,
/// alpha > 0, lam >= 0. Relative error <= 1e-12.
double upper_inc_gamma(double alpha, double lam);

/// Regularized integer-order tail Gamma(k, lam)/Gamma(k)
///   = e^{-lam} * sum_{h=0}^{k-1} lam^h / h!.
/// k >= 1 with lam >= 0, or k == 0 with lam > 0 (value 0).
double inc_gamma_integer(int k, double lam);

/// Regularized half-integer-order tail Gamma(k+1/2, lam)/Gamma(k+1/2)
///   = e^{-lam} * sum_{h=0}^{k-1} lam^{h+1/2}/Gamma(h+3/2) + 2(1 - Phi(sqrt(2 lam))).
/// k >= 0, lam >= 0.
double inc_gamma_half_integer(int k, double lam);

/// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
double reg_inc_beta(double a, double b, double x);

/// ln Gamma(x), x > 0.
double log_gamma(double x);

/// Gamma(m + 1/2) by the product formula sqrt(pi) * prod_{j=1}^{m} (j - 1/2),
/// m >= 0. Exact to rounding for the small m used by the expansion.
double gamma_half_integer(int m);

}  // namespace mrl::specfun
