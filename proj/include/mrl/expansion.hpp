#pragma once

// Gaussian-probability-function expansion of the mean residual life for
// ultimately increasing failure rates:
//
//   m(t) ~ sum_{k=0}^{n-1} b_k(t) phi_k(t),
//
// with b_k generated by exp{-sum_{k>=3} r^{(k-1)}(t) x^k / k!} and
//   phi_k(t) = int_0^inf x^k exp{-x r(t) - x^2 r'(t)/2} dx.
//
// phi_k is evaluated three independent ways: the incomplete-gamma
// closed form (stable for lambda = r^2/2r' <= 30), a forward recurrence
// seeded by the scaled Gaussian survival (stable for large lambda), and
// direct adaptive quadrature as the fallback oracle.

#include "mrl/models.hpp"
#include "mrl/quadrature.hpp"

#include <vector>

namespace mrl::expansion {

/// Coefficients b_0..b_kmax of the formal power series
/// exp{-sum_{k>=3} r^{(k-1)} x^k/k!}; always b_0 = 1, b_1 = b_2 = 0.
struct ExpansionCoefficients {
    double t = 0.0;
    int kmax = 0;
    std::vector<double> b;
};

/// b_{k+1} = -(1/(k+1)) sum_{j=2}^{k} (r^{(j)}/j!) b_{k-j}, k >= 2.
/// derivs_from_2[i] supplies r^{(i+2)}(t); entries up to r^{(kmax-1)}
/// are consumed. Throws CapabilityError when too few are given.
ExpansionCoefficients coeffs_recurrence(const std::vector<double>& derivs_from_2, int kmax);

/// Multinomial form: b_k = sum_{p=0}^{floor(k/3)} (-1)^p
///   sum prod_{j>=2} (1/alpha_j!) (r^{(j)}/(j+1)!)^{alpha_j},
/// inner sum over alpha_j >= 0 with sum alpha_j = p and
/// sum (j+1) alpha_j = k, enumerated exhaustively.
double coeffs_multinomial(const std::vector<double>& derivs_from_2, int k);

enum class PhiMethod {
    lemma_closed_form,
    recurrence,
    quadrature,
};

const char* phi_method_name(PhiMethod method);

/// phi_0..phi_kmax at fixed (r, r') with per-entry provenance and
/// error estimate.
struct PhiSequence {
    double t = 0.0;
    double r = 0.0;
    double r_prime = 0.0;
    int kmax = 0;
    std::vector<double> phi;
    std::vector<PhiMethod> method;
    std::vector<double> abs_err_est;
};

/// Closed-form moments I_k = int_0^inf x^k exp{-a x - b x^2} dx for
/// k = 0..kmax via the incomplete-gamma reduction, any real a, b > 0.
/// Rejects lambda = a^2/4b > 30 with StabilityError (alternating-sum
/// cancellation; switch to the recurrence or quadrature).
struct LemmaSequence {
    std::vector<double> values;
    std::vector<double> abs_err_est;
};
LemmaSequence lemma_closed_sequence(double a, double b, int kmax);

/// Lemma 1 closed form at a = r, b = r'/2 (so lambda = r^2/2r').
PhiSequence phi_lemma(double r, double r_prime, int kmax);

/// Forward recurrence phi_1 = (1 - r phi_0)/r',
/// phi_{k+1} = (k phi_{k-1} - r phi_k)/r', seeded by
/// phi_0 = sqrt(2 pi / r') * gauss_sf_scaled(r / sqrt(r')).
/// Entries losing more than half the significand to cancellation are
/// recomputed by quadrature and tagged as such.
PhiSequence phi_recurrence(double r, double r_prime, int kmax);

/// Direct adaptive quadrature of x^k exp{-x r - x^2 r'/2}.
QuadratureResult phi_quadrature(double r, double r_prime, int k, double rel_tol = 1e-11);

/// phi_0..phi_kmax by the best stable method per entry:
/// lemma closed form while lambda <= 30, recurrence beyond.
PhiSequence phi_best(double r, double r_prime, int kmax);

/// Truncated expansion m_n(t) = sum_{k=0}^{n-1} b_k(t) phi_k(t) using
/// the model's exact hazard derivatives. Requires r(t) > 0 and
/// r'(t) > 0 (throws DomainError otherwise); derivative capability
/// errors propagate.
double mrl_expansion(const HazardModel& model, double t, int n);

/// Adaptive-order mode of the convergent series (available where the
/// hazard has derivatives of every order and r(t) > 1): extend n until
/// |b_n phi_n| < rel_tol * |partial sum| three times in a row, or
/// max_n is reached.
struct SeriesResult {
    double value;
    int n_used;
};
SeriesResult mrl_expansion_series(const HazardModel& model, double t, double rel_tol = 1e-12,
                                  int max_n = 24);

/// Exact linear-hazard MRL
///   m(t) = sqrt(2 pi / beta) * e^{(alpha+beta t)^2/(2 beta)} (1 - Phi((alpha+beta t)/sqrt(beta))),
/// computed overflow-free through the scaled survival.
double linear_exact_mrl(double alpha, double beta, double t);

enum class HypothesisVerdict {
    consistent_with_decay,
    inconclusive,
    violated,
};

const char* hypothesis_verdict_name(HypothesisVerdict verdict);

/// Numeric diagnostics for the expansion hypotheses: the decay ratios
/// |r^{(j-1)}(t)| / r(t)^{j - j eps} (3 <= j <= n) and the growth
/// ratios |r^{(j)}(t)| / max(1, |r''(t)|^{(j+1)/3}) (3 <= j <= n-1).
struct HypothesisReport {
    int n = 3;
    double epsilon = 0.0;
    std::vector<double> t_grid;
    std::vector<std::vector<double>> ratios_eps;     ///< [j-3][grid index]
    std::vector<std::vector<double>> ratios_growth;  ///< [j-3][grid index]
    HypothesisVerdict verdict = HypothesisVerdict::inconclusive;
};

HypothesisReport check_hypotheses(const HazardModel& model, int n, double epsilon,
                                  const std::vector<double>& t_grid);

}  // namespace mrl::expansion
