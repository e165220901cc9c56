#include "mrl/expansion.hpp"

#include "mrl/errors.hpp"
#include "mrl/specfun.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mrl::expansion {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kLambdaSwitch = 30.0;
constexpr double kSqrt2Pi = 2.5066282746310005024;
// half-significand loss threshold for the recurrence cancellation flag
constexpr double kCancelThreshold = 1.4901161193847656e-08;  // 2^-26
// accumulated-error fallback: once the propagated estimate crosses this
// relative level the forward recurrence has drifted too far and the
// entry is recomputed by quadrature
constexpr double kRecurrenceDriftTol = 1e-10;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

const char* phi_method_name(PhiMethod method) {
    switch (method) {
        case PhiMethod::lemma_closed_form:
            return "lemma_closed_form";
        case PhiMethod::recurrence:
            return "recurrence";
        case PhiMethod::quadrature:
            return "quadrature";
    }
    return "?";
}

const char* hypothesis_verdict_name(HypothesisVerdict verdict) {
    switch (verdict) {
        case HypothesisVerdict::consistent_with_decay:
            return "consistent_with_decay";
        case HypothesisVerdict::inconclusive:
            return "inconclusive";
        case HypothesisVerdict::violated:
            return "violated";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

ExpansionCoefficients coeffs_recurrence(const std::vector<double>& derivs_from_2, int kmax) {
    if (kmax < 0) throw DomainError("coeffs_recurrence: kmax must be >= 0");
    const int needed = std::max(0, kmax - 2);
    if (static_cast<int>(derivs_from_2.size()) < needed) {
        throw CapabilityError("coeffs_recurrence: need r^(j) up to j = " +
                              std::to_string(kmax - 1) + ", got " +
                              std::to_string(derivs_from_2.size() + 1));
    }

    ExpansionCoefficients out;
    out.kmax = kmax;
    out.b.assign(kmax + 1, 0.0);
    out.b[0] = 1.0;
    // b_1 = b_2 = 0 already
    for (int k = 2; k < kmax; ++k) {
        double sum = 0.0;
        for (int j = 2; j <= k; ++j) {
            const double deriv = derivs_from_2[j - 2];
            sum += deriv / factorial(j) * out.b[k - j];
        }
        out.b[k + 1] = -sum / (k + 1);
    }
    return out;
}

namespace {

// Exhaustive enumeration over non-negative alpha_j (j >= 2) with
// sum (j+1) alpha_j = k; each complete assignment contributes
// (-1)^p prod (1/alpha_j!) (r^{(j)}/(j+1)!)^{alpha_j}.
double multinomial_enumerate(const std::vector<double>& derivs_from_2, int j, int weight_left,
                             int parity, double product) {
    if (weight_left == 0) {
        return (parity % 2 == 0 ? product : -product);
    }
    if (j + 1 > weight_left) {
        return 0.0;
    }
    double total = 0.0;
    const double deriv = (j - 2 < static_cast<int>(derivs_from_2.size()))
                             ? derivs_from_2[j - 2]
                             : 0.0;
    const double base = deriv / factorial(j + 1);
    double power = 1.0;
    double inv_count_fact = 1.0;
    for (int alpha = 0; alpha * (j + 1) <= weight_left; ++alpha) {
        if (alpha > 0) {
            power *= base;
            inv_count_fact /= alpha;
        }
        total += multinomial_enumerate(derivs_from_2, j + 1, weight_left - alpha * (j + 1),
                                       parity + alpha, product * power * inv_count_fact);
    }
    return total;
}

}  // namespace

double coeffs_multinomial(const std::vector<double>& derivs_from_2, int k) {
    if (k < 0) throw DomainError("coeffs_multinomial: k must be >= 0");
    if (k == 0) return 1.0;
    if (k < 3) return 0.0;
    if (static_cast<int>(derivs_from_2.size()) < k - 2) {
        throw CapabilityError("coeffs_multinomial: need r^(j) up to j = " + std::to_string(k - 1));
    }
    return multinomial_enumerate(derivs_from_2, 2, k, 0, 1.0);
}

// ---------------------------------------------------------------------------
// Lemma closed form
// ---------------------------------------------------------------------------

LemmaSequence lemma_closed_sequence(double a, double b, int kmax) {
    if (!std::isfinite(a) || !(b > 0.0)) {
        throw DomainError("lemma_closed_sequence: need finite a and b > 0");
    }
    if (kmax < 0) throw DomainError("lemma_closed_sequence: kmax must be >= 0");

    const double lambda = a * a / (4.0 * b);
    if (lambda > kLambdaSwitch) {
        throw StabilityError("lemma_closed_sequence: lambda = " + std::to_string(lambda) +
                             " beyond the stable range (<= 30); use the recurrence or quadrature");
    }

    // G[h] = 2 b^{(h+1)/2} e^lambda * int_{y0}^inf y^h e^{-b y^2} dy,
    // y0 = a/(2b). For a >= 0 this is e^lambda Gamma((h+1)/2, lambda),
    // expanded through the integer / half-integer tail sums so that no
    // bare e^lambda appears. For a < 0 the even-h integrals pick up the
    // full two-sided Gaussian mass (odd-h ones are unchanged by
    // symmetry).
    const double scaled_tail = specfun::gauss_sf_scaled(std::sqrt(2.0 * lambda));

    std::vector<double> g(kmax + 1);
    {
        double half_term = (lambda > 0.0) ? 2.0 * std::sqrt(lambda / M_PI) : 0.0;
        double half_sum = 0.0;  // sum_{j=0}^{m-1} lambda^{j+1/2}/Gamma(j+3/2)
        double int_term = 1.0;
        double int_sum = 1.0;  // sum_{j=0}^{m} lambda^j/j!
        for (int h = 0; h <= kmax; ++h) {
            if (h % 2 == 0) {
                // e^lambda Gamma(m+1/2, lambda)
                //   = Gamma(m+1/2) (sum_{j<m} lambda^{j+1/2}/Gamma(j+3/2)
                //                   + 2 e^lambda (1 - Phi(sqrt(2 lambda))))
                const int m = h / 2;
                if (m > 0) {
                    half_sum += half_term;
                    half_term *= lambda / (m + 0.5);
                }
                double value =
                    specfun::gamma_half_integer(m) * (half_sum + 2.0 * scaled_tail);
                if (a < 0.0) {
                    value = 2.0 * std::exp(lambda) * specfun::gamma_half_integer(m) - value;
                }
                g[h] = value;
            } else {
                // e^lambda Gamma(m+1, lambda) = m! sum_{j<=m} lambda^j/j!
                const int m = (h - 1) / 2;
                if (m > 0) {
                    int_term *= lambda / m;
                    int_sum += int_term;
                }
                g[h] = factorial(m) * int_sum;
            }
        }
    }

    const double y0_abs = std::sqrt(lambda / b);  // |a| / (2b)
    const double sign = (a >= 0.0) ? -1.0 : 1.0;

    LemmaSequence out;
    out.values.resize(kmax + 1);
    out.abs_err_est.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        double sum = 0.0;
        double abs_sum = 0.0;
        double outer = 1.0;  // (sign * y0_abs)^{k-h}, built from h = k down
        for (int h = k; h >= 0; --h) {
            const double term =
                binomial(k, h) * outer * 0.5 * std::pow(b, -0.5 * (h + 1)) * g[h];
            sum += term;
            abs_sum += std::fabs(term);
            outer *= sign * y0_abs;
        }
        out.values[k] = sum;
        out.abs_err_est[k] = kEps * (k + 2) * abs_sum;
    }
    return out;
}

PhiSequence phi_lemma(double r, double r_prime, int kmax) {
    if (!(r_prime > 0.0)) {
        throw DomainError("phi_lemma: r_prime must be > 0");
    }
    LemmaSequence seq = lemma_closed_sequence(r, 0.5 * r_prime, kmax);
    PhiSequence out;
    out.r = r;
    out.r_prime = r_prime;
    out.kmax = kmax;
    out.phi = std::move(seq.values);
    out.abs_err_est = std::move(seq.abs_err_est);
    out.method.assign(kmax + 1, PhiMethod::lemma_closed_form);
    return out;
}

// ---------------------------------------------------------------------------
// Recurrence and quadrature
// ---------------------------------------------------------------------------

QuadratureResult phi_quadrature(double r, double r_prime, int k, double rel_tol) {
    if (!(r_prime > 0.0)) {
        throw DomainError("phi_quadrature: r_prime must be > 0");
    }
    if (k < 0) throw DomainError("phi_quadrature: k must be >= 0");
    if (!std::isfinite(r)) throw DomainError("phi_quadrature: r must be finite");

    // Truncate where x r + x^2 r'/2 - k log(1+x) >= 40; the discarded
    // tail is below e^{-40} pointwise.
    double upper = 1.0;
    while (r * upper + 0.5 * r_prime * upper * upper - k * std::log1p(upper) < 40.0) {
        upper *= 2.0;
    }
    const auto integrand = [=](double x) {
        return std::exp(k * std::log(x) - r * x - 0.5 * r_prime * x * x);
    };
    const auto integrand_k0 = [=](double x) { return std::exp(-r * x - 0.5 * r_prime * x * x); };

    QuadratureResult qr = (k == 0)
                              ? integrate_adaptive(integrand_k0, 0.0, upper, rel_tol, 1e-300)
                              : integrate_adaptive(integrand, 0.0, upper, rel_tol, 1e-300);
    qr.abs_err_est += std::exp(-40.0) * std::max(upper, 1.0);
    return qr;
}

PhiSequence phi_recurrence(double r, double r_prime, int kmax) {
    if (!(r_prime > 0.0)) {
        throw DomainError("phi_recurrence: r_prime must be > 0");
    }
    if (kmax < 0) throw DomainError("phi_recurrence: kmax must be >= 0");
    if (!std::isfinite(r)) throw DomainError("phi_recurrence: r must be finite");

    PhiSequence out;
    out.r = r;
    out.r_prime = r_prime;
    out.kmax = kmax;
    out.phi.resize(kmax + 1);
    out.method.assign(kmax + 1, PhiMethod::recurrence);
    out.abs_err_est.resize(kmax + 1);

    out.phi[0] = kSqrt2Pi / std::sqrt(r_prime) * specfun::gauss_sf_scaled(r / std::sqrt(r_prime));
    out.abs_err_est[0] = 4.0 * kEps * out.phi[0];

    for (int k = 0; k < kmax; ++k) {
        // phi_{k+1} = (k phi_{k-1} - r phi_k) / r'; the k = 0 step reads
        // the boundary term 1 in place of k phi_{k-1}.
        const double lead = (k == 0) ? 1.0 : k * out.phi[k - 1];
        const double sub = r * out.phi[k];
        const double numer = lead - sub;
        if (std::fabs(numer) < kCancelThreshold * std::max(std::fabs(lead), std::fabs(sub))) {
            QuadratureResult qr = phi_quadrature(r, r_prime, k + 1);
            out.phi[k + 1] = qr.value;
            out.method[k + 1] = PhiMethod::quadrature;
            out.abs_err_est[k + 1] = qr.abs_err_est;
            continue;
        }
        out.phi[k + 1] = numer / r_prime;
        const double lead_err = (k == 0) ? 0.0 : k * out.abs_err_est[k - 1];
        out.abs_err_est[k + 1] =
            (lead_err + std::fabs(r) * out.abs_err_est[k] + kEps * (std::fabs(lead) + std::fabs(sub))) /
            r_prime;
    }
    return out;
}

PhiSequence phi_best(double r, double r_prime, int kmax) {
    if (!(r_prime > 0.0)) {
        throw DomainError("phi_best: r_prime must be > 0");
    }
    const double lambda = r * r / (2.0 * r_prime);
    if (lambda <= kLambdaSwitch) {
        return phi_lemma(r, r_prime, kmax);
    }
    return phi_recurrence(r, r_prime, kmax);
}

// ---------------------------------------------------------------------------
// Expansion of the mean residual life
// ---------------------------------------------------------------------------

namespace {

struct ExpansionInputs {
    double r;
    double r_prime;
    std::vector<double> derivs_from_2;
};

ExpansionInputs gather_derivatives(const HazardModel& model, double t, int n) {
    ExpansionInputs in;
    in.r = model.hazard(t);
    in.r_prime = model.hazard_derivative(1, t);
    if (!(in.r > 0.0)) {
        throw DomainError("mrl_expansion: requires r(t) > 0");
    }
    if (!(in.r_prime > 0.0)) {
        throw DomainError("mrl_expansion: expansion requires locally increasing hazard");
    }
    for (int j = 2; j <= n - 2; ++j) {
        in.derivs_from_2.push_back(model.hazard_derivative(j, t));
    }
    return in;
}

}  // namespace

double mrl_expansion(const HazardModel& model, double t, int n) {
    if (n < 1) throw DomainError("mrl_expansion: n must be >= 1");
    const ExpansionInputs in = gather_derivatives(model, t, n);
    const ExpansionCoefficients coeffs = coeffs_recurrence(in.derivs_from_2, n - 1);
    const PhiSequence phi = phi_best(in.r, in.r_prime, n - 1);
    double sum = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        sum += coeffs.b[k] * phi.phi[k];
    }
    return sum;
}

SeriesResult mrl_expansion_series(const HazardModel& model, double t, double rel_tol, int max_n) {
    if (max_n < 3) throw DomainError("mrl_expansion_series: max_n must be >= 3");
    if (!(rel_tol > 0.0)) throw DomainError("mrl_expansion_series: rel_tol must be > 0");
    const ExpansionInputs in = gather_derivatives(model, t, max_n);
    if (!(in.r > 1.0)) {
        throw DomainError("mrl_expansion_series: series mode requires r(t) > 1");
    }
    const ExpansionCoefficients coeffs = coeffs_recurrence(in.derivs_from_2, max_n - 1);
    const PhiSequence phi = phi_best(in.r, in.r_prime, max_n - 1);

    double partial = coeffs.b[0] * phi.phi[0];
    int small_streak = 0;
    for (int k = 1; k <= max_n - 1; ++k) {
        const double term = coeffs.b[k] * phi.phi[k];
        partial += term;
        if (std::fabs(term) < rel_tol * std::fabs(partial)) {
            if (++small_streak == 3) {
                return {partial, k + 1};
            }
        } else {
            small_streak = 0;
        }
    }
    return {partial, max_n};
}

double linear_exact_mrl(double alpha, double beta, double t) {
    if (!(beta > 0.0)) throw DomainError("linear_exact_mrl: beta must be > 0");
    if (alpha < 0.0) throw DomainError("linear_exact_mrl: alpha must be >= 0");
    if (t < 0.0) throw DomainError("linear_exact_mrl: t must be >= 0");
    const double sqrt_beta = std::sqrt(beta);
    return kSqrt2Pi / sqrt_beta * specfun::gauss_sf_scaled((alpha + beta * t) / sqrt_beta);
}

// ---------------------------------------------------------------------------
// Hypothesis diagnostics
// ---------------------------------------------------------------------------

HypothesisReport check_hypotheses(const HazardModel& model, int n, double epsilon,
                                  const std::vector<double>& t_grid) {
    if (n < 3) throw DomainError("check_hypotheses: n must be >= 3");
    if (!(epsilon > 0.0)) throw DomainError("check_hypotheses: epsilon must be > 0");
    if (t_grid.empty()) throw DomainError("check_hypotheses: empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!model.support().contains(t_grid[i])) {
            throw DomainError("check_hypotheses: grid point outside the support");
        }
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
            throw DomainError("check_hypotheses: t grid must be strictly increasing");
        }
    }

    HypothesisReport report;
    report.n = n;
    report.epsilon = epsilon;
    report.t_grid = t_grid;

    const std::size_t npts = t_grid.size();
    report.ratios_eps.assign(n - 2, std::vector<double>(npts, 0.0));
    if (n - 1 >= 3) {
        report.ratios_growth.assign(n - 3, std::vector<double>(npts, 0.0));
    }

    for (std::size_t i = 0; i < npts; ++i) {
        const double t = t_grid[i];
        const double r = model.hazard(t);
        const double r2 = (n >= 3) ? model.hazard_derivative(2, t) : 0.0;
        for (int j = 3; j <= n; ++j) {
            const double deriv = model.hazard_derivative(j - 1, t);
            report.ratios_eps[j - 3][i] =
                std::fabs(deriv) / std::pow(r, j - j * epsilon);
        }
        for (int j = 3; j <= n - 1; ++j) {
            const double deriv = model.hazard_derivative(j, t);
            const double denom = std::max(1.0, std::pow(std::fabs(r2), (j + 1) / 3.0));
            report.ratios_growth[j - 3][i] = std::fabs(deriv) / denom;
        }
    }

    // Verdict: any decay-ratio column growing tenfold start-to-end is a
    // violation; every column nonincreasing over the top half of the
    // grid is consistency; anything else is inconclusive.
    bool violated = false;
    bool all_decay = true;
    for (const auto& column : report.ratios_eps) {
        const double first = column.front();
        const double last = column.back();
        if (last > 10.0 * first) {
            violated = true;
        }
        bool all_zero = true;
        for (double v : column) {
            if (v != 0.0) all_zero = false;
        }
        if (all_zero) continue;
        const std::size_t start = npts / 2;
        if (npts < 2) {
            all_decay = false;
            continue;
        }
        for (std::size_t i = std::min(start, npts - 2); i + 1 < npts; ++i) {
            if (column[i + 1] > column[i] * (1.0 + 1e-9)) {
                all_decay = false;
                break;
            }
        }
    }

    if (violated) {
        report.verdict = HypothesisVerdict::violated;
    } else if (all_decay) {
        report.verdict = HypothesisVerdict::consistent_with_decay;
    } else {
        report.verdict = HypothesisVerdict::inconclusive;
    }
    return report;
}

}  // namespace mrl::expansion
