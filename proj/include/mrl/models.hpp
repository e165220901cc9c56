#pragma once

// The eight supported lifetime models and their evaluatable bundle:
// density, survival, hazard, cumulative hazard, exact hazard derivatives
// where the family admits them, and the (mu, g) data that drives the
// closed-form conditional-mean identity E(X|X>t) = mu + g(t) r(t).

#include <map>
#include <string>
#include <vector>

namespace mrl {

enum class Family {
    exponential,
    linear,
    chen,
    gamma,
    normal,
    maxwell,
    beta1,
    beta2,
};

const char* family_name(Family family);

/// Parsed identity + parameters of one model.
///
/// Parameter names and constraints per family:
///   exponential(rate)         rate > 0
///   linear(alpha, beta)       alpha >= 0, beta > 0
///   chen(lambda, beta)        lambda > 0, beta > 0
///   gamma(mu, B)              mu > 0, B > 0
///   normal(mu, sigma)         sigma > 0
///   maxwell(b)                b > 0
///   beta1(a, b)               a > 0, b > 0
///   beta2(alpha, beta, gamma) all > 0 (mean requires alpha > 1)
struct ModelSpec {
    Family family = Family::exponential;
    std::map<std::string, double> params;

    double param(const std::string& name) const;
};

/// Parse `family "(" name "=" number ("," name "=" number)* ")"`,
/// whitespace-insensitive, case-sensitive names, scientific notation
/// accepted. Throws mrl::ParseError with position and reason.
ModelSpec parse_model_spec(const std::string& text);

/// Canonical rendering; parse_model_spec(render_model_spec(s)) == s.
std::string render_model_spec(const ModelSpec& spec);

/// Support interval [lo, hi); lo_open marks an open left endpoint
/// (beta1 lives on (0,1), the normal model on the whole line).
struct Support {
    double lo;
    double hi;
    bool lo_open;

    bool contains(double t) const;
    bool interior(double t) const;
};

/// Sum of terms c * t^(i*beta + j) * e^{t^beta}; closed under
/// differentiation via (c, s) -> (c*s, s-1) + (c*beta, s+beta-1).
/// Powers are kept as exact integer pairs (i, j) so differentiating
/// never drifts and like terms merge exactly. Carries the Chen hazard
/// and all of its derivatives.
struct ExpPolyTermSum {
    struct Term {
        double coef;
        int beta_count;  // i in power = i*beta + j
        int int_power;   // j
    };

    double beta_exponent = 1.0;
    std::vector<Term> terms;

    double power(const Term& term) const;
    ExpPolyTermSum derivative() const;
    double evaluate(double t) const;
};

struct FamilyData {
    double mu;
    double g;
};

/// Immutable evaluatable model. All members are pure; safe to share
/// across threads.
class HazardModel {
  public:
    explicit HazardModel(ModelSpec spec);

    const ModelSpec& spec() const { return spec_; }
    Family family() const { return spec_.family; }
    Support support() const { return support_; }

    /// Max derivative order j with an exact hazard_derivative
    /// (INT_MAX stands in for "all orders": linear, chen).
    int derivative_order() const;
    bool has_family_data() const;

    /// Family density at t; throws DomainError outside the support.
    double pdf(double t) const;

    /// Survival F-bar(t); 1 below the support, 0 at or above its end.
    double sf(double t) const;

    /// Failure rate r(t) = pdf/sf (closed form for linear and chen).
    /// Throws EvaluationError("survival underflow") where sf(t) has
    /// underflowed to 0 but t is inside the support.
    double hazard(double t) const;

    /// Cumulative hazard R(t) = -log sf(t), stable closed forms where
    /// available. Returns +inf where sf(t) is exactly 0 (beta1 as t->1).
    double cum_hazard(double t) const;

    /// Exact j-th hazard derivative; j = 0 returns hazard(t).
    /// Throws CapabilityError when the family lacks analytic
    /// derivatives of order j.
    double hazard_derivative(int j, double t) const;

    /// (mu, g(t)) of the conditional-mean identity; available for
    /// gamma, normal, maxwell, beta1, beta2. beta2 requires alpha > 1.
    FamilyData family_data(double t) const;

  private:
    double param(const char* name) const;
    void require_in_support(double t, const char* op) const;

    ModelSpec spec_;
    Support support_;
};

}  // namespace mrl
