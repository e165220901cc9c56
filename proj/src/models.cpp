#include "mrl/models.hpp"

#include "mrl/errors.hpp"
#include "mrl/specfun.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <utility>

namespace mrl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;

struct FamilyInfo {
    Family family;
    const char* name;
    std::vector<const char*> params;
};

const std::vector<FamilyInfo>& family_table() {
    static const std::vector<FamilyInfo> table = {
        {Family::exponential, "exponential", {"rate"}},
        {Family::linear, "linear", {"alpha", "beta"}},
        {Family::chen, "chen", {"lambda", "beta"}},
        {Family::gamma, "gamma", {"mu", "B"}},
        {Family::normal, "normal", {"mu", "sigma"}},
        {Family::maxwell, "maxwell", {"b"}},
        {Family::beta1, "beta1", {"a", "b"}},
        {Family::beta2, "beta2", {"alpha", "beta", "gamma"}},
    };
    return table;
}

const FamilyInfo& family_info(Family family) {
    for (const auto& info : family_table()) {
        if (info.family == family) return info;
    }
    throw DomainError("unknown family");
}

// Parameter constraints; returns a message like "b must be > 0" on
// violation, nullptr when fine.
const char* check_constraint(Family family, const std::string& name, double value) {
    if (!std::isfinite(value)) return "must be finite";
    if (family == Family::normal && name == "mu") return nullptr;  // any real
    if (family == Family::linear && name == "alpha") {
        return value >= 0.0 ? nullptr : "must be >= 0";
    }
    return value > 0.0 ? nullptr : "must be > 0";
}

}  // namespace

const char* family_name(Family family) { return family_info(family).name; }

double ModelSpec::param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) {
        throw DomainError("model " + std::string(family_name(family)) + " has no parameter '" +
                          name + "'");
    }
    return it->second;
}

// ---------------------------------------------------------------------------
// Model-spec grammar:  spec := family "(" pair ("," pair)* ")"
//                      pair := name "=" decimal
// ---------------------------------------------------------------------------

namespace {

struct Scanner {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) {
            throw ParseError(std::string("expected '") + c + "'", pos);
        }
        ++pos;
    }

    std::string identifier() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
        }
        if (pos == start) {
            throw ParseError("expected an identifier", start);
        }
        return text.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        const char* begin = text.c_str() + pos;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin) {
            throw ParseError("expected a number", pos);
        }
        pos += static_cast<std::size_t>(end - begin);
        return value;
    }
};

}  // namespace

ModelSpec parse_model_spec(const std::string& text) {
    Scanner scan{text};

    const std::size_t family_pos = (scan.skip_ws(), scan.pos);
    const std::string fam_name = scan.identifier();
    const FamilyInfo* info = nullptr;
    for (const auto& candidate : family_table()) {
        if (fam_name == candidate.name) {
            info = &candidate;
            break;
        }
    }
    if (info == nullptr) {
        throw ParseError("unknown family '" + fam_name + "'", family_pos);
    }

    ModelSpec spec;
    spec.family = info->family;

    scan.expect('(');
    while (true) {
        const std::size_t name_pos = (scan.skip_ws(), scan.pos);
        const std::string name = scan.identifier();
        if (std::find_if(info->params.begin(), info->params.end(),
                         [&](const char* p) { return name == p; }) == info->params.end()) {
            throw ParseError("unknown parameter '" + name + "' for family " + fam_name, name_pos);
        }
        if (spec.params.count(name) != 0) {
            throw ParseError("duplicate parameter '" + name + "'", name_pos);
        }
        scan.expect('=');
        const std::size_t value_pos = (scan.skip_ws(), scan.pos);
        const double value = scan.number();
        if (const char* msg = check_constraint(spec.family, name, value)) {
            throw ParseError(name + " " + msg, value_pos);
        }
        spec.params[name] = value;

        if (scan.peek() == ',') {
            scan.expect(',');
            continue;
        }
        break;
    }
    scan.expect(')');
    if (!scan.eof()) {
        throw ParseError("trailing characters after model spec", scan.pos);
    }

    for (const char* required : info->params) {
        if (spec.params.count(required) == 0) {
            throw ParseError("missing parameter '" + std::string(required) + "' for family " +
                                 fam_name,
                             text.size());
        }
    }
    return spec;
}

std::string render_model_spec(const ModelSpec& spec) {
    const FamilyInfo& info = family_info(spec.family);
    std::string out = info.name;
    out += '(';
    bool first = true;
    for (const char* name : info.params) {
        if (!first) out += ',';
        first = false;
        out += name;
        out += '=';
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), spec.param(name));
        out.append(buf, res.ptr);
    }
    out += ')';
    return out;
}

// ---------------------------------------------------------------------------
// Support
// ---------------------------------------------------------------------------

bool Support::contains(double t) const {
    if (lo_open ? !(t > lo) : !(t >= lo)) return false;
    return t < hi;
}

bool Support::interior(double t) const { return t > lo && t < hi; }

// ---------------------------------------------------------------------------
// ExpPolyTermSum
// ---------------------------------------------------------------------------

double ExpPolyTermSum::power(const Term& term) const {
    return term.beta_count * beta_exponent + term.int_power;
}

ExpPolyTermSum ExpPolyTermSum::derivative() const {
    std::map<std::pair<int, int>, double> merged;
    for (const Term& term : terms) {
        const double s = power(term);
        // (c, s) -> (c*s, s-1)
        if (s != 0.0) {
            merged[{term.beta_count, term.int_power - 1}] += term.coef * s;
        }
        // (c, s) -> (c*beta, s+beta-1)
        merged[{term.beta_count + 1, term.int_power - 1}] += term.coef * beta_exponent;
    }
    ExpPolyTermSum out;
    out.beta_exponent = beta_exponent;
    out.terms.reserve(merged.size());
    for (const auto& [key, coef] : merged) {
        if (coef != 0.0) {
            out.terms.push_back({coef, key.first, key.second});
        }
    }
    return out;
}

double ExpPolyTermSum::evaluate(double t) const {
    double poly = 0.0;
    for (const Term& term : terms) {
        poly += term.coef * std::pow(t, power(term));
    }
    return poly * std::exp(std::pow(t, beta_exponent));
}

// ---------------------------------------------------------------------------
// HazardModel
// ---------------------------------------------------------------------------

HazardModel::HazardModel(ModelSpec spec) : spec_(std::move(spec)) {
    const FamilyInfo& info = family_info(spec_.family);
    for (const char* name : info.params) {
        const double value = spec_.param(name);  // throws if missing
        if (const char* msg = check_constraint(spec_.family, name, value)) {
            throw DomainError(std::string(info.name) + ": " + name + " " + msg);
        }
    }
    switch (spec_.family) {
        case Family::beta1:
            support_ = {0.0, 1.0, true};
            break;
        case Family::normal:
            support_ = {-kInf, kInf, true};
            break;
        default:
            support_ = {0.0, kInf, false};
            break;
    }
}

double HazardModel::param(const char* name) const { return spec_.param(name); }

void HazardModel::require_in_support(double t, const char* op) const {
    if (!std::isfinite(t) || !support_.contains(t)) {
        throw DomainError(std::string(op) + ": t = " + std::to_string(t) +
                          " outside the support of " + family_name(spec_.family));
    }
}

int HazardModel::derivative_order() const {
    switch (spec_.family) {
        case Family::linear:
        case Family::chen:
            return INT_MAX;
        default:
            return 0;
    }
}

bool HazardModel::has_family_data() const {
    switch (spec_.family) {
        case Family::gamma:
        case Family::normal:
        case Family::maxwell:
        case Family::beta1:
        case Family::beta2:
            return true;
        default:
            return false;
    }
}

double HazardModel::pdf(double t) const {
    require_in_support(t, "pdf");
    switch (spec_.family) {
        case Family::exponential: {
            const double rate = param("rate");
            return rate * std::exp(-rate * t);
        }
        case Family::linear: {
            return hazard(t) * sf(t);
        }
        case Family::chen: {
            return hazard(t) * sf(t);
        }
        case Family::gamma: {
            const double shape = param("mu") / param("B");
            const double scale = param("B");
            if (t == 0.0) {
                if (shape < 1.0) return kInf;
                if (shape == 1.0) return 1.0 / scale;
                return 0.0;
            }
            return std::exp((shape - 1.0) * std::log(t) - t / scale -
                            specfun::log_gamma(shape) - shape * std::log(scale));
        }
        case Family::normal: {
            const double z = (t - param("mu")) / param("sigma");
            return std::exp(-0.5 * z * z) / (param("sigma") * kSqrt2Pi);
        }
        case Family::maxwell: {
            const double b = param("b");
            const double u = (t / b) * (t / b);
            return 4.0 / (b * b * b * std::sqrt(M_PI)) * t * t * std::exp(-u);
        }
        case Family::beta1: {
            const double a = param("a");
            const double b = param("b");
            const double ln_norm = specfun::log_gamma(a + b) - specfun::log_gamma(a) -
                                   specfun::log_gamma(b);
            return std::exp(ln_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
        }
        case Family::beta2: {
            const double alpha = param("alpha");
            const double beta = param("beta");
            const double gamma = param("gamma");
            const double ln_norm = alpha * std::log(gamma) - specfun::log_gamma(alpha) -
                                   specfun::log_gamma(beta) + specfun::log_gamma(alpha + beta);
            if (t == 0.0) {
                if (beta < 1.0) return kInf;
                if (beta == 1.0) return std::exp(ln_norm - (alpha + 1.0) * std::log(gamma));
                return 0.0;
            }
            return std::exp(ln_norm + (beta - 1.0) * std::log(t) -
                            (alpha + beta) * std::log(gamma + t));
        }
    }
    throw DomainError("pdf: unknown family");
}

double HazardModel::sf(double t) const {
    if (!std::isfinite(t)) {
        if (std::isnan(t)) throw DomainError("sf: t must not be NaN");
        return t > 0.0 ? 0.0 : 1.0;
    }
    if (t <= support_.lo && spec_.family != Family::normal) return 1.0;
    if (t >= support_.hi) return 0.0;
    switch (spec_.family) {
        case Family::exponential:
            return std::exp(-param("rate") * t);
        case Family::linear: {
            return std::exp(-cum_hazard(t));
        }
        case Family::chen: {
            // exp{lambda (1 - e^{t^beta})}
            return std::exp(-param("lambda") * std::expm1(std::pow(t, param("beta"))));
        }
        case Family::gamma: {
            const double shape = param("mu") / param("B");
            return specfun::upper_inc_gamma(shape, t / param("B")) / std::tgamma(shape);
        }
        case Family::normal: {
            const double z = (t - param("mu")) / param("sigma");
            return 0.5 * std::erfc(z / kSqrt2);
        }
        case Family::maxwell: {
            const double u = (t / param("b")) * (t / param("b"));
            return specfun::inc_gamma_half_integer(1, u);
        }
        case Family::beta1: {
            // 1 - I_t(a,b), computed as I_{1-t}(b,a) to avoid cancellation
            return specfun::reg_inc_beta(param("b"), param("a"), 1.0 - t);
        }
        case Family::beta2: {
            // 1 - I_{t/(gamma+t)}(beta, alpha) = I_{gamma/(gamma+t)}(alpha, beta)
            const double gamma = param("gamma");
            return specfun::reg_inc_beta(param("alpha"), param("beta"), gamma / (gamma + t));
        }
    }
    throw DomainError("sf: unknown family");
}

double HazardModel::hazard(double t) const {
    require_in_support(t, "hazard");
    switch (spec_.family) {
        case Family::linear:
            return param("alpha") + param("beta") * t;
        case Family::chen: {
            const double lambda = param("lambda");
            const double beta = param("beta");
            return lambda * beta * std::pow(t, beta - 1.0) * std::exp(std::pow(t, beta));
        }
        default: {
            const double s = sf(t);
            if (s <= 0.0) {
                throw EvaluationError("hazard: survival underflow at t = " + std::to_string(t));
            }
            return pdf(t) / s;
        }
    }
}

double HazardModel::cum_hazard(double t) const {
    if (std::isnan(t)) throw DomainError("cum_hazard: t must not be NaN");
    if (t >= support_.hi) return kInf;
    if (t <= support_.lo && spec_.family != Family::normal) return 0.0;
    switch (spec_.family) {
        case Family::exponential:
            return param("rate") * t;
        case Family::linear:
            return param("alpha") * t + 0.5 * param("beta") * t * t;
        case Family::chen:
            return param("lambda") * std::expm1(std::pow(t, param("beta")));
        case Family::normal: {
            const double z = (t - param("mu")) / param("sigma");
            if (z <= 0.0) {
                return -std::log(0.5 * std::erfc(z / kSqrt2));
            }
            // -log sf via the scaled survival; stays finite far beyond
            // the point where sf underflows
            return 0.5 * z * z - std::log(specfun::gauss_sf_scaled(z));
        }
        default: {
            const double s = sf(t);
            if (s <= 0.0) return kInf;  // documented sentinel (beta1 as t -> 1)
            return -std::log(s);
        }
    }
}

double HazardModel::hazard_derivative(int j, double t) const {
    if (j < 0) throw DomainError("hazard_derivative: j must be >= 0");
    if (j == 0) return hazard(t);
    if (j > derivative_order()) {
        throw CapabilityError(std::string("hazard_derivative: ") + family_name(spec_.family) +
                              " has no analytic hazard derivatives of order " + std::to_string(j));
    }
    require_in_support(t, "hazard_derivative");
    switch (spec_.family) {
        case Family::linear:
            return j == 1 ? param("beta") : 0.0;
        case Family::chen: {
            ExpPolyTermSum sum;
            sum.beta_exponent = param("beta");
            sum.terms = {{param("lambda") * param("beta"), 1, -1}};
            for (int i = 0; i < j; ++i) {
                sum = sum.derivative();
            }
            return sum.evaluate(t);
        }
        default:
            throw CapabilityError("hazard_derivative: unreachable");
    }
}

FamilyData HazardModel::family_data(double t) const {
    require_in_support(t, "family_data");
    switch (spec_.family) {
        case Family::gamma:
            return {param("mu"), param("B") * t};
        case Family::normal: {
            const double sigma = param("sigma");
            return {param("mu"), sigma * sigma};
        }
        case Family::maxwell: {
            const double b = param("b");
            return {0.0, (1.0 + b * b / (t * t)) * b * b / 2.0};
        }
        case Family::beta1: {
            const double a = param("a");
            const double b = param("b");
            return {a / (a + b), t * (1.0 - t) / (a + b)};
        }
        case Family::beta2: {
            const double alpha = param("alpha");
            if (alpha <= 1.0) {
                throw DomainError("family_data: beta2 mean undefined for alpha <= 1");
            }
            const double gamma = param("gamma");
            return {param("beta") * gamma / (alpha - 1.0), (t * t + gamma * t) / (alpha - 1.0)};
        }
        default:
            throw CapabilityError(std::string("family_data: not available for ") +
                                  family_name(spec_.family));
    }
}

}  // namespace mrl
