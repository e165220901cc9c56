#include "mrl/quadrature.hpp"

#include "mrl/errors.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace mrl {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (symmetric half).
// Even-indexed Kronrod abscissae carry the embedded Gauss-7 rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,  // Kronrod only
    0.949107912342758524526189684047851,  // Gauss-7
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839998060075660,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double lo, hi;
    double value;
    double err;
    bool operator<(const Panel& other) const { return err < other.err; }
};

// One Gauss-Kronrod 7/15 application with a quadpack-style rescaled
// error estimate.
Panel gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    double fv1[7], fv2[7];
    const double fc = f(center);
    double result_gauss = kWg[3] * fc;
    double result_kronrod = kWgk[7] * fc;

    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        fv1[i] = f(center - dx);
        fv2[i] = f(center + dx);
        const double fsum = fv1[i] + fv2[i];
        result_kronrod += kWgk[i] * fsum;
        if (i % 2 == 1) {
            result_gauss += kWg[i / 2] * fsum;
        }
    }

    const double mean = 0.5 * result_kronrod;
    double result_asc = kWgk[7] * std::fabs(fc - mean);
    for (int i = 0; i < 7; ++i) {
        result_asc += kWgk[i] * (std::fabs(fv1[i] - mean) + std::fabs(fv2[i] - mean));
    }
    result_asc *= std::fabs(half);

    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.value = result_kronrod * half;

    double err = std::fabs((result_kronrod - result_gauss) * half);
    if (result_asc != 0.0 && err != 0.0) {
        err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
    }
    p.err = err;

    if (!std::isfinite(p.value) || !std::isfinite(p.err)) {
        throw EvaluationError("integrate_adaptive: integrand produced a non-finite value");
    }
    return p;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol, double abs_tol, long max_evals) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw DomainError("integrate_adaptive: need finite lo < hi");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw DomainError("integrate_adaptive: tolerances must be > 0");
    }

    std::priority_queue<Panel> panels;
    panels.push(gk15(f, lo, hi));
    long evals = 15;
    double total_value = panels.top().value;
    double total_err = panels.top().err;

    while (total_err > std::max(abs_tol, rel_tol * std::fabs(total_value))) {
        if (evals + 30 > max_evals) {
            throw ConvergenceError("integrate_adaptive: evaluation budget exhausted", total_value,
                                   total_err);
        }
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            // interval no longer bisectable at double precision
            throw ConvergenceError("integrate_adaptive: interval collapsed before convergence",
                                   total_value, total_err);
        }
        Panel left = gk15(f, worst.lo, mid);
        Panel right = gk15(f, mid, worst.hi);
        evals += 30;
        total_value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        panels.push(left);
        panels.push(right);
    }

    // Recompute the totals from the panel list to shed accumulated
    // cancellation in the running sums.
    double value = 0.0;
    double err = 0.0;
    std::vector<Panel> drain;
    drain.reserve(panels.size());
    while (!panels.empty()) {
        drain.push_back(panels.top());
        panels.pop();
    }
    for (auto it = drain.rbegin(); it != drain.rend(); ++it) {
        value += it->value;
        err += it->err;
    }

    QuadratureResult qr;
    qr.value = value;
    qr.abs_err_est = err;
    qr.evals = evals;
    return qr;
}

}  // namespace mrl
