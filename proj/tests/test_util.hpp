#pragma once

// Shared helpers for the test suites: brute-force quadrature oracles
// kept independent of the library's adaptive integrator, relative-error
// checks, and a Richardson-extrapolated central difference.

#include <cmath>
#include <vector>

namespace testutil {

inline double rel_err(double got, double want) {
    if (want == 0.0) return std::fabs(got);
    return std::fabs(got - want) / std::fabs(want);
}

// Composite trapezoid with n panels.
template <typename F>
double trapezoid(F f, double lo, double hi, long n) {
    const double h = (hi - lo) / n;
    double sum = 0.5 * (f(lo) + f(hi));
    for (long i = 1; i < n; ++i) {
        sum += f(lo + h * i);
    }
    return sum * h;
}

// Composite Simpson with n panels (n even).
template <typename F>
double simpson(F f, double lo, double hi, long n) {
    const double h = (hi - lo) / n;
    double sum = f(lo) + f(hi);
    for (long i = 1; i < n; i += 2) {
        sum += 4.0 * f(lo + h * i);
    }
    for (long i = 2; i < n; i += 2) {
        sum += 2.0 * f(lo + h * i);
    }
    return sum * h / 3.0;
}

// Fourth-order central difference (Richardson-extrapolated three-point
// stencil): f'(x) ~ (f(x-2h) - 8 f(x-h) + 8 f(x+h) - f(x+2h)) / 12h.
template <typename F>
double central_diff(F f, double x, double h) {
    return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        out[i] = lo + h * i;
    }
    out.back() = hi;
    return out;
}

}  // namespace testutil
