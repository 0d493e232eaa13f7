#pragma once

// Adaptive composite quadrature for piecewise-smooth integrands, and a
// grid-plus-golden-section scalar optimizer. Integrands are split at caller
// supplied breakpoints first; each piece is handled by adaptive Gauss-Kronrod
// (G7,K15) bisection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ibvp {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
struct GK15 {
    static constexpr double xk[8] = {
        0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
        0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
    static constexpr double wk[8] = {
        0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
        0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
    static constexpr double wg[4] = {
        0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};
};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double k = GK15::wk[0] * fc;
    double g = GK15::wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double x = h * GK15::xk[i];
        double s = f(c - x) + f(c + x);
        k += GK15::wk[i] * s;
        if (i % 2 == 0) g += GK15::wg[i / 2] * s;
    }
    kronrod = k * h;
    err = std::fabs((k - g) * h);
}

template <class F>
inline double adapt(const F& f, double a, double b, double tol, int depth) {
    double k, err;
    gk15(f, a, b, k, err);
    if (err <= tol || b - a < 1e-14) {
        if (err > tol && depth <= 0)
            throw QuadratureError("quadrature did not converge to tolerance at max refinement");
        if (err <= tol) return k;
    }
    if (depth <= 0)
        throw QuadratureError("quadrature did not converge to tolerance at max refinement");
    double m = 0.5 * (a + b);
    return adapt(f, a, m, tol / 2, depth - 1) + adapt(f, m, b, tol / 2, depth - 1);
}

}  // namespace detail

/// Integrates f over [lo, hi], splitting first at the interior breakpoints.
/// Tolerance is relative to the accumulated magnitude with a small absolute floor.
template <class F>
inline double integrate(const F& f, double lo, double hi, double rel_tol = 1e-10,
                        std::vector<double> breakpoints = {}) {
    if (!(lo < hi)) return 0.0;
    breakpoints.push_back(lo);
    breakpoints.push_back(hi);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    // first pass to scale the tolerance
    double rough = 0.0;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double a = breakpoints[i], b = breakpoints[i + 1];
        if (b <= lo || a >= hi) continue;
        a = std::max(a, lo);
        b = std::min(b, hi);
        double k, err;
        detail::gk15(f, a, b, k, err);
        rough += std::fabs(k);
    }
    double tol = std::max(rel_tol * std::max(rough, 1e-30), 1e-300);

    double total = 0.0;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double a = std::max(breakpoints[i], lo), b = std::min(breakpoints[i + 1], hi);
        if (!(a < b)) continue;
        total += detail::adapt(f, a, b, tol, 48);
    }
    return total;
}

struct ScalarExtremum {
    double arg = 0.0;
    double value = 0.0;
};

/// Maximizes f on [lo, hi] by a uniform scan followed by golden-section
/// refinement around the best sample; endpoints are always candidates.
template <class F>
inline ScalarExtremum maximize_scalar(const F& f, double lo, double hi, double tol = 1e-9,
                                      int scan_points = 129) {
    if (!(lo <= hi)) throw std::invalid_argument("maximize_scalar: empty interval");
    double best_x = lo, best_v = f(lo);
    for (int i = 1; i < scan_points; ++i) {
        double x = lo + (hi - lo) * i / (scan_points - 1);
        double v = f(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double step = (hi - lo) / (scan_points - 1);
    double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    double xm = 0.5 * (a + b), vm = f(xm);
    if (vm > best_v) {
        best_v = vm;
        best_x = xm;
    }
    return {best_x, best_v};
}

template <class F>
inline ScalarExtremum minimize_scalar(const F& f, double lo, double hi, double tol = 1e-9,
                                      int scan_points = 129) {
    auto r = maximize_scalar([&](double x) { return -f(x); }, lo, hi, tol, scan_points);
    return {r.arg, -r.value};
}

}  // namespace ibvp
