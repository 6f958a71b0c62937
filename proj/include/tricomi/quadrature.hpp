#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include "tricomi/errors.hpp"

namespace tricomi {

struct GlRule {
    std::vector<double> node;   // on (-1, 1), open rule
    std::vector<double> weight;
};

namespace detail {

inline GlRule build_gl_rule(int n) {
    GlRule r;
    r.node.resize(n);
    r.weight.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev guess, then Newton on the Legendre polynomial.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = w;
        r.weight[n - 1 - i] = w;
    }
    return r;
}

} // namespace detail

/// Gauss-Legendre rule of order n, cached; thread-safe.
inline const GlRule& gl_rule(int n) {
    static std::map<int, GlRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::build_gl_rule(n)).first;
    return it->second;
}

/// Single-panel Gauss-Legendre integral of f over [a, b].
template <typename F>
double integrate_gl(F&& f, double a, double b, int n) {
    const GlRule& r = gl_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weight[i] * f(mid + half * r.node[i]);
    return s * half;
}

/// Fixed composite rule: `panels` equal panels of GL-n each. Deterministic,
/// smooth in any parameters of f; used where numerical smoothness matters.
template <typename F>
double integrate_composite(F&& f, double a, double b, int n, int panels) {
    double s = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += integrate_gl(f, a + p * h, a + (p + 1) * h, n);
    return s;
}

namespace detail {

// Tolerance is equidistributed by panel length; splitting stops once the
// local error meets the panel's share of the budget or hits the roundoff
// floor relative to the global scale.
template <typename F>
double adapt_gl_rec(F& f, double a, double b, double whole, double tol_per_len,
                    double scale, int depth, double& worst_abs) {
    const double mid = 0.5 * (a + b);
    const double left = integrate_gl(f, a, mid, 15);
    const double right = integrate_gl(f, mid, b, 15);
    const double err = std::fabs(left + right - whole);
    const double allowed = std::max(tol_per_len * (b - a), 1e-16 * scale);
    if (err <= allowed || depth >= 40) {
        if (depth >= 40 && err > allowed) worst_abs = std::max(worst_abs, err);
        return left + right;
    }
    return adapt_gl_rec(f, a, mid, left, tol_per_len, scale, depth + 1, worst_abs) +
           adapt_gl_rec(f, mid, b, right, tol_per_len, scale, depth + 1, worst_abs);
}

} // namespace detail

/// Adaptive Gauss-Legendre quadrature with bisection refinement. The rule is
/// open: endpoints are never evaluated. Throws accuracy_error when the local
/// error cannot be pushed below rel_tol.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol) {
    const double coarse = integrate_gl(f, a, b, 15);
    const double scale = std::fabs(coarse) + 1e-300;
    double worst_abs = 0.0;
    const double v =
        detail::adapt_gl_rec(f, a, b, coarse, rel_tol * scale / (b - a), scale, 0, worst_abs);
    if (worst_abs > rel_tol * (std::fabs(v) + 1e-300) * 4.0)
        throw accuracy_error("adaptive quadrature did not converge",
                             worst_abs / (std::fabs(v) + 1e-300));
    return v;
}

} // namespace tricomi
