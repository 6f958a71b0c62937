#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "tricomi/fft.hpp"
#include "tricomi/grid.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/trajectory.hpp"

// Linear solves for d^2_t v - t d^2_x v = F: mode-exact Airy propagation of
// the homogeneous problem, the equivalent Fourier-multiplier symbols built
// from Kummer's function, and the explicit light-cone kernel for the
// inhomogeneous problem with zero data.

namespace tricomi {

/// What to do once the characteristic cone reaches the box boundary: refuse,
/// or keep evolving the periodic problem (wrap-around becomes part of the
/// model, used by the long-time decay experiments).
enum class ConePolicy { strict, periodic_wrap };

/// Mode propagator values: vhat(t) = v1 * fhat + v2 * ghat, and the time
/// derivatives; real because the mode equation vhat'' + t xi^2 vhat = 0 has
/// real coefficients.
struct ModeSymbols {
    double v1, v2, v1_t, v2_t;
};

/// Fundamental-system route: the mode equation has the Airy pair at argument
/// s = -xi^{2/3} t as a basis; coefficients follow from the data at t = 0.
inline ModeSymbols airy_mode_symbols(double t, double xi) {
    const double pi = 3.14159265358979323846;
    double axi = std::fabs(xi);
    if (axi == 0.0) return {1.0, t, 0.0, 1.0};
    double kappa = std::pow(axi, 2.0 / 3.0);
    auto z0 = airy_pair(0.0);
    auto zt = airy_pair(-kappa * t);
    if (!std::isfinite(zt.ai) || !std::isfinite(zt.bi))
        throw accuracy_error("airy_mode_symbols: Airy evaluation overflowed", 1.0);
    ModeSymbols m;
    m.v1 = pi * (z0.bi_prime * zt.ai - z0.ai_prime * zt.bi);
    m.v1_t = -kappa * pi * (z0.bi_prime * zt.ai_prime - z0.ai_prime * zt.bi_prime);
    m.v2 = pi / kappa * (z0.bi * zt.ai - z0.ai * zt.bi);
    m.v2_t = -pi * (z0.bi * zt.ai_prime - z0.ai * zt.bi_prime);
    return m;
}

/// Multiplier route: V1 = e^{-z/2} Phi(1/6, 1/3; z) and V2 = t e^{-z/2}
/// Phi(5/6, 5/3; z) with z = 2 i phi(t) |xi|. Normalized so V1(t,0) = 1 and
/// V2(t,0) = t; agrees with the Airy route on the resolved band.
inline std::pair<std::complex<double>, std::complex<double>> symbol_v1_v2(double t, double xi) {
    using cplx = std::complex<double>;
    if (t < 0.0) throw std::domain_error("symbol_v1_v2: t must be >= 0");
    double y = 2.0 * characteristic_radius(t) * std::fabs(xi);
    if (y == 0.0) return {cplx(1.0, 0.0), cplx(t, 0.0)};
    cplx z(0.0, y);
    cplx damp = std::exp(-z / 2.0);
    cplx v1 = damp * kummer_phi(1.0 / 6.0, 1.0 / 3.0, z);
    cplx v2 = t * damp * kummer_phi(5.0 / 6.0, 5.0 / 3.0, z);
    return {v1, v2};
}

/// Exact (mode-wise) solution of the homogeneous problem at time t from data
/// (epsilon f, epsilon g). Under the strict policy the cone must stay inside
/// the box up to t.
inline FieldState evolve_homogeneous_exact(const InitialData& data, double t,
                                           const Grid1D& grid,
                                           ConePolicy policy = ConePolicy::strict,
                                           Fft* fft = nullptr) {
    if (t < 0.0) throw std::domain_error("evolve_homogeneous_exact: t must be >= 0");
    if (policy == ConePolicy::strict && !grid.cone_contained(data.M, t))
        throw cone_error("evolve_homogeneous_exact: characteristic cone reaches the boundary");
    std::unique_ptr<Fft> local;
    if (!fft) local = std::make_unique<Fft>(grid.npoints);
    Fft& w = fft ? *fft : *local;

    std::vector<std::complex<double>> fh, gh;
    w.forward(data.f, fh);
    w.forward(data.g, gh);
    const int n = grid.npoints;
    const double pi = 3.14159265358979323846;
    std::vector<std::complex<double>> uh(n), uth(n);
    for (int k = 0; k <= n / 2; ++k) {
        double xi = pi * k / grid.half_width;
        ModeSymbols m = airy_mode_symbols(t, xi);
        auto apply = [&](int idx) {
            uh[idx] = m.v1 * fh[idx] + m.v2 * gh[idx];
            uth[idx] = m.v1_t * fh[idx] + m.v2_t * gh[idx];
        };
        apply(k);
        if (k > 0 && k < n / 2) apply(n - k);
    }
    FieldState st;
    st.t = t;
    st.grid = grid;
    w.inverse(uh, st.u);
    w.inverse(uth, st.ut);
    const double eps = data.epsilon;
    for (int j = 0; j < n; ++j) {
        st.u[j] *= eps;
        st.ut[j] *= eps;
    }
    return st;
}

// -- light-cone kernel -------------------------------------------------------

namespace detail {

/// H(1/6, 1/6, 1, z) accelerated by a Chebyshev fit in the variable
/// zeta = (1-z)^{1/3}, in which the kernel factor is analytic on [0, 1].
inline double hyp_kernel_16(double z) {
    constexpr int N = 80;
    static const std::vector<double> coeff = [] {
        const double pi = 3.14159265358979323846;
        // psi(zeta) = H(1/6,1/6,1, 1 - zeta^3); psi(0) from the closed form
        // H(g,g,1,1) = Gamma(1-2g)/Gamma(1-g)^2.
        auto psi = [](double zeta) {
            if (zeta <= 0.0) {
                double g56 = std::tgamma(5.0 / 6.0);
                return std::tgamma(2.0 / 3.0) / (g56 * g56);
            }
            double z = 1.0 - zeta * zeta * zeta;
            if (z < 0.0) z = 0.0;
            return gauss_hyp_unit(1.0 / 6.0, z, 1e-13);
        };
        std::vector<double> fv(N + 1);
        for (int j = 0; j <= N; ++j) {
            double xj = std::cos(pi * j / N);       // Chebyshev-Lobatto on [-1,1]
            double zeta = 0.5 * (xj + 1.0);
            fv[j] = psi(zeta);
        }
        std::vector<double> c(N + 1, 0.0);
        for (int k = 0; k <= N; ++k) {
            double s = 0.0;
            for (int j = 0; j <= N; ++j) {
                double w = (j == 0 || j == N) ? 0.5 : 1.0;
                s += w * fv[j] * std::cos(pi * k * j / N);
            }
            c[k] = 2.0 * s / N;
        }
        c[0] *= 0.5;
        c[N] *= 0.5;
        return c;
    }();
    double zeta = std::cbrt(std::max(0.0, 1.0 - z));
    double x = 2.0 * zeta - 1.0;
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int k = N; k >= 1; --k) {
        double b0 = 2.0 * x * b1 - b2 + coeff[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + coeff[0];
}

} // namespace detail

/// Kernel of the inhomogeneous solution operator (without the overall
/// constant): (phi_t + phi_s + (x-y))^{-1/6} (phi_t + phi_s - (x-y))^{-1/6}
/// H(1/6, 1/6, 1, z) on the strict interior |x-y| < phi(t) - phi(s).
inline double duhamel_kernel(double t, double s, double x, double y) {
    if (!(s >= 0.0 && s < t)) throw std::domain_error("duhamel_kernel: need 0 <= s < t");
    const double pt = characteristic_radius(t), ps = characteristic_radius(s);
    const double d = x - y;
    if (!(std::fabs(d) < pt - ps))
        throw cone_error("duhamel_kernel: point on or outside the dependence cone");
    const double num = (pt - ps) * (pt - ps) - d * d;
    const double den = (pt + ps) * (pt + ps) - d * d;
    const double z = num / den;
    if (z >= 1.0 - 1e-14)
        throw cone_error("duhamel_kernel: light-cone singularity (z -> 1)");
    return std::pow(den, -1.0 / 6.0) * detail::hyp_kernel_16(z);
}

struct DuhamelOptions {
    double rel_tol = 1e-6;
    int s_panels = 8;   // panels in the sigma = sqrt(s) variable
    int y_panels = 8;
    int gl_order = 16;
    int max_doublings = 3;
    bool adaptive = true;
};

namespace detail {

// Kernel for quadrature nodes strictly inside the dependence region; the
// hypergeometric factor extends continuously to z = 1 (the s -> 0 edge), so
// no singularity guard is needed here.
inline double duhamel_kernel_interior(double pt, double ps, double d) {
    const double num = (pt - ps) * (pt - ps) - d * d;
    const double den = (pt + ps) * (pt + ps) - d * d;
    double z = num / den;
    if (z > 1.0) z = 1.0;
    if (z < 0.0) z = 0.0;
    return std::pow(den, -1.0 / 6.0) * hyp_kernel_16(z);
}

inline double duhamel_point(const SourceTerm& F, double C, double t, double x,
                            double s_lo, double s_hi, int s_panels, int y_panels,
                            int gl_order) {
    // sqrt substitution in s keeps the integrand smooth at s = 0, where the
    // kernel's hypergeometric factor carries a (phi_s)^{1/3}-type branch.
    const double pt = characteristic_radius(t);
    const GlRule& rule = gl_rule(gl_order);
    const double sig_lo = std::sqrt(s_lo), sig_hi = std::sqrt(s_hi);
    const double hs = (sig_hi - sig_lo) / s_panels;
    double acc = 0.0;
    for (int ps = 0; ps < s_panels; ++ps) {
        double a = sig_lo + ps * hs;
        for (size_t is = 0; is < rule.node.size(); ++is) {
            double sig = a + 0.5 * hs * (rule.node[is] + 1.0);
            double ws = 0.5 * hs * rule.weight[is] * 2.0 * sig;
            double s = sig * sig;
            double reach = pt - characteristic_radius(s);
            if (reach <= 0.0) continue;
            double ylo = std::max(x - reach, F.x_min), yhi = std::min(x + reach, F.x_max);
            if (ylo >= yhi) continue;
            const double hy = (yhi - ylo) / y_panels;
            double inner = 0.0;
            for (int py = 0; py < y_panels; ++py) {
                double b = ylo + py * hy;
                for (size_t iy = 0; iy < rule.node.size(); ++iy) {
                    double y = b + 0.5 * hy * (rule.node[iy] + 1.0);
                    double fv = F(s, y);
                    if (fv == 0.0) continue;
                    double ps = characteristic_radius(s);
                    inner += 0.5 * hy * rule.weight[iy] *
                             duhamel_kernel_interior(pt, ps, x - y) * fv;
                }
            }
            acc += ws * inner;
        }
    }
    return C * acc;
}

} // namespace detail

/// Overall constant of the light-cone representation, fixed once by matching
/// the exact spatially flat solution w = t^2/2 of F == 1 and frozen
/// (Richardson-extrapolated across panel refinements, accurate to ~1e-10).
inline double duhamel_constant() { return 0.550321208149; }

/// Solution of the zero-data inhomogeneous problem at time t on the grid, by
/// tensor quadrature of the light-cone kernel against F.
inline ScalarField duhamel_solve(const SourceTerm& F, double t, const Grid1D& grid,
                                 const DuhamelOptions& opts = {}) {
    if (!(t > 0.0)) throw std::domain_error("duhamel_solve: t must be positive");
    const double C = duhamel_constant();
    const double s_lo = std::max(0.0, F.s_min);
    const double s_hi = std::min(t, F.s_max);
    ScalarField out;
    out.t = t;
    out.grid = grid;
    out.u.assign(grid.npoints, 0.0);
    if (s_lo >= s_hi) return out;  // source not yet active

    auto field_at = [&](int sp, int yp, std::vector<double>& w) {
        w.resize(grid.npoints);
        for (int j = 0; j < grid.npoints; ++j)
            w[j] = detail::duhamel_point(F, C, t, grid.x(j), s_lo, s_hi, sp, yp,
                                         opts.gl_order);
    };

    int sp = opts.s_panels, yp = opts.y_panels;
    field_at(sp, yp, out.u);
    if (!opts.adaptive) return out;
    std::vector<double> refined;
    double err = 0.0;
    for (int d = 0; d < opts.max_doublings; ++d) {
        sp *= 2;
        yp *= 2;
        field_at(sp, yp, refined);
        double diff = 0.0, scale = 0.0;
        for (int j = 0; j < grid.npoints; ++j) {
            diff += (refined[j] - out.u[j]) * (refined[j] - out.u[j]);
            scale += refined[j] * refined[j];
        }
        err = std::sqrt(diff / (scale + 1e-300));
        out.u = refined;
        if (err < opts.rel_tol) return out;
    }
    throw accuracy_error("duhamel_solve: quadrature did not reach tolerance near the cone", err);
}

/// Least-squares slope of log sup-norm against log t over a window.
struct DecayFit {
    double slope = 0.0;
    double r2 = 0.0;
};

inline DecayFit decay_fit(const TrajectoryRecord& record, double t_lo, double t_hi) {
    std::vector<double> lt, ls;
    for (const auto& s : record.samples) {
        if (s.t < t_lo || s.t > t_hi || !(s.sup > 0.0)) continue;
        lt.push_back(std::log(s.t));
        ls.push_back(std::log(s.sup));
    }
    if (lt.size() < 20)
        throw std::invalid_argument("decay_fit: need at least 20 samples in the window");
    double n = (double)lt.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < lt.size(); ++i) {
        sx += lt[i];
        sy += ls[i];
        sxx += lt[i] * lt[i];
        sxy += lt[i] * ls[i];
        syy += ls[i] * ls[i];
    }
    DecayFit f;
    double denom = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - f.slope * sx) / n;
    double sst = syy - sy * sy / n, ssr = 0.0;
    for (size_t i = 0; i < lt.size(); ++i) {
        double e = ls[i] - intercept - f.slope * lt[i];
        ssr += e * e;
    }
    f.r2 = (sst > 0.0) ? 1.0 - ssr / sst : 1.0;
    return f;
}

} // namespace tricomi
