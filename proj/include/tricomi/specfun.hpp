#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "tricomi/errors.hpp"
#include "tricomi/quadrature.hpp"

// Special functions backing the degenerate wave propagator and the blowup
// functionals: modified Bessel K_nu, the Airy pair (Ai, Bi), the decaying
// Airy-type profile lambda(t) with lambda(0) = 1, Kummer's confluent function
// on the imaginary axis, and the Gauss hypergeometric factor H(g, g, 1, z)
// of the light-cone kernel. All evaluations are pure and thread-safe.

namespace tricomi {

/// Parameter window for table generation.
struct EvalDomain {
    double t_min = 0.0;
    double t_max = 1.0;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;

    static EvalDomain make(double t_min, double t_max, double abs_tol = 1e-12,
                           double rel_tol = 1e-12) {
        if (!(t_min < t_max)) throw std::domain_error("EvalDomain: t_min must be < t_max");
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::domain_error("EvalDomain: tolerances must be positive");
        if (t_min < 0.0) throw std::domain_error("EvalDomain: t_min must be >= 0");
        return EvalDomain{t_min, t_max, abs_tol, rel_tol};
    }
};

/// Airy pair with derivatives at one argument. bi saturates to +inf when
/// the growing branch overflows; ai underflows to 0 there.
struct AiryPairValue {
    double ai = 0.0;
    double bi = 0.0;
    double ai_prime = 0.0;
    double bi_prime = 0.0;
    double argument = 0.0;

    double wronskian() const { return ai * bi_prime - ai_prime * bi; }
    bool saturated() const { return !std::isfinite(bi) || !std::isfinite(bi_prime); }
};

namespace detail {

// ---------------------------------------------------------------------------
// Modified Bessel K via the real integral K_nu(t) = int_0^inf e^{-t cosh z}
// cosh(nu z) dz. The substitution t(cosh z - 1) = v^2 turns the integrand
// into e^{-v^2} times a smooth algebraic factor:
//   e^t K_nu(t) = int_0^V e^{-v^2} cosh(nu z(v)) 2/sqrt(2t+v^2) dv,
//   z(v) = asinh((v/t) sqrt(2t+v^2)),  V = sqrt(55).
// The truncation keeps the neglected weight e^{-t cosh Z} below 1e-18 of the
// leading scale for all orders used here.
// ---------------------------------------------------------------------------

inline double bessel_scaled_integrand(double nu, double t, double v) {
    double root = std::sqrt(2.0 * t + v * v);
    double z = std::asinh(v / t * root);
    return std::exp(-v * v) * std::cosh(nu * z) * 2.0 / root;
}

inline double bessel_k_scaled_quad(double nu, double t, double rel_tol) {
    const double V = std::sqrt(55.0);
    return integrate_adaptive(
        [nu, t](double v) { return bessel_scaled_integrand(nu, t, v); }, 0.0, V, rel_tol);
}

// Fixed-order variant: numerically smooth in t (no adaptivity jitter), used
// inside lambda(t) where second differences of the result are taken.
inline double bessel_k_scaled_smooth(double nu, double t) {
    const double V = std::sqrt(55.0);
    return integrate_composite(
        [nu, t](double v) { return bessel_scaled_integrand(nu, t, v); }, 0.0, V, 48, 5);
}

// Large-argument expansion sqrt(pi/2t) (1 + sum_k a_k(nu) / t^k), valid and
// used for t >= 30; agreement with the quadrature in the overlap window is a
// tested property.
inline double bessel_k_scaled_asymptotic(double nu, double t) {
    const double pi = 3.14159265358979323846;
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 40; ++k) {
        double next = term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * t);
        if (std::fabs(next) >= std::fabs(term)) break;
        term = next;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return std::sqrt(pi / (2.0 * t)) * sum;
}

inline double bessel_k_scaled(double nu, double t, double rel_tol) {
    if (t >= 30.0) return bessel_k_scaled_asymptotic(nu, t);
    return bessel_k_scaled_quad(nu, t, rel_tol);
}

// Modified Bessel I_nu for the growing Airy branch:
//   I_nu(x) = (1/pi) int_0^pi e^{x cos h} cos(nu h) dh
//           - sin(nu pi)/pi int_0^inf e^{-x cosh z - nu z} dz.
inline double bessel_i(double nu, double x) {
    const double pi = 3.14159265358979323846;
    double osc = integrate_gl(
        [nu, x](double h) { return std::exp(x * std::cos(h)) * std::cos(nu * h); }, 0.0, pi,
        160) / pi;
    const double V = std::sqrt(55.0);
    double tail = integrate_composite(
        [nu, x](double v) {
            double root = std::sqrt(2.0 * x + v * v);
            double z = std::asinh(v / x * root);
            return std::exp(-v * v - nu * z) * 2.0 / root;
        },
        0.0, V, 48, 5);
    return osc - std::sin(nu * pi) / pi * std::exp(-x) * tail;
}

// ---------------------------------------------------------------------------
// Airy pair. Four regimes:
//   s <= -9          oscillatory asymptotic series
//   -9 < s < 0.5     Taylor marching from tabulated anchors (y'' = s y)
//   0.5 <= s < 12    Bessel route: Ai from K_{1/3}, Bi from I_{+-1/3}
//   s >= 12          exponential asymptotic series
// Region boundaries are chosen so every regime carries ~1e-13 or better.
// ---------------------------------------------------------------------------

struct AiryAnchor {
    double s, ai, aip, bi, bip;
};

// One Taylor step for y'' = s y from (y, yp) at s0 to s0 + h.
inline void airy_taylor_step(double s0, double h, double& y, double& yp) {
    constexpr int K = 40;
    std::array<double, K + 2> c{};
    c[0] = y;
    c[1] = yp;
    for (int k = 0; k + 2 <= K + 1; ++k) {
        double prev = (k >= 1) ? c[k - 1] : 0.0;
        c[k + 2] = (s0 * c[k] + prev) / ((k + 1.0) * (k + 2.0));
    }
    double val = 0.0, der = 0.0;
    for (int k = K + 1; k >= 1; --k) {
        val = val * h + c[k];
        der = der * h + k * c[k];
    }
    val = val * h + c[0];
    y = val;
    yp = der;
}

inline const std::vector<AiryAnchor>& airy_anchors() {
    static const std::vector<AiryAnchor> table = [] {
        const double gamma13 = std::tgamma(1.0 / 3.0);
        const double gamma23 = std::tgamma(2.0 / 3.0);
        const double ai0 = std::pow(3.0, -2.0 / 3.0) / gamma23;
        const double aip0 = -std::pow(3.0, -1.0 / 3.0) / gamma13;
        const double bi0 = std::pow(3.0, -1.0 / 6.0) / gamma23;
        const double bip0 = std::pow(3.0, 1.0 / 6.0) / gamma13;
        // Anchors at s = 1.0, 0.5, 0.0, -0.5, ..., -9.0 (index i -> 1 - i/2).
        std::vector<AiryAnchor> t(21);
        t[2] = {0.0, ai0, aip0, bi0, bip0};
        for (int i = 2; i > 0; --i) {  // march up to +1
            AiryAnchor a = t[i];
            double ai = a.ai, aip = a.aip, bi = a.bi, bip = a.bip;
            airy_taylor_step(a.s, 0.5, ai, aip);
            airy_taylor_step(a.s, 0.5, bi, bip);
            t[i - 1] = {a.s + 0.5, ai, aip, bi, bip};
        }
        for (int i = 2; i + 1 < (int)t.size(); ++i) {  // march down to -9
            AiryAnchor a = t[i];
            double ai = a.ai, aip = a.aip, bi = a.bi, bip = a.bip;
            airy_taylor_step(a.s, -0.5, ai, aip);
            airy_taylor_step(a.s, -0.5, bi, bip);
            t[i + 1] = {a.s - 0.5, ai, aip, bi, bip};
        }
        return t;
    }();
    return table;
}

// Coefficients of the Airy asymptotic series.
inline void airy_asym_uv(int k, double& u, double& v, double u_prev) {
    u = u_prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
        (216.0 * k * (2.0 * k - 1.0));
    v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
}

inline AiryPairValue airy_negative_asymptotic(double s) {
    const double pi = 3.14159265358979323846;
    const double x = -s;
    const double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
    double P = 1.0, Q = 0.0, R = 1.0, S = 0.0;
    double u = 1.0, v = 1.0;
    double zpow = 1.0;
    for (int k = 1; k <= 40; ++k) {
        double uk, vk;
        airy_asym_uv(k, uk, vk, u);
        u = uk;
        zpow /= zeta;
        double tu = u * zpow, tv = vk * zpow;
        if (std::fabs(tu) < 1e-18 && k > 4) break;
        int m = k / 2;
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1) {  // odd index -> Q, S
            Q += sgn * tu;
            S += sgn * tv;
        } else {  // even index -> P, R
            P += sgn * tu;
            R += sgn * tv;
        }
        v = vk;
    }
    (void)v;
    const double ph = zeta - 0.25 * pi;
    const double cp = std::cos(ph), sp = std::sin(ph);
    const double amp = 1.0 / (std::sqrt(pi) * std::pow(x, 0.25));
    const double damp = std::pow(x, 0.25) / std::sqrt(pi);
    AiryPairValue r;
    r.argument = s;
    r.ai = amp * (cp * P + sp * Q);
    r.bi = amp * (-sp * P + cp * Q);
    r.ai_prime = damp * (sp * R - cp * S);
    r.bi_prime = damp * (cp * R + sp * S);
    return r;
}

inline AiryPairValue airy_positive_asymptotic(double s) {
    const double pi = 3.14159265358979323846;
    const double zeta = 2.0 / 3.0 * std::pow(s, 1.5);
    double sum_a = 1.0, sum_b = 1.0, sum_ap = 1.0, sum_bp = 1.0;
    double u = 1.0, zpow = 1.0, sgn = 1.0;
    for (int k = 1; k <= 40; ++k) {
        double uk, vk;
        airy_asym_uv(k, uk, vk, u);
        u = uk;
        zpow /= zeta;
        sgn = -sgn;
        double tu = u * zpow, tv = vk * zpow;
        if (std::fabs(tu) < 1e-18 && k > 4) break;
        sum_a += sgn * tu;
        sum_ap += sgn * tv;
        sum_b += tu;
        sum_bp += tv;
    }
    AiryPairValue r;
    r.argument = s;
    const double s4 = std::pow(s, 0.25);
    if (zeta > 705.0) {  // growing branch overflows; flag by saturation
        r.ai = 0.0;
        r.ai_prime = 0.0;
        r.bi = std::numeric_limits<double>::infinity();
        r.bi_prime = std::numeric_limits<double>::infinity();
        return r;
    }
    const double em = std::exp(-zeta), ep = std::exp(zeta);
    r.ai = em / (2.0 * std::sqrt(pi) * s4) * sum_a;
    r.ai_prime = -s4 * em / (2.0 * std::sqrt(pi)) * sum_ap;
    r.bi = ep / (std::sqrt(pi) * s4) * sum_b;
    r.bi_prime = s4 * ep / std::sqrt(pi) * sum_bp;
    return r;
}

inline AiryPairValue airy_bessel_route(double s) {
    const double pi = 3.14159265358979323846;
    const double zeta = 2.0 / 3.0 * std::pow(s, 1.5);
    const double em = std::exp(-zeta);
    AiryPairValue r;
    r.argument = s;
    r.ai = 1.0 / pi * std::sqrt(s / 3.0) * em * bessel_k_scaled_smooth(1.0 / 3.0, zeta);
    r.ai_prime = -s / (pi * std::sqrt(3.0)) * em * bessel_k_scaled_smooth(2.0 / 3.0, zeta);
    r.bi = std::sqrt(s / 3.0) * (bessel_i(-1.0 / 3.0, zeta) + bessel_i(1.0 / 3.0, zeta));
    r.bi_prime = s / std::sqrt(3.0) * (bessel_i(-2.0 / 3.0, zeta) + bessel_i(2.0 / 3.0, zeta));
    return r;
}

} // namespace detail

/// Modified Bessel K_nu(t) for 0 < nu < 1, t > 0, by quadrature of the
/// defining integral (asymptotic form for t >= 30).
inline double bessel_k(double nu, double t, double rel_tol = 1e-12) {
    if (!(t > 0.0)) throw std::domain_error("bessel_k: t must be positive");
    if (!(nu > 0.0 && nu < 1.0)) throw std::domain_error("bessel_k: nu must lie in (0,1)");
    if (t > 680.0) return 0.0;  // e^{-t} underflows; value below double range
    return std::exp(-t) * detail::bessel_k_scaled(nu, t, rel_tol);
}

/// Airy pair (Ai, Bi) and derivatives at any real argument.
inline AiryPairValue airy_pair(double s) {
    if (s <= -9.0) return detail::airy_negative_asymptotic(s);
    if (s >= 12.0) return detail::airy_positive_asymptotic(s);
    if (s >= 0.5) return detail::airy_bessel_route(s);
    const auto& anchors = detail::airy_anchors();
    int idx = (int)std::lround((1.0 - s) * 2.0);
    idx = std::max(0, std::min((int)anchors.size() - 1, idx));
    const auto& a = anchors[idx];
    AiryPairValue r;
    r.argument = s;
    double ai = a.ai, aip = a.aip, bi = a.bi, bip = a.bip;
    detail::airy_taylor_step(a.s, s - a.s, ai, aip);
    detail::airy_taylor_step(a.s, s - a.s, bi, bip);
    r.ai = ai;
    r.ai_prime = aip;
    r.bi = bi;
    r.bi_prime = bip;
    return r;
}

/// Decaying solution of lambda'' = t lambda with lambda(0) = 1, lambda(inf) = 0,
/// realized through K_{1/3}: lambda(t) = Gamma(2/3) 3^{1/6}/pi sqrt(t)
/// K_{1/3}(2/3 t^{3/2}) = Ai(t)/Ai(0). Returns 0 with *underflow set once the
/// exponential factor leaves double range.
inline double airy_lambda(double t, bool* underflow = nullptr) {
    if (underflow) *underflow = false;
    if (t < 0.0) throw std::domain_error("airy_lambda: t must be >= 0");
    if (t == 0.0) return 1.0;
    const double pi = 3.14159265358979323846;
    const double zeta = 2.0 / 3.0 * std::pow(t, 1.5);
    if (zeta > 700.0) {
        if (underflow) *underflow = true;
        return 0.0;
    }
    const double c = std::tgamma(2.0 / 3.0) * std::pow(3.0, 1.0 / 6.0) / pi;
    return c * std::sqrt(t) * std::exp(-zeta) * detail::bessel_k_scaled_smooth(1.0 / 3.0, zeta);
}

/// d/dt of airy_lambda; lambda'(t) = -Gamma(2/3) 3^{1/6}/pi t K_{2/3}(2/3 t^{3/2}).
inline double airy_lambda_prime(double t) {
    if (t < 0.0) throw std::domain_error("airy_lambda_prime: t must be >= 0");
    const double pi = 3.14159265358979323846;
    const double c = std::tgamma(2.0 / 3.0) * std::pow(3.0, 1.0 / 6.0) / pi;
    if (t < 1e-12)  // lambda'(0) = Ai'(0)/Ai(0)
        return -std::pow(3.0, 1.0 / 3.0) * std::tgamma(2.0 / 3.0) / std::tgamma(1.0 / 3.0);
    const double zeta = 2.0 / 3.0 * std::pow(t, 1.5);
    if (zeta > 700.0) return 0.0;
    return -c * t * std::exp(-zeta) * detail::bessel_k_scaled_smooth(2.0 / 3.0, zeta);
}

namespace detail {

inline std::complex<double> kummer_series(double a, double c, std::complex<double> z) {
    std::complex<double> term = 1.0, sum = 1.0;
    for (int k = 0; k < 500; ++k) {
        term *= (a + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline std::complex<double> kummer_euler_integral(double a, double c,
                                                  std::complex<double> z) {
    // Phi(a,c;z) = G(c)/(G(a)G(c-a)) int_0^1 e^{zt} t^{a-1} (1-t)^{c-a-1} dt.
    // Both endpoint singularities are removed by the sixth-power substitutions
    // t = tau^6 and 1-t = sigma^6; for the supported parameter pairs 6a and
    // 6(c-a) are integers, so the substituted integrands are smooth.
    const double b = c - a;
    const double pa = 6.0 * a - 1.0, pb = 6.0 * b - 1.0;
    auto left = [pa, b, z](double tau) -> std::complex<double> {
        double t = std::pow(tau, 6.0);
        return 6.0 * std::pow(tau, pa) * std::exp(z * t) * std::pow(1.0 - t, b - 1.0);
    };
    auto right = [pb, a, z](double sig) -> std::complex<double> {
        double omt = std::pow(sig, 6.0);
        return 6.0 * std::pow(sig, pb) * std::exp(z * (1.0 - omt)) * std::pow(1.0 - omt, a - 1.0);
    };
    auto integrate_cplx = [](auto&& f, double hi) {
        const GlRule& r = gl_rule(32);
        std::complex<double> s = 0.0;
        const int panels = 10;
        const double h = hi / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = p * h, mid = lo + 0.5 * h, half = 0.5 * h;
            for (size_t i = 0; i < r.node.size(); ++i)
                s += half * r.weight[i] * f(mid + half * r.node[i]);
        }
        return s;
    };
    const double hi = std::pow(0.5, 1.0 / 6.0);
    std::complex<double> I = integrate_cplx(left, hi) + integrate_cplx(right, hi);
    return std::tgamma(c) / (std::tgamma(a) * std::tgamma(b)) * I;
}

inline std::complex<double> kummer_asymptotic(double a, double c,
                                              std::complex<double> z) {
    // Two-sector expansion for large |z| on the upper imaginary axis.
    const std::complex<double> i(0.0, 1.0);
    const double pi = 3.14159265358979323846;
    auto poly = [](double p, double q, std::complex<double> w) {
        // sum_k (p)_k (q)_k / k! w^k, truncated at the smallest term
        std::complex<double> term = 1.0, sum = 1.0;
        for (int k = 0; k < 60; ++k) {
            std::complex<double> next = term * (p + k) * (q + k) / (k + 1.0) * w;
            if (std::abs(next) >= std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    };
    std::complex<double> s1 = std::exp(i * pi * a) * std::pow(z, -a) *
                              poly(a, a - c + 1.0, -1.0 / z) / std::tgamma(c - a);
    std::complex<double> s2 =
        std::exp(z) * std::pow(z, a - c) * poly(c - a, 1.0 - a, 1.0 / z) / std::tgamma(a);
    return std::tgamma(c) * (s1 + s2);
}

} // namespace detail

/// Kummer confluent hypergeometric Phi(a, c; z) on the imaginary axis,
/// with the series / integral / asymptotic switching tuned for the pairs
/// (1/6, 1/3) and (5/6, 5/3) used by the propagator symbols.
inline std::complex<double> kummer_phi(double a, double c, std::complex<double> z) {
    if (c <= 0.0 && c == std::floor(c))
        throw std::domain_error("kummer_phi: c must not be a non-positive integer");
    if (std::fabs(z.real()) > 1e-12 * (1.0 + std::abs(z)))
        throw std::domain_error("kummer_phi: z must be purely imaginary");
    double y = z.imag();
    if (y == 0.0) return 1.0;
    if (y < 0.0) return std::conj(kummer_phi(a, c, std::complex<double>(0.0, -y)));
    const std::complex<double> iy(0.0, y);
    if (y <= 8.0) return detail::kummer_series(a, c, iy);
    if (y < 40.0) return detail::kummer_euler_integral(a, c, iy);
    return detail::kummer_asymptotic(a, c, iy);
}

/// Gauss hypergeometric H(g, g, 1, z) for 0 < g < 1/2 on z in [0, 1), by the
/// Euler integral with both endpoint singularities removed by power
/// substitutions. Uniformly bounded by B(g, 1-2g)/(Gamma(g) Gamma(1-g)).
inline double gauss_hyp_unit(double gamma, double z, double rel_tol = 1e-12) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw std::domain_error("gauss_hyp_unit: gamma must lie in (0, 1/2)");
    if (z < 0.0) throw std::domain_error("gauss_hyp_unit: z must be >= 0");
    if (z >= 1.0) throw std::domain_error("gauss_hyp_unit: kernel singular on light cone (z >= 1)");
    // Sixth-power substitutions t = tau^6 and 1-t = sigma^6 remove the
    // endpoint singularities (exactly smooth at gamma = 1/6, the kernel case).
    auto left = [gamma, z](double tau) {
        double t = std::pow(tau, 6.0);
        return 6.0 * std::pow(tau, 6.0 * gamma - 1.0) * std::pow(1.0 - t, -gamma) *
               std::pow(1.0 - z * t, -gamma);
    };
    auto right = [gamma, z](double sig) {
        double omt = std::pow(sig, 6.0);  // 1 - t
        double t = 1.0 - omt;
        return 6.0 * std::pow(sig, 5.0 - 6.0 * gamma) * std::pow(t, gamma - 1.0) *
               std::pow(1.0 - z * t, -gamma);
    };
    const double hi = std::pow(0.5, 1.0 / 6.0);
    double I = integrate_adaptive(left, 0.0, hi, rel_tol) +
               integrate_adaptive(right, 0.0, hi, rel_tol);
    return I / (std::tgamma(gamma) * std::tgamma(1.0 - gamma));
}

/// Uniform bound of gauss_hyp_unit over [0, 1): B(g, 1-2g)/(Gamma(g) Gamma(1-g)).
inline double gauss_hyp_unit_bound(double gamma) {
    double beta = std::tgamma(gamma) * std::tgamma(1.0 - 2.0 * gamma) / std::tgamma(1.0 - gamma);
    return beta / (std::tgamma(gamma) * std::tgamma(1.0 - gamma));
}

} // namespace tricomi
