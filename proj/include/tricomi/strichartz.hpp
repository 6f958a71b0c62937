#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tricomi/grid.hpp"
#include "tricomi/linear_propagator.hpp"
#include "tricomi/trajectory.hpp"

// Weighted space-time norms, the admissible-exponent algebra of the critical
// theory, and samplers for the fractional-integral (Glassey-type) and
// inhomogeneous weighted inequalities.

namespace tricomi {

/// Cone-distance weight ((phi(t)+M)^2 - x^2)^gamma (or the unshifted
/// phi(t)^2 - x^2 form) paired with an L^q exponent.
struct WeightSpec {
    enum class Shift { plus_M, zero };
    double gamma = 0.0;
    double q = 2.0;
    double M = 2.0;
    Shift shift = Shift::plus_M;

    double base(double t, double x) const {
        double r = characteristic_radius(t) + (shift == Shift::plus_M ? M : 0.0);
        return r * r - x * x;
    }

    static WeightSpec make(double gamma, double q, double M, Shift shift = Shift::plus_M) {
        if (!(q > 1.0)) throw std::invalid_argument("WeightSpec: q must exceed 1");
        if (!(M > 1.0)) throw std::invalid_argument("WeightSpec: M must exceed 1");
        return WeightSpec{gamma, q, M, shift};
    }
};

/// Space-time L^q norm of base^gamma * u over snapshots in [t_lo, t_hi]
/// (trapezoid in t, grid sum in x). The weight is only evaluated where its
/// base is positive; a negative base under non-negligible field is a cone
/// violation, not a clamp.
inline double weighted_norm(const TrajectoryRecord& record, const WeightSpec& w,
                            double t_lo, double t_hi, double max_snapshot_gap = 0.5,
                            double noise_mass_floor = 0.0) {
    std::vector<double> ts, ms;
    for (const auto& snap : record.snapshots) {
        if (snap.t < t_lo - 1e-12 || snap.t > t_hi + 1e-12) continue;
        const auto& g = record.grid;
        double m = 0.0, in_mass = 0.0, out_mass = 0.0;
        for (int j = 0; j < g.npoints; ++j) {
            double b = w.base(snap.t, g.x(j));
            if (b <= 0.0) {
                out_mass += snap.u[j] * snap.u[j];
                continue;
            }
            in_mass += snap.u[j] * snap.u[j];
            double v = std::pow(b, w.gamma) * std::fabs(snap.u[j]);
            m += std::pow(v, w.q);
        }
        // Real mass outside the weight cone is an error, not a clamp.
        // Tolerated: spectral ringing at the cone edge (relative leak below
        // 1e-3), and snapshots below the caller's roundoff floor (difference
        // fields of a converged iteration carry only noise).
        if (out_mass > 1e-6 * (in_mass + 1e-300) &&
            in_mass + out_mass > noise_mass_floor) {
            std::ostringstream msg;
            msg << "weighted_norm: field mass outside the weight cone (t=" << snap.t
                << ", outside/inside=" << std::sqrt(out_mass / (in_mass + 1e-300)) << ")";
            throw cone_error(msg.str());
        }
        ts.push_back(snap.t);
        ms.push_back(m * g.dx());
    }
    if (ts.size() < 2) throw std::invalid_argument("weighted_norm: need >= 2 snapshots in range");
    for (size_t i = 1; i < ts.size(); ++i)
        if (ts[i] - ts[i - 1] > max_snapshot_gap)
            throw std::invalid_argument("weighted_norm: snapshot cadence too coarse");
    double I = 0.0;
    for (size_t i = 1; i < ts.size(); ++i)
        I += 0.5 * (ms[i] + ms[i - 1]) * (ts[i] - ts[i - 1]);
    return std::pow(I, 1.0 / w.q);
}

/// Space-time L^q norm of base^gamma * F over the source's support box.
inline double weighted_source_norm(const SourceTerm& F, const WeightSpec& w, double t_lo,
                                   double t_hi, int panels = 24, int gl_order = 16) {
    double s0 = std::max(t_lo, F.s_min), s1 = std::min(t_hi, F.s_max);
    if (!(s0 < s1)) return 0.0;
    if (!std::isfinite(F.x_min) || !std::isfinite(F.x_max))
        throw std::invalid_argument("weighted_source_norm: source needs finite x bounds");
    const GlRule& r = gl_rule(gl_order);
    double I = 0.0;
    const double hs = (s1 - s0) / panels, hx = (F.x_max - F.x_min) / panels;
    for (int ps = 0; ps < panels; ++ps)
        for (size_t is = 0; is < r.node.size(); ++is) {
            double s = s0 + ps * hs + 0.5 * hs * (r.node[is] + 1.0);
            double ws = 0.5 * hs * r.weight[is];
            for (int px = 0; px < panels; ++px)
                for (size_t ix = 0; ix < r.node.size(); ++ix) {
                    double x = F.x_min + px * hx + 0.5 * hx * (r.node[ix] + 1.0);
                    double fv = F(s, x);
                    if (fv == 0.0) continue;
                    double b = w.base(s, x);
                    if (b <= 0.0)
                        throw cone_error("weighted_source_norm: source outside the weight cone");
                    double v = std::pow(b, w.gamma) * std::fabs(fv);
                    I += ws * 0.5 * hx * r.weight[ix] * std::pow(v, w.q);
                }
        }
    return std::pow(I, 1.0 / w.q);
}

// -- exponent algebra ---------------------------------------------------------

/// Admissible weight interval 0 < gamma < 1/6 - 5/(6(p+1)). The interval is
/// nonempty iff p > 4; the global-existence gate p > 5 is reported separately.
struct GammaInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool nonempty = false;
    bool global_gate = false;  // p > p_crit = 5
};

inline GammaInterval gamma_admissible(double p) {
    if (!(p > 1.0)) throw std::domain_error("gamma_admissible: p must exceed 1");
    double hi = 1.0 / 6.0 - 5.0 / (6.0 * (p + 1.0));
    GammaInterval g;
    g.lo = 0.0;
    g.hi = std::max(hi, 0.0);
    g.nonempty = hi > 0.0;
    g.global_gate = p > 5.0;
    return g;
}

/// Weight exponents (alpha, beta) for the inhomogeneous estimate at q = p+1:
/// alpha + 1/6 + beta = 5/(3q) with beta = -p alpha, admissible exactly for
/// p in (p1, 9] (boundary p = 9 gives the degenerate pair alpha = beta = 0).
struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
    double q = 0.0;
    bool boundary = false;
};

inline AlphaBeta alphabeta_solve(double q) {
    double p = q - 1.0;
    const double p1 = 0.5 * (3.0 + std::sqrt(33.0));
    if (!(p > p1 + 1e-14))
        throw std::domain_error("alphabeta_solve: no admissible pair, p must exceed (3+sqrt(33))/2");
    if (p > 9.0 + 1e-14)
        throw std::domain_error("alphabeta_solve: no admissible pair, p must not exceed 9");
    AlphaBeta ab;
    ab.q = q;
    double sum = 5.0 / (3.0 * q) - 1.0 / 6.0;  // alpha + beta
    ab.alpha = sum / (1.0 - p);
    ab.beta = -p * ab.alpha;
    ab.boundary = std::fabs(p - 9.0) < 1e-12;
    return ab;
}

/// All critical exponents: the quadratic-root exponent of the general
/// (m, n) family, p_crit(m) = 1 + 4/m, the conformal exponent
/// p_conf(n) = (3n+6)/(3n-2), and the admissible-gamma interval at p_conf.
struct ExponentReport {
    double p_crit = 0.0;
    double p_conf = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    double w1_root = 0.0;
    GammaInterval gamma_interval;
    bool degenerate = false;
};

inline ExponentReport critical_exponents(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("critical_exponents: need m, n >= 1");
    ExponentReport r;
    double A = (m + 2.0) * n / 2.0 - 1.0;
    double B = (m + 2.0) * (1.0 - n / 2.0) - 3.0;
    if (A <= 0.0) {
        r.degenerate = true;
        r.w1_root = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.w1_root = (-B + std::sqrt(B * B + 4.0 * A * (m + 2.0))) / (2.0 * A);
    }
    r.p_crit = 1.0 + 4.0 / m;
    r.p_conf = (3.0 * n + 6.0) / (3.0 * n - 2.0);
    r.p0 = 9.0;
    r.p1 = 0.5 * (3.0 + std::sqrt(33.0));
    r.gamma_interval = gamma_admissible(r.p_conf);
    return r;
}

// -- fractional-integral sampler ----------------------------------------------

/// Piecewise-linear sampled function on (0, inf), zero outside its knots.
struct SampledFn {
    std::vector<double> x, y;

    double operator()(double u) const {
        if (x.empty() || u <= x.front() || u >= x.back()) {
            // exact at knots; zero outside
            if (!x.empty() && u == x.front()) return y.front();
            if (!x.empty() && u == x.back()) return y.back();
            return 0.0;
        }
        auto it = std::upper_bound(x.begin(), x.end(), u);
        size_t i = (size_t)(it - x.begin());
        double w = (u - x[i - 1]) / (x[i] - x[i - 1]);
        return y[i - 1] * (1.0 - w) + y[i] * w;
    }

    SampledFn dilate(double lambda) const {
        SampledFn d;
        d.x.reserve(x.size());
        d.y = y;
        for (double xi : x) d.x.push_back(xi / lambda);
        return d;
    }

    static SampledFn tabulate(const std::function<double(double)>& f, double lo, double hi,
                              int count) {
        SampledFn s;
        s.x.resize(count);
        s.y.resize(count);
        for (int i = 0; i < count; ++i) {
            s.x[i] = lo + (hi - lo) * i / (count - 1.0);
            s.y[i] = f(s.x[i]);
        }
        return s;
    }

    double norm_lr(double r) const {
        double I = 0.0;
        for (size_t i = 1; i < x.size(); ++i)
            I += 0.5 * (std::pow(std::fabs(y[i]), r) + std::pow(std::fabs(y[i - 1]), r)) *
                 (x[i] - x[i - 1]);
        return std::pow(I, 1.0 / r);
    }
};

/// f(u) = int_0^u g(xi) / (|u-xi|^delta |xi|^beta |u|^alpha) dxi sampled on
/// u_grid. The endpoint singularities are absorbed by power substitutions and
/// the quadrature panels are aligned with g's knots, so piecewise-linear
/// profiles (including steep indicator ramps) integrate cleanly.
inline std::vector<double> glassey_apply(const SampledFn& g, double alpha, double beta,
                                         double delta, const std::vector<double>& u_grid) {
    if (delta >= 1.0 || beta >= 1.0)
        throw std::domain_error("glassey_apply: non-integrable endpoint singularity");
    if (alpha + beta < -1e-15)
        throw std::domain_error("glassey_apply: need alpha + beta >= 0");
    // integrate h over [a, b] splitting at the mapped knot positions
    auto knotted = [&](auto&& h, double a, double b, auto&& to_sub) {
        std::vector<double> cuts{to_sub(a), to_sub(b)};
        for (double k : g.x) {
            if (k > a && k < b) cuts.push_back(to_sub(k));
        }
        std::sort(cuts.begin(), cuts.end());
        double s = 0.0;
        for (size_t i = 1; i < cuts.size(); ++i)
            if (cuts[i] > cuts[i - 1]) s += integrate_composite(h, cuts[i - 1], cuts[i], 16, 2);
        return s;
    };
    std::vector<double> f(u_grid.size());
    for (size_t i = 0; i < u_grid.size(); ++i) {
        double u = u_grid[i];
        if (!(u > 0.0)) {
            f[i] = 0.0;
            continue;
        }
        // [0, u/2]: xi = tau^{1/(1-beta)} removes |xi|^{-beta}
        double eb = 1.0 - beta;
        double lo_half = knotted(
            [&](double tau) {
                double xi = std::pow(tau, 1.0 / eb);
                return g(xi) * std::pow(u - xi, -delta) / eb;
            },
            0.0, 0.5 * u, [eb](double xi) { return std::pow(xi, eb); });
        // [u/2, u]: u - xi = sigma^{1/(1-delta)} removes |u-xi|^{-delta}
        double ed = 1.0 - delta;
        double hi_half = knotted(
            [&](double sig) {
                double xi = u - std::pow(sig, 1.0 / ed);
                return g(xi) * std::pow(xi, -beta) / ed;
            },
            0.5 * u, u, [ed, u](double xi) { return std::pow(u - xi, ed); });
        f[i] = std::pow(u, -alpha) * (lo_half + hi_half);
    }
    return f;
}

struct GlasseyCase {
    std::string id;
    double lambda = 1.0;
    double lhs = 0.0;   // ||f||_q
    double rhs = 0.0;   // ||g||_r
    double ratio = 0.0;
};

struct GlasseyScan {
    std::vector<GlasseyCase> cases;
    double max_ratio = 0.0;
    std::string violation;  // empty when the exponent conditions hold
    bool ok() const { return violation.empty(); }
};

/// Checks the exponent conditions of the fractional-integral inequality;
/// returns an empty string when they hold.
inline std::string glassey_conditions_violation(double alpha, double beta, double delta,
                                                double q, double r) {
    if (!(r > 1.0 && q > r)) return "need 1 < r < q";
    if (std::fabs(alpha + beta + delta - (1.0 - (1.0 / r - 1.0 / q))) > 1e-12)
        return "scaling identity alpha+beta+delta = 1-(1/r-1/q) violated";
    if (alpha + beta < -1e-15) return "need alpha + beta >= 0";
    if (!(alpha + delta > 1.0 / q + 1e-15)) return "need alpha + delta > 1/q";
    return {};
}

/// Max of ||f||_q / ||g||_r over the family and its dilates; dilate stability
/// is the testable reflection of the inequality's uniform constant.
inline GlasseyScan glassey_ratio_scan(const std::vector<std::pair<std::string, SampledFn>>& family,
                                      double alpha, double beta, double delta, double q,
                                      double r, const std::vector<double>& u_grid) {
    GlasseyScan scan;
    scan.violation = glassey_conditions_violation(alpha, beta, delta, q, r);
    if (!scan.ok()) return scan;
    for (const auto& [id, g] : family) {
        for (double lambda : {0.25, 1.0, 4.0}) {
            SampledFn gl = g.dilate(lambda);
            std::vector<double> grid = u_grid;
            for (double& u : grid) u /= lambda;  // track the dilated support
            auto f = glassey_apply(gl, alpha, beta, delta, grid);
            GlasseyCase c;
            c.id = id;
            c.lambda = lambda;
            double I = 0.0;
            for (size_t i = 1; i < grid.size(); ++i)
                I += 0.5 * (std::pow(std::fabs(f[i]), q) + std::pow(std::fabs(f[i - 1]), q)) *
                     (grid[i] - grid[i - 1]);
            c.lhs = std::pow(I, 1.0 / q);
            c.rhs = gl.norm_lr(r);
            c.ratio = (c.rhs > 0.0) ? c.lhs / c.rhs : 0.0;
            scan.max_ratio = std::max(scan.max_ratio, c.ratio);
            scan.cases.push_back(c);
        }
    }
    return scan;
}

// -- inhomogeneous weighted inequality ----------------------------------------

struct InhomoCase {
    int index = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool skipped = false;  // zero source
};

struct InhomoScan {
    std::vector<InhomoCase> cases;
    double max_ratio = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
};

/// Samples ||w_weight^{-alpha} w||_q / ||w_weight^{beta} F||_{q/(q-1)} with w
/// from the light-cone representation, over a corpus of cone-interior
/// sources.
inline InhomoScan inhomogeneous_inequality_sample(const std::vector<SourceTerm>& corpus,
                                                  const AlphaBeta& ab, double M,
                                                  double t_lo, double t_horizon,
                                                  const Grid1D& grid, int nsnaps = 16,
                                                  const DuhamelOptions& opts = {}) {
    WeightSpec w_lhs = WeightSpec::make(-ab.alpha, ab.q, M);
    WeightSpec w_rhs = WeightSpec::make(ab.beta, ab.q / (ab.q - 1.0), M);
    InhomoScan scan;
    int idx = 0;
    for (const auto& F : corpus) {
        InhomoCase c;
        c.index = idx++;
        double rhs = weighted_source_norm(F, w_rhs, t_lo, t_horizon);
        if (rhs == 0.0) {
            c.skipped = true;
            scan.cases.push_back(c);
            continue;
        }
        TrajectoryRecord rec;
        rec.grid = grid;
        rec.M = M;
        for (int k = 0; k < nsnaps; ++k) {
            double t = t_lo + (t_horizon - t_lo) * (k + 0.5) / nsnaps;
            auto w = duhamel_solve(F, t, grid, opts);
            Snapshot s;
            s.t = t;
            s.u = std::move(w.u);
            rec.snapshots.push_back(std::move(s));
        }
        double gap = (t_horizon - t_lo) / nsnaps * 1.5;
        c.lhs = weighted_norm(rec, w_lhs, t_lo, t_horizon, gap);
        c.rhs = rhs;
        c.ratio = c.lhs / c.rhs;
        scan.max_ratio = std::max(scan.max_ratio, c.ratio);
        scan.min_ratio = std::min(scan.min_ratio, c.ratio);
        scan.cases.push_back(c);
    }
    return scan;
}

} // namespace tricomi
