#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tricomi/fft.hpp"
#include "tricomi/grid.hpp"
#include "tricomi/linear_propagator.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/strichartz.hpp"
#include "tricomi/trajectory.hpp"

// Time integration of d^2_t u - t d^2_x u = F_p(t, u) (+ external source):
// explicit velocity-averaged two-step scheme in first-order form with a
// degeneracy-aware step size dt <= cfl dx / sqrt(t), blowup detection, and
// the successive-approximation (Picard) experiment.

namespace tricomi {

/// |u|^p, or the smooth-bridge variant F_p(t,u) = (1-chi(t)) u (1+u^2)^{(p-1)/2}
/// + chi(t) |u|^p with a C-infinity bridge chi vanishing below T0/2 and equal
/// to 1 above T0.
struct NonlinearitySpec {
    enum class Variant { pure_power, cutoff };
    double p = 3.0;
    Variant variant = Variant::pure_power;
    double T0 = 0.5;
    // documented formula of the smooth part; fixed in this build
    static constexpr const char* smooth_part = "u*(1+u^2)^((p-1)/2)";

    static NonlinearitySpec pure(double p) {
        if (!(p > 1.0)) throw std::invalid_argument("NonlinearitySpec: p must exceed 1");
        return NonlinearitySpec{p, Variant::pure_power, 0.5};
    }
    static NonlinearitySpec with_cutoff(double p, double T0) {
        if (!(p > 1.0)) throw std::invalid_argument("NonlinearitySpec: p must exceed 1");
        if (!(T0 > 0.0 && T0 < 1.0))
            throw std::invalid_argument("NonlinearitySpec: T0 must lie in (0,1)");
        return NonlinearitySpec{p, Variant::cutoff, T0};
    }

    /// C-infinity bridge: 0 for s <= T0/2, 1 for s >= T0.
    double chi(double s) const {
        double w = (s - 0.5 * T0) / (0.5 * T0);
        if (w <= 0.0) return 0.0;
        if (w >= 1.0) return 1.0;
        double a = std::exp(-1.0 / w), b = std::exp(-1.0 / (1.0 - w));
        return a / (a + b);
    }

    double eval(double t, double u) const {
        double power = std::pow(std::fabs(u), p);
        if (variant == Variant::pure_power) return power;
        double c = chi(t);
        double smooth = u * std::pow(1.0 + u * u, 0.5 * (p - 1.0));
        return (1.0 - c) * smooth + c * power;
    }
};

struct StepControl {
    double cfl = 0.4;
    double dt_min = 1e-10;
    double blowup_threshold = 1e6;
    double T_end = 1.0;
    double dt_fixed = 0.0;  // > 0 overrides the adaptive rule (convergence studies)
    bool dealias_23 = false;
    ConePolicy cone_policy = ConePolicy::strict;
    double record_dt_factor = 0.05;  // snapshot cadence <= factor * t
    double record_dt_floor = 0.02;
    bool store_snapshots = false;

    /// dt <= cfl dx / max(sqrt(t), sqrt(dt)); at t = 0 this gives
    /// dt = (cfl dx)^{2/3}, the self-consistent startup step.
    double step_size(double t, double dx) const {
        if (dt_fixed > 0.0) return dt_fixed;
        double tau0 = std::pow(cfl * dx, 2.0 / 3.0);
        return cfl * dx / std::sqrt(std::max(t, tau0));
    }
};

struct RunOutcome {
    enum class Status { completed, blowup_detected, accuracy_abort };
    Status status = Status::completed;
    std::optional<double> blowup_time_estimate;
    TrajectoryRecord trajectory;
    std::string note;
};

/// Extrapolated blowup time from monotone growing G samples: the profile
/// G ~ (T-t)^{-2/(p-1)} makes G^{-(p-1)/2} linear in t, so a least-squares
/// line through the final decade of growth crosses zero at T.
inline double estimate_blowup_time(const TrajectoryRecord& record, double p) {
    const auto& s = record.samples;
    size_t n = s.size();
    if (n < 10) throw std::invalid_argument("estimate_blowup_time: too few samples");
    size_t start = n - 1;
    while (start > 0 && s[start - 1].mass < s[start].mass && s[start - 1].mass > 0.0) --start;
    if (n - start < 10)
        throw std::invalid_argument("estimate_blowup_time: G not monotone growing over >= 10 samples");
    double gmax = s[n - 1].mass;
    size_t w0 = start;
    while (w0 < n && s[w0].mass < 0.1 * gmax) ++w0;
    if (n - w0 < 5) w0 = (n - start >= 10) ? n - 10 : start;
    if (!(gmax >= 4.0 * s[w0].mass))
        throw std::invalid_argument("estimate_blowup_time: G bounded on the fit window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t cnt = n - w0;
    for (size_t i = w0; i < n; ++i) {
        double y = std::pow(s[i].mass, -0.5 * (p - 1.0));
        sx += s[i].t;
        sy += y;
        sxx += s[i].t * s[i].t;
        sxy += s[i].t * y;
    }
    double denom = cnt * sxx - sx * sx;
    double slope = (cnt * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / cnt;
    if (!(slope < 0.0))
        throw std::invalid_argument("estimate_blowup_time: transformed G not decreasing");
    double t_star = -intercept / slope;
    double span = s[n - 1].t - s[w0].t;
    if (t_star > s[n - 1].t + 2.0 * std::max(span, 1e-12) || t_star < s[w0].t)
        throw std::invalid_argument("estimate_blowup_time: no finite-time divergence in window");
    return t_star;
}

namespace detail {

struct StepperState {
    std::vector<double> u, v, acc, lap, scratch;
};

// acceleration a = t * u_xx + F_nl(t, u) + S(t, x)
inline void acceleration(double t, const std::vector<double>& u, const Grid1D& grid,
                         Fft& fft, const std::optional<NonlinearitySpec>& nl,
                         const SourceTerm* src, const std::vector<double>* src_samples,
                         std::vector<double>& lap, std::vector<double>& out) {
    fft.second_derivative(u, lap, grid.half_width);
    const int n = grid.npoints;
    out.resize(n);
    for (int j = 0; j < n; ++j) {
        double a = t * lap[j];
        if (nl) a += nl->eval(t, u[j]);
        if (src_samples) a += (*src_samples)[j];
        else if (src && t >= src->s_min && t <= src->s_max) a += (*src)(t, grid.x(j));
        out[j] = a;
    }
}

} // namespace detail

/// Time-step the semilinear problem from data (epsilon f, epsilon g).
/// `source` adds an external forcing (used by the inhomogeneous comparisons
/// and the Picard iteration).
inline RunOutcome run(const InitialData& data, const std::optional<NonlinearitySpec>& nl,
                      const StepControl& ctl, const Grid1D& grid,
                      const SourceTerm* source = nullptr) {
    if (ctl.cone_policy == ConePolicy::strict && !grid.cone_contained(data.M, ctl.T_end))
        throw cone_error("run: grid cannot contain the cone up to T_end");
    const int n = grid.npoints;
    Fft fft(n);
    RunOutcome out;
    TrajectoryRecord& rec = out.trajectory;
    rec.grid = grid;
    rec.M = data.M;

    std::vector<double> u(n), v(n);
    for (int j = 0; j < n; ++j) {
        u[j] = data.epsilon * data.f[j];
        v[j] = data.epsilon * data.g[j];
    }
    std::vector<double> acc, lap, acc_next;
    detail::acceleration(0.0, u, grid, fft, nl, source, nullptr, lap, acc);

    double t = 0.0;
    double next_snapshot = 0.0;
    bool growing = false;
    double last_sup = 0.0;

    auto diagnostics = [&](bool snapshot_due) {
        DiagnosticSample d;
        d.t = t;
        d.sup = sup_norm(u);
        d.mass = integral_dx(u, grid);
        if (nl) {
            double fm = 0.0;
            for (int j = 0; j < n; ++j) fm += nl->eval(t, u[j]);
            d.nonlinear_mass = fm * grid.dx();
        }
        if (snapshot_due) {
            FieldState st;
            st.t = t;
            st.grid = grid;
            st.u = u;
            st.ut = v;
            d.energy = field_energy(st, fft);
            d.cone_leak = cone_leak(st, data.M);
            double lam = airy_lambda(t);
            if (lam > 0.0) {
                double R = data.M + characteristic_radius(t);
                double g1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double x = grid.x(j);
                    if (std::fabs(x) <= R) g1 += u[j] * std::exp(x);
                }
                d.g1 = lam * g1 * grid.dx();
            }
            if (ctl.store_snapshots) {
                Snapshot s;
                s.t = t;
                s.u = u;
                s.ut = v;
                rec.snapshots.push_back(std::move(s));
            }
            next_snapshot =
                t + std::max(ctl.record_dt_floor, ctl.record_dt_factor * t);
        }
        rec.samples.push_back(d);
        return d.sup;
    };

    last_sup = diagnostics(true);
    const double dx = grid.dx();
    while (t < ctl.T_end - 1e-14) {
        double dt = std::min(ctl.step_size(t, dx), ctl.T_end - t);
        if (dt < ctl.dt_min) {
            out.status = growing ? RunOutcome::Status::blowup_detected
                                 : RunOutcome::Status::accuracy_abort;
            out.note = "step size underflow";
            break;
        }
        // velocity-averaged two-step (kick-drift-kick); the t = 0 start
        // reduces to the Taylor step u + dt u1 + dt^2/2 |u0|^p automatically
        for (int j = 0; j < n; ++j) {
            v[j] += 0.5 * dt * acc[j];
            u[j] += dt * v[j];
        }
        t += dt;
        detail::acceleration(t, u, grid, fft, nl, source, nullptr, lap, acc_next);
        for (int j = 0; j < n; ++j) v[j] += 0.5 * dt * acc_next[j];
        acc.swap(acc_next);
        if (ctl.dealias_23) {
            fft.dealias_23(u);
            fft.dealias_23(v);
        }

        if (ctl.cone_policy == ConePolicy::strict && !grid.cone_contained(data.M, t))
            throw cone_error("run: characteristic cone reached the boundary mid-run");

        double sup = diagnostics(t >= next_snapshot);
        growing = sup > last_sup;
        last_sup = sup;
        if (!std::isfinite(sup)) {
            out.status = RunOutcome::Status::accuracy_abort;
            out.note = "non-finite field before threshold crossing";
            break;
        }
        if (sup > ctl.blowup_threshold) {
            out.status = RunOutcome::Status::blowup_detected;
            break;
        }
    }

    if (ctl.store_snapshots &&
        (rec.snapshots.empty() || rec.snapshots.back().t < t - 1e-15)) {
        Snapshot s;
        s.t = t;
        s.u = u;
        s.ut = v;
        rec.snapshots.push_back(std::move(s));
    }
    if (out.status == RunOutcome::Status::blowup_detected) {
        double p_eff = nl ? nl->p : 2.0;
        try {
            out.blowup_time_estimate = estimate_blowup_time(rec, p_eff);
        } catch (const std::invalid_argument&) {
            out.blowup_time_estimate = t;  // detection time as the fallback
        }
    }
    return out;
}

// -- Picard iteration -----------------------------------------------------------

struct PicardStep {
    int k = 0;
    double m_norm = 0.0;  // weighted norm of u_k
    double n_norm = 0.0;  // weighted norm of u_k - u_{k-1}
};

struct PicardResult {
    std::vector<PicardStep> steps;
    double max_ratio = 0.0;  // max over k of N_{k+1}/N_k
    bool contraction_failure = false;
    WeightSpec weight;
};

/// Midpoint of the admissible weight-exponent window for the contraction:
/// gamma below both 1/(p(p+1)) and 1/6 - 5/(6(p+1)), above the closing
/// requirement (p-1) gamma + 1/6 > 5/(3(p+1)).
inline double picard_weight_gamma(double p) {
    if (!(p > 5.0)) throw std::domain_error("picard_weight_gamma: requires p > 5");
    double hi = std::min(1.0 / (p * (p + 1.0)), 1.0 / 6.0 - 5.0 / (6.0 * (p + 1.0)));
    double lo = std::max(0.0, (5.0 / (3.0 * (p + 1.0)) - 1.0 / 6.0) / (p - 1.0));
    if (!(lo < hi)) throw std::domain_error("picard_weight_gamma: empty admissible window");
    return 0.5 * (lo + hi);
}

/// Successive approximations u_k solving the linear problem with source
/// F_p(t, u_{k-1}) from the fixed data; reports the weighted norms M_k
/// (iterate size) and N_k (increment size) on [T0/2, t_num]. All iterates
/// advance in lockstep on a shared step sequence, each one forced by the
/// previous iterate's current field, so no trajectory history is stored.
inline PicardResult picard_iterate(const InitialData& data, const NonlinearitySpec& nl,
                                   int k_max, const WeightSpec& weight, const Grid1D& grid,
                                   const StepControl& ctl, double t_num) {
    if (k_max < 1) throw std::invalid_argument("picard_iterate: k_max must be >= 1");
    if (!(nl.p > 5.0)) throw std::invalid_argument("picard_iterate: supercritical p > 5 required");
    if (!grid.cone_contained(data.M, t_num))
        throw cone_error("picard_iterate: grid cannot contain the cone up to t_num");
    const int n = grid.npoints;
    const double dx = grid.dx();

    std::vector<double> times{0.0};
    {
        double t = 0.0;
        while (t < t_num - 1e-12) {
            double dt = std::min(ctl.step_size(t, dx), t_num - t);
            t += dt;
            times.push_back(t);
        }
    }
    const size_t nsteps = times.size();
    const size_t stride = std::max<size_t>(1, nsteps / 256);

    Fft fft(n);
    struct Chain {
        std::vector<double> u, v, acc;
    };
    std::vector<Chain> chain(k_max + 1);
    for (auto& c : chain) {
        c.u.resize(n);
        c.v.resize(n);
        for (int j = 0; j < n; ++j) {
            c.u[j] = data.epsilon * data.f[j];
            c.v[j] = data.epsilon * data.g[j];
        }
    }
    std::vector<double> lap, src(n);
    auto source_from = [&](int k, double t) -> const std::vector<double>* {
        if (k == 0) {
            std::fill(src.begin(), src.end(), 0.0);  // u_{-1} == 0, F_p(t,0) = 0
        } else {
            const auto& w = chain[k - 1].u;
            for (int j = 0; j < n; ++j) src[j] = nl.eval(t, w[j]);
        }
        return &src;
    };
    for (int k = 0; k <= k_max; ++k)
        detail::acceleration(0.0, chain[k].u, grid, fft, std::nullopt, nullptr,
                             source_from(k, 0.0), lap, chain[k].acc);

    // strided field snapshots per iterate, for the weighted norms
    std::vector<std::vector<Snapshot>> snaps(k_max + 1);
    std::vector<double> snap_t;
    auto collect = [&](double t) {
        snap_t.push_back(t);
        for (int k = 0; k <= k_max; ++k) {
            Snapshot s;
            s.t = t;
            s.u = chain[k].u;
            snaps[k].push_back(std::move(s));
        }
    };
    collect(0.0);

    std::vector<double> acc_next(n);
    for (size_t step = 0; step + 1 < nsteps; ++step) {
        double dt = times[step + 1] - times[step];
        // ascending k: chain[k-1] is already at the new time level when the
        // closing kick of chain[k] needs its field
        for (int k = 0; k <= k_max; ++k) {
            auto& c = chain[k];
            for (int j = 0; j < n; ++j) {
                c.v[j] += 0.5 * dt * c.acc[j];
                c.u[j] += dt * c.v[j];
            }
            detail::acceleration(times[step + 1], c.u, grid, fft, std::nullopt, nullptr,
                                 source_from(k, times[step + 1]), lap, acc_next);
            for (int j = 0; j < n; ++j) c.v[j] += 0.5 * dt * acc_next[j];
            c.acc.swap(acc_next);
        }
        if ((step + 1) % stride == 0 || step + 2 == nsteps) collect(times[step + 1]);
    }

    double gap = 0.0;
    for (size_t i = 1; i < snap_t.size(); ++i) gap = std::max(gap, snap_t[i] - snap_t[i - 1]);
    // reference mass of the iteration: deep increments below its roundoff
    // floor carry only noise and are exempt from the cone-mass assertion
    double ref_mass = 0.0;
    for (const auto& s : snaps[0]) {
        double m = 0.0;
        for (double v : s.u) m += v * v;
        ref_mass = std::max(ref_mass, m);
    }
    const double noise_floor = 1e-20 * ref_mass;
    auto weighted_of = [&](int k, bool increment) {
        TrajectoryRecord rec;
        rec.grid = grid;
        rec.M = data.M;
        for (size_t i = 0; i < snap_t.size(); ++i) {
            Snapshot s;
            s.t = snap_t[i];
            s.u = snaps[k][i].u;
            if (increment && k >= 1)
                for (int j = 0; j < n; ++j) s.u[j] -= snaps[k - 1][i].u[j];
            rec.snapshots.push_back(std::move(s));
        }
        return weighted_norm(rec, weight, 0.5 * nl.T0, t_num, 1.5 * gap + 1e-12, noise_floor);
    };

    PicardResult result;
    result.weight = weight;
    double prev_n_norm = 0.0;
    int grow_streak = 0;
    for (int k = 0; k <= k_max; ++k) {
        PicardStep ps;
        ps.k = k;
        ps.m_norm = weighted_of(k, false);
        ps.n_norm = weighted_of(k, true);  // equals m_norm at k = 0
        result.steps.push_back(ps);
        if (k >= 1) {
            double ratio = (prev_n_norm > 0.0) ? ps.n_norm / prev_n_norm : 0.0;
            result.max_ratio = std::max(result.max_ratio, ratio);
            grow_streak = (ps.n_norm > prev_n_norm) ? grow_streak + 1 : 0;
            if (grow_streak >= 3) result.contraction_failure = true;
        }
        prev_n_norm = ps.n_norm;
    }
    return result;
}

} // namespace tricomi
