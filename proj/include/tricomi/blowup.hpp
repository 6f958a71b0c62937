#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tricomi/grid.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/trajectory.hpp"

// Blowup functionals and the Riccati-type criterion: G(t) = int u dx,
// G1(t) = int u lambda(t) e^x dx, the growth/convexity witness
// G >= C0 (R+t)^alpha, G'' >= C1 (R+t)^{-q} G^p with q = (3/2)(p-1),
// and the case split alpha = 2 - p/4 (p < 4) / alpha = 1 (p >= 4).

namespace tricomi {

/// G(t) = int u dx.
inline double functional_G(const FieldState& state) {
    for (double v : state.u)
        if (!std::isfinite(v)) throw std::invalid_argument("functional_G: non-finite field");
    return integral_dx(state.u, state.grid);
}

/// G1(t) = int u(t,x) lambda(t) e^x dx, with e^x evaluated only inside the
/// cone |x| <= M + phi(t) (the field vanishes outside, and the guard keeps
/// the exponential from overflowing on wide boxes).
inline double functional_G1(const FieldState& state, double M) {
    double lam = airy_lambda(state.t);
    if (lam == 0.0) return 0.0;
    double R = M + characteristic_radius(state.t);
    double s = 0.0;
    for (int j = 0; j < state.grid.npoints; ++j) {
        double x = state.grid.x(j);
        if (std::fabs(x) <= R) s += state.u[j] * std::exp(x);
    }
    return lam * s * state.grid.dx();
}

/// Case split of the growth exponent, and the blowup-predicted region p < 5.
struct ExponentCase {
    double alpha = 1.0;
    bool predicted_blowup = false;
};

inline ExponentCase exponent_case(double p) {
    if (!(p > 1.0)) throw std::domain_error("exponent_case: p must exceed 1");
    ExponentCase c;
    c.alpha = (p < 4.0) ? 2.0 - 0.25 * p : 1.0;
    c.predicted_blowup = p < 5.0;
    return c;
}

struct RiccatiSample {
    double t = 0.0;
    double G = 0.0;
    double G2 = 0.0;           // finite-difference G''
    double lower_bound = 0.0;  // C1 (R+t)^{-q} G^p
};

struct RiccatiWitness {
    double p = 0.0;
    double q_exponent = 0.0;  // (3/2)(p-1)
    double alpha = 0.0;
    double C0 = 0.0;  // largest constant with G >= C0 (R+t)^alpha on the window
    double C1 = 0.0;  // largest constant with G'' >= C1 (R+t)^{-q} G^p
    bool lemma_satisfied = false;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::vector<RiccatiSample> samples;
};

/// Fits the largest constants of the Riccati criterion over the sampled
/// window and evaluates the blowup conditions p > 1, alpha >= 1 and
/// (p-1) alpha > q - 2 (strict at the boundary, which excludes p = 5).
inline RiccatiWitness riccati_check(const TrajectoryRecord& traj, double p, double R,
                                    double t_lo = 0.0,
                                    double t_hi = std::numeric_limits<double>::infinity()) {
    if (!(p > 1.0)) throw std::domain_error("riccati_check: p must exceed 1");
    RiccatiWitness w;
    w.p = p;
    w.q_exponent = 1.5 * (p - 1.0);
    w.alpha = exponent_case(p).alpha;
    const auto& s = traj.samples;
    double c0 = std::numeric_limits<double>::infinity();
    double c1 = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i].t < t_lo || s[i].t > t_hi) continue;
        if (!(s[i].mass > 0.0)) continue;
        RiccatiSample r;
        r.t = s[i].t;
        r.G = s[i].mass;
        r.G2 = second_difference(s[i - 1].t, s[i].t, s[i + 1].t, s[i - 1].mass, s[i].mass,
                                 s[i + 1].mass);
        c0 = std::min(c0, r.G / std::pow(R + r.t, w.alpha));
        c1 = std::min(c1, r.G2 * std::pow(R + r.t, w.q_exponent) / std::pow(r.G, p));
        w.samples.push_back(r);
    }
    if (w.samples.size() < 10)
        throw std::invalid_argument("riccati_check: window too short (< 10 usable samples)");
    w.C0 = c0;
    w.C1 = c1;
    w.window_lo = w.samples.front().t;
    w.window_hi = w.samples.back().t;
    for (auto& r : w.samples)
        r.lower_bound = w.C1 * std::pow(R + r.t, -w.q_exponent) * std::pow(r.G, p);
    w.lemma_satisfied =
        (p > 1.0) && (w.alpha >= 1.0) && ((p - 1.0) * w.alpha > w.q_exponent - 2.0);
    return w;
}

} // namespace tricomi
