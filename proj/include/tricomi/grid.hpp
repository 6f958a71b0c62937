#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tricomi/errors.hpp"
#include "tricomi/fft.hpp"

namespace tricomi {

/// Characteristic radius of the degenerate wave operator: phi(t) = (2/3) t^{3/2}.
/// Data supported in |x| <= M stays inside |x| <= M + phi(t).
inline double characteristic_radius(double t) { return 2.0 / 3.0 * std::pow(t, 1.5); }

/// Inverse of the characteristic radius: the time at which phi(t) = r.
inline double characteristic_time(double r) { return std::pow(1.5 * r, 2.0 / 3.0); }

/// Uniform periodic grid on [-L, L) with a power-of-two point count.
struct Grid1D {
    double half_width = 0.0;
    int npoints = 0;

    double dx() const { return 2.0 * half_width / npoints; }
    double x(int j) const { return -half_width + j * dx(); }

    static Grid1D make(double half_width, int npoints) {
        if (npoints < 16) throw std::invalid_argument("Grid1D: need at least 16 points");
        if ((npoints & (npoints - 1)) != 0)
            throw std::invalid_argument("Grid1D: point count must be a power of two");
        if (!(half_width > 0.0)) throw std::invalid_argument("Grid1D: half_width must be positive");
        return Grid1D{half_width, npoints};
    }

    /// True while the cone from data of support radius M stays off the boundary.
    bool cone_contained(double M, double t) const {
        return M + characteristic_radius(t) + 2.0 * dx() < half_width;
    }

    /// Largest time with the cone still contained.
    double containment_horizon(double M) const {
        double r = half_width - M - 2.0 * dx();
        return (r > 0.0) ? characteristic_time(r) : 0.0;
    }

    std::vector<double> sample(const std::function<double(double)>& f) const {
        std::vector<double> v(npoints);
        for (int j = 0; j < npoints; ++j) v[j] = f(x(j));
        return v;
    }
};

/// C-infinity bump of unit peak supported on |x - center| < radius.
inline double bump(double x, double center = 0.0, double radius = 1.0) {
    double y = (x - center) / radius;
    if (std::fabs(y) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

/// Initial pair (u0, u1) stored as profiles; the amplitude epsilon is applied
/// by the solvers. Profiles must vanish outside |x| <= M with M > 1.
struct InitialData {
    std::vector<double> f;  // u0 profile
    std::vector<double> g;  // u1 profile
    double M = 2.0;         // support radius
    double epsilon = 1.0;   // data amplitude

    static InitialData make(const Grid1D& grid, const std::function<double(double)>& u0,
                            const std::function<double(double)>& u1, double M, double epsilon) {
        if (!(M > 1.0)) throw std::invalid_argument("InitialData: support radius must exceed 1");
        InitialData d;
        d.f = grid.sample(u0);
        d.g = grid.sample(u1);
        d.M = M;
        d.epsilon = epsilon;
        for (int j = 0; j < grid.npoints; ++j) {
            if (std::fabs(grid.x(j)) > M &&
                (std::fabs(d.f[j]) > 1e-12 || std::fabs(d.g[j]) > 1e-12))
                throw std::invalid_argument("InitialData: profiles must vanish outside |x| <= M");
        }
        return d;
    }

    /// Positive bump pair u0 = u1 = bump(x; 0, M), the blowup-corpus shape.
    static InitialData positive_bump(const Grid1D& grid, double M, double epsilon) {
        return make(
            grid, [M](double x) { return bump(x, 0.0, M); },
            [M](double x) { return bump(x, 0.0, M); }, M, epsilon);
    }
};

/// Field snapshot (u, du/dt) at one time.
struct FieldState {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> ut;
    Grid1D grid;
};

/// External source F(t, x). cone_interior marks sources vanishing for
/// |x| > phi(t) - 1 (required by the weighted inhomogeneous estimates); the
/// support box bounds are quadrature hints.
struct SourceTerm {
    std::function<double(double, double)> f;
    bool cone_interior = false;
    double s_min = 0.0;
    double s_max = std::numeric_limits<double>::infinity();
    double x_min = -std::numeric_limits<double>::infinity();
    double x_max = std::numeric_limits<double>::infinity();

    double operator()(double t, double x) const { return f(t, x); }
};

/// Space-only field, the output of the inhomogeneous solve.
struct ScalarField {
    double t = 0.0;
    Grid1D grid;
    std::vector<double> u;
};

// -- field diagnostics -------------------------------------------------------

inline double sup_norm(const std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::fabs(v));
    return m;
}

/// int u dx on the periodic grid (exact for smooth compactly supported u).
inline double integral_dx(const std::vector<double>& u, const Grid1D& g) {
    double s = 0.0;
    for (double v : u) s += v;
    return s * g.dx();
}

inline double l2_norm(const std::vector<double>& u, const Grid1D& g) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(s * g.dx());
}

/// Relative L2 mass outside the cone |x| <= M + phi(t) + 2 dx. Undefined (nan)
/// once the cone radius reaches the boundary.
inline double cone_leak(const FieldState& st, double M) {
    double R = M + characteristic_radius(st.t) + 2.0 * st.grid.dx();
    if (R >= st.grid.half_width) return std::numeric_limits<double>::quiet_NaN();
    double out = 0.0, tot = 0.0;
    for (int j = 0; j < st.grid.npoints; ++j) {
        double w = st.u[j] * st.u[j];
        tot += w;
        if (std::fabs(st.grid.x(j)) > R) out += w;
    }
    if (tot == 0.0) return 0.0;
    return std::sqrt(out / tot);
}

/// Energy of the degenerate wave operator: E = int (ut^2 + t ux^2) dx.
inline double field_energy(const FieldState& st, Fft& fft) {
    std::vector<double> ux;
    fft.derivative(st.u, ux, st.grid.half_width);
    double s = 0.0;
    for (int j = 0; j < st.grid.npoints; ++j)
        s += st.ut[j] * st.ut[j] + st.t * ux[j] * ux[j];
    return s * st.grid.dx();
}

/// Max asymmetry max_j |u(x_j) - u(-x_j)| on the periodic grid.
inline double evenness_defect(const std::vector<double>& u) {
    int n = (int)u.size();
    double m = 0.0;
    for (int j = 1; j < n; ++j) m = std::max(m, std::fabs(u[j] - u[n - j]));
    return m;
}

} // namespace tricomi
