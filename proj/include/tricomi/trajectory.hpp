#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tricomi/grid.hpp"

namespace tricomi {

/// One row of run diagnostics. Entries that are not tracked for a given run
/// are NaN.
struct DiagnosticSample {
    double t = 0.0;
    double sup = 0.0;            // sup-norm of u
    double mass = 0.0;           // G(t) = int u dx
    double g1 = std::numeric_limits<double>::quiet_NaN();        // int u psi dx
    double nonlinear_mass = std::numeric_limits<double>::quiet_NaN();  // int F(t,u) dx
    double energy = std::numeric_limits<double>::quiet_NaN();
    double cone_leak = std::numeric_limits<double>::quiet_NaN();
    double weighted_partial = std::numeric_limits<double>::quiet_NaN();  // running weighted L^q mass
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> ut;
};

/// Diagnostic time series plus optional field snapshots for one run.
struct TrajectoryRecord {
    Grid1D grid;
    double M = 0.0;  // support radius of the data, for cone-relative measures
    std::vector<DiagnosticSample> samples;
    std::vector<Snapshot> snapshots;

    std::vector<double> times() const {
        std::vector<double> t(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) t[i] = samples[i].t;
        return t;
    }
    std::vector<double> sup_series() const {
        std::vector<double> v(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].sup;
        return v;
    }
    std::vector<double> mass_series() const {
        std::vector<double> v(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].mass;
        return v;
    }

    /// CSV with header t,supnorm,mean,energy,cone_leak.
    std::string diagnostics_csv() const;
};

/// Centered second difference on a nonuniform time grid.
inline double second_difference(double tm, double t0, double tp, double fm, double f0,
                                double fp) {
    double hm = t0 - tm, hp = tp - t0;
    return 2.0 * (fm * hp - f0 * (hp + hm) + fp * hm) / (hm * hp * (hm + hp));
}

} // namespace tricomi
