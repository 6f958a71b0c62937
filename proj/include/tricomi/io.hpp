#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tricomi/trajectory.hpp"

namespace tricomi {

/// Shortest exact decimal representation, stable across runs.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hash_hex(const std::string& s) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)fnv1a64(s));
    return buf;
}

/// Write-all-then-rename, so partially written artifacts never appear.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "."
                                                                   : path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string TrajectoryRecord::diagnostics_csv() const {
    std::ostringstream os;
    os << "t,supnorm,mean,energy,cone_leak\n";
    for (const auto& s : samples) {
        os << fmt_g17(s.t) << ',' << fmt_g17(s.sup) << ',' << fmt_g17(s.mass) << ',';
        if (s.energy == s.energy) os << fmt_g17(s.energy);
        os << ',';
        if (s.cone_leak == s.cone_leak) os << fmt_g17(s.cone_leak);
        os << '\n';
    }
    return os.str();
}

/// Field snapshots as CSV with header t,x,u,ut.
inline std::string snapshots_csv(const TrajectoryRecord& rec) {
    std::ostringstream os;
    os << "t,x,u,ut\n";
    for (const auto& s : rec.snapshots) {
        for (int j = 0; j < rec.grid.npoints; ++j) {
            os << fmt_g17(s.t) << ',' << fmt_g17(rec.grid.x(j)) << ',' << fmt_g17(s.u[j])
               << ',';
            if (!s.ut.empty()) os << fmt_g17(s.ut[j]);
            os << '\n';
        }
    }
    return os.str();
}

} // namespace tricomi
