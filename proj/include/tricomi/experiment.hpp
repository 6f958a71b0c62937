#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "tricomi/blowup.hpp"
#include "tricomi/io.hpp"
#include "tricomi/linear_propagator.hpp"
#include "tricomi/semilinear.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/strichartz.hpp"

// Batch experiment driver: validates a config tree, runs one experiment kind,
// and writes machine-readable artifacts. Scientific outcomes (blowup, failed
// contraction) are data in the artifacts; only infrastructure problems throw.

namespace tricomi {

inline constexpr const char* code_version = "1.0.0";

using json = nlohmann::json;

namespace detail {

inline json merged(json base, const json& over) {
    if (!over.is_object()) return base;
    for (auto it = over.begin(); it != over.end(); ++it) {
        if (it->is_object() && base.contains(it.key()) && base[it.key()].is_object())
            base[it.key()] = merged(base[it.key()], *it);
        else
            base[it.key()] = *it;
    }
    return base;
}

template <typename Fn>
void parallel_rows(int nrows, int workers, Fn&& fn) {
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i; (i = next.fetch_add(1)) < nrows;) fn(i);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < std::max(1, workers); ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

inline InitialData make_data(const std::string& shape, const Grid1D& grid, double M,
                             double epsilon) {
    if (shape == "bump_pair") return InitialData::positive_bump(grid, M, epsilon);
    if (shape == "bump")
        return InitialData::make(
            grid, [M](double x) { return bump(x, 0.0, M); }, [](double) { return 0.0; }, M,
            epsilon);
    if (shape == "bump_vel")
        return InitialData::make(
            grid, [](double) { return 0.0; }, [M](double x) { return bump(x, 0.0, M); }, M,
            epsilon);
    throw std::invalid_argument("data.shape: unknown shape '" + shape + "'");
}

inline ConePolicy cone_policy_of(const std::string& s) {
    if (s == "strict") return ConePolicy::strict;
    if (s == "wrap") return ConePolicy::periodic_wrap;
    throw std::invalid_argument("ctl.cone: expected 'strict' or 'wrap'");
}

inline json provenance(const json& resolved, long seed) {
    return json{{"config_hash", hash_hex(resolved.dump())},
                {"code_version", code_version},
                {"seed", seed}};
}

} // namespace detail

struct ExperimentResult {
    json summary;
    std::vector<std::filesystem::path> artifacts;
};

// -- sweep ----------------------------------------------------------------------

struct SweepRow {
    double p = 0.0;
    double epsilon = 0.0;
    std::string status;  // completed | blowup | accuracy_abort | failed:<reason>
    std::optional<double> blowup_time;
    std::optional<double> blowup_time_refined;
    std::optional<double> decay_slope;
    json final_norms;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    json provenance;
};

/// CSV `p,epsilon,outcome` sorted by (p, epsilon), with the critical-exponent
/// reference row appended.
inline std::string dichotomy_plotdata(const SweepResult& sweep) {
    auto rows = sweep.rows;
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.epsilon < b.epsilon;
    });
    std::ostringstream os;
    os << "p,epsilon,outcome\n";
    for (const auto& r : rows)
        os << fmt_g17(r.p) << ',' << fmt_g17(r.epsilon) << ',' << r.status << '\n';
    os << "5,,p_crit_reference\n";
    return os.str();
}

namespace detail {

inline json run_record(const json& params, const RunOutcome& out,
                       std::optional<double> decay_slope) {
    json rec;
    rec["params"] = params;
    switch (out.status) {
        case RunOutcome::Status::completed: rec["status"] = "completed"; break;
        case RunOutcome::Status::blowup_detected: rec["status"] = "blowup"; break;
        case RunOutcome::Status::accuracy_abort: rec["status"] = "accuracy_abort"; break;
    }
    rec["blowup_time_estimate"] =
        out.blowup_time_estimate ? json(*out.blowup_time_estimate) : json(nullptr);
    rec["decay_slope"] = decay_slope ? json(*decay_slope) : json(nullptr);
    const auto& last = out.trajectory.samples.back();
    rec["final_norms"] = {{"sup", last.sup}, {"mass", last.mass}, {"t", last.t}};
    if (!out.note.empty()) rec["note"] = out.note;
    return rec;
}

// ---- kind handlers ----

inline ExperimentResult exp_exponents(const json& cfg, const std::filesystem::path& out_dir) {
    json defaults{{"m", 1}, {"n", 1}};
    json p = merged(defaults, cfg.value("exponents", json::object()));
    auto r = critical_exponents(p["m"].get<int>(), p["n"].get<int>());
    json resolved = cfg;
    resolved["exponents"] = p;
    json summary;
    summary["provenance"] = provenance(resolved, cfg.value("seed", 0l));
    summary["config"] = resolved;
    summary["report"] = {{"p_crit", r.p_crit},
                         {"p_conf", r.p_conf},
                         {"p0", r.p0},
                         {"p1", r.p1},
                         {"w1_root", r.w1_root},
                         {"gamma_interval", {r.gamma_interval.lo, r.gamma_interval.hi}},
                         {"gamma_nonempty", r.gamma_interval.nonempty},
                         {"global_gate", r.gamma_interval.global_gate},
                         {"degenerate", r.degenerate}};
    std::ostringstream csv;
    csv << "name,value\n";
    csv << "p_crit," << fmt_g17(r.p_crit) << "\n";
    csv << "p_conf," << fmt_g17(r.p_conf) << "\n";
    csv << "p0," << fmt_g17(r.p0) << "\n";
    csv << "p1," << fmt_g17(r.p1) << "\n";
    csv << "w1_root," << fmt_g17(r.w1_root) << "\n";
    csv << "gamma_lo," << fmt_g17(r.gamma_interval.lo) << "\n";
    csv << "gamma_hi," << fmt_g17(r.gamma_interval.hi) << "\n";
    ExperimentResult res;
    res.summary = summary;
    write_file_atomic(out_dir / "exponents.json", summary.dump(2) + "\n");
    write_file_atomic(out_dir / "exponents.csv", csv.str());
    res.artifacts = {out_dir / "exponents.json", out_dir / "exponents.csv"};
    return res;
}

inline ExperimentResult exp_specfun_table(const json& cfg,
                                          const std::filesystem::path& out_dir) {
    json defaults{{"fn", "airy_lambda"}, {"t_min", 0.0},   {"t_max", 10.0},
                  {"count", 101},        {"nu", 1.0 / 3.0}, {"gamma", 1.0 / 6.0},
                  {"pair", "16"}};
    json p = merged(defaults, cfg.value("specfun", json::object()));
    const std::string fn = p["fn"];
    const int count = p["count"];
    if (count < 2) throw std::invalid_argument("specfun.count must be >= 2");
    EvalDomain dom;
    if (fn == "airy_pair" || fn == "kummer_phi") {
        // argument ranges may be negative; only the ordering is validated
        dom.t_min = p["t_min"].get<double>();
        dom.t_max = p["t_max"].get<double>();
        if (!(dom.t_min < dom.t_max))
            throw std::invalid_argument("specfun: t_min must be < t_max");
    } else {
        dom = EvalDomain::make(p["t_min"].get<double>(), p["t_max"].get<double>());
    }
    std::ostringstream csv;
    if (fn == "bessel_k") {
        csv << "t,value\n";
        for (int i = 0; i < count; ++i) {
            double t = dom.t_min + (dom.t_max - dom.t_min) * i / (count - 1.0);
            if (t <= 0.0) continue;
            csv << fmt_g17(t) << ',' << fmt_g17(bessel_k(p["nu"].get<double>(), t)) << '\n';
        }
    } else if (fn == "airy_lambda") {
        csv << "t,value\n";
        for (int i = 0; i < count; ++i) {
            double t = dom.t_min + (dom.t_max - dom.t_min) * i / (count - 1.0);
            csv << fmt_g17(t) << ',' << fmt_g17(airy_lambda(t)) << '\n';
        }
    } else if (fn == "airy_pair") {
        csv << "s,ai,bi,ai_prime,bi_prime\n";
        for (int i = 0; i < count; ++i) {
            double s = dom.t_min + (dom.t_max - dom.t_min) * i / (count - 1.0);
            auto v = airy_pair(s);
            csv << fmt_g17(s) << ',' << fmt_g17(v.ai) << ',' << fmt_g17(v.bi) << ','
                << fmt_g17(v.ai_prime) << ',' << fmt_g17(v.bi_prime) << '\n';
        }
    } else if (fn == "kummer_phi") {
        double a = (p["pair"] == "56") ? 5.0 / 6.0 : 1.0 / 6.0;
        double c = (p["pair"] == "56") ? 5.0 / 3.0 : 1.0 / 3.0;
        csv << "y,re,im\n";
        for (int i = 0; i < count; ++i) {
            double y = dom.t_min + (dom.t_max - dom.t_min) * i / (count - 1.0);
            auto v = kummer_phi(a, c, {0.0, y});
            csv << fmt_g17(y) << ',' << fmt_g17(v.real()) << ',' << fmt_g17(v.imag()) << '\n';
        }
    } else if (fn == "gauss_hyp_unit") {
        csv << "z,value\n";
        for (int i = 0; i < count; ++i) {
            double z = dom.t_min + (dom.t_max - dom.t_min) * i / (count - 1.0);
            if (z < 0.0 || z >= 1.0) continue;
            csv << fmt_g17(z) << ',' << fmt_g17(gauss_hyp_unit(p["gamma"].get<double>(), z))
                << '\n';
        }
    } else {
        throw std::invalid_argument("specfun.fn: unknown function '" + fn + "'");
    }
    json resolved = cfg;
    resolved["specfun"] = p;
    json summary;
    summary["provenance"] = provenance(resolved, cfg.value("seed", 0l));
    summary["config"] = resolved;
    auto csv_path = out_dir / (fn + ".csv");
    write_file_atomic(csv_path, csv.str());
    write_file_atomic(out_dir / "specfun.json", summary.dump(2) + "\n");
    ExperimentResult res;
    res.summary = summary;
    res.artifacts = {csv_path, out_dir / "specfun.json"};
    return res;
}

inline json simulate_defaults() {
    return json{{"grid", {{"L", 24.0}, {"n", 512}}},
                {"data", {{"shape", "bump_pair"}, {"M", 3.0}, {"epsilon", 0.5}}},
                {"nl", {{"enabled", true}, {"p", 3.0}, {"variant", "pure"}, {"T0", 0.5}}},
                {"ctl",
                 {{"cfl", 0.4},
                  {"T_end", 10.0},
                  {"blowup_threshold", 1e6},
                  {"dt_min", 1e-10},
                  {"cone", "wrap"},
                  {"snapshots", false},
                  {"dealias", false}}}};
}

inline RunOutcome run_from_config(const json& p, std::optional<double>* slope_out) {
    auto grid = Grid1D::make(p["grid"]["L"].get<double>(), p["grid"]["n"].get<int>());
    auto data = make_data(p["data"]["shape"], grid, p["data"]["M"].get<double>(),
                          p["data"]["epsilon"].get<double>());
    std::optional<NonlinearitySpec> nl;
    if (p["nl"]["enabled"].get<bool>()) {
        double pp = p["nl"]["p"].get<double>();
        nl = (p["nl"]["variant"] == "cutoff")
                 ? NonlinearitySpec::with_cutoff(pp, p["nl"]["T0"].get<double>())
                 : NonlinearitySpec::pure(pp);
    }
    StepControl ctl;
    ctl.cfl = p["ctl"]["cfl"].get<double>();
    ctl.T_end = p["ctl"]["T_end"].get<double>();
    ctl.blowup_threshold = p["ctl"]["blowup_threshold"].get<double>();
    ctl.dt_min = p["ctl"]["dt_min"].get<double>();
    ctl.cone_policy = cone_policy_of(p["ctl"]["cone"]);
    ctl.store_snapshots = p["ctl"]["snapshots"].get<bool>();
    ctl.dealias_23 = p["ctl"]["dealias"].get<bool>();
    auto out = run(data, nl, ctl, grid);
    if (slope_out) {
        *slope_out = std::nullopt;
        if (out.status == RunOutcome::Status::completed) {
            double lo = std::max(10.0, 0.05 * ctl.T_end), hi = ctl.T_end;
            try {
                *slope_out = decay_fit(out.trajectory, lo, hi).slope;
            } catch (const std::invalid_argument&) {
            }
        }
    }
    return out;
}

inline ExperimentResult exp_simulate(const json& cfg, const std::filesystem::path& out_dir) {
    json p = merged(simulate_defaults(), cfg.value("simulate", json::object()));
    std::optional<double> slope;
    auto out = run_from_config(p, &slope);
    json resolved = cfg;
    resolved["simulate"] = p;
    json summary;
    summary["provenance"] = provenance(resolved, cfg.value("seed", 0l));
    summary["config"] = resolved;
    summary["run"] = run_record(p, out, slope);
    write_file_atomic(out_dir / "run.json", summary.dump(2) + "\n");
    write_file_atomic(out_dir / "series.csv", out.trajectory.diagnostics_csv());
    ExperimentResult res;
    res.summary = summary;
    res.artifacts = {out_dir / "run.json", out_dir / "series.csv"};
    if (p["ctl"]["snapshots"].get<bool>()) {
        write_file_atomic(out_dir / "snapshots.csv", snapshots_csv(out.trajectory));
        res.artifacts.push_back(out_dir / "snapshots.csv");
    }
    // growth/convexity witness for blowup runs with the nonlinearity on
    if (out.status == RunOutcome::Status::blowup_detected && p["nl"]["enabled"].get<bool>() &&
        out.blowup_time_estimate) {
        double pp = p["nl"]["p"].get<double>();
        double R = p["data"]["M"].get<double>();
        try {
            auto wit = riccati_check(out.trajectory, pp, R, 0.1 * (*out.blowup_time_estimate),
                                     *out.blowup_time_estimate);
            json wj{{"p", wit.p},
                    {"q", wit.q_exponent},
                    {"alpha", wit.alpha},
                    {"C0", wit.C0},
                    {"C1", wit.C1},
                    {"lemma_satisfied", wit.lemma_satisfied},
                    {"window", {wit.window_lo, wit.window_hi}},
                    {"provenance", summary["provenance"]}};
            write_file_atomic(out_dir / "witness.json", wj.dump(2) + "\n");
            res.artifacts.push_back(out_dir / "witness.json");
            res.summary["witness"] = wj;
        } catch (const std::invalid_argument&) {
            // window too short for a witness; the run record stands alone
        }
    }
    return res;
}

inline ExperimentResult exp_linear_decay(const json& cfg,
                                         const std::filesystem::path& out_dir) {
    json defaults{{"grid", {{"L", 60.0}, {"n", 2048}}},
                  {"data", {{"shape", "bump"}, {"M", 3.0}, {"epsilon", 1.0}}},
                  {"window", {{"t_lo", 10.0}, {"t_hi", 200.0}}},
                  {"samples", 128}};
    json p = merged(defaults, cfg.value("linear_decay", json::object()));
    auto grid = Grid1D::make(p["grid"]["L"].get<double>(), p["grid"]["n"].get<int>());
    auto data = make_data(p["data"]["shape"], grid, p["data"]["M"].get<double>(),
                          p["data"]["epsilon"].get<double>());
    double t_lo = p["window"]["t_lo"].get<double>(), t_hi = p["window"]["t_hi"].get<double>();
    int count = p["samples"].get<int>();
    if (count < 20) throw std::invalid_argument("linear_decay.samples must be >= 20");
    Fft fft(grid.npoints);
    TrajectoryRecord rec;
    rec.grid = grid;
    rec.M = data.M;
    double ratio = std::pow(t_hi / t_lo, 1.0 / (count - 1.0));
    for (int i = 0; i < count; ++i) {
        double t = t_lo * std::pow(ratio, i);
        auto st = evolve_homogeneous_exact(data, t, grid, ConePolicy::periodic_wrap, &fft);
        DiagnosticSample d;
        d.t = t;
        d.sup = sup_norm(st.u);
        d.mass = integral_dx(st.u, grid);
        d.energy = field_energy(st, fft);
        d.cone_leak = cone_leak(st, data.M);
        rec.samples.push_back(d);
    }
    auto fit = decay_fit(rec, t_lo, t_hi);
    json resolved = cfg;
    resolved["linear_decay"] = p;
    json summary;
    summary["provenance"] = provenance(resolved, cfg.value("seed", 0l));
    summary["config"] = resolved;
    summary["fit"] = {{"slope", fit.slope}, {"r2", fit.r2}, {"t_lo", t_lo}, {"t_hi", t_hi}};
    write_file_atomic(out_dir / "decay.json", summary.dump(2) + "\n");
    write_file_atomic(out_dir / "decay.csv", rec.diagnostics_csv());
    ExperimentResult res;
    res.summary = summary;
    res.artifacts = {out_dir / "decay.json", out_dir / "decay.csv"};
    return res;
}

inline ExperimentResult exp_blowup_scan(const json& cfg,
                                        const std::filesystem::path& out_dir) {
    json defaults{{"p", json::array({2.0, 3.0, 4.0, 4.5})},
                  {"epsilon", json::array({0.5})},
                  {"grid", {{"L", 24.0}, {"n", 512}}},
                  {"data", {{"shape", "bump_pair"}, {"M", 3.0}}},
                  {"ctl",
                   {{"cfl", 0.4},
                    {"T_end", 100.0},
                    {"blowup_threshold", 1e6},
                    {"dt_min", 1e-10},
                    {"cone", "wrap"},
                    {"snapshots", false},
                    {"dealias", false}}},
                  {"refine", false}};
    json p = merged(defaults, cfg.value("scan", json::object()));
    std::vector<std::pair<double, double>> cells;
    for (const auto& pv : p["p"])
        for (const auto& ev : p["epsilon"]) cells.emplace_back(pv.get<double>(), ev.get<double>());
    const int workers = std::max(1, cfg.value("workers", 1));
    std::vector<SweepRow> rows(cells.size());

    auto row_config = [&](double pp, double eps, int n_points) {
        json rp = simulate_defaults();
        rp["grid"]["L"] = p["grid"]["L"];
        rp["grid"]["n"] = n_points;
        rp["data"]["shape"] = p["data"]["shape"];
        rp["data"]["M"] = p["data"]["M"];
        rp["data"]["epsilon"] = eps;
        rp["nl"]["enabled"] = true;
        rp["nl"]["p"] = pp;
        rp["ctl"] = p["ctl"];
        return rp;
    };

    parallel_rows((int)cells.size(), workers, [&](int i) {
        auto [pp, eps] = cells[i];
        SweepRow& row = rows[i];
        row.p = pp;
        row.epsilon = eps;
        try {
            std::optional<double> slope;
            auto out = run_from_config(row_config(pp, eps, p["grid"]["n"].get<int>()), &slope);
            switch (out.status) {
                case RunOutcome::Status::completed: row.status = "completed"; break;
                case RunOutcome::Status::blowup_detected: row.status = "blowup"; break;
                case RunOutcome::Status::accuracy_abort: row.status = "accuracy_abort"; break;
            }
            row.blowup_time = out.blowup_time_estimate;
            row.decay_slope = slope;
            const auto& last = out.trajectory.samples.back();
            row.final_norms = {{"sup", last.sup}, {"mass", last.mass}, {"t", last.t}};
            if (p["refine"].get<bool>() && out.status == RunOutcome::Status::blowup_detected) {
                auto fine =
                    run_from_config(row_config(pp, eps, 2 * p["grid"]["n"].get<int>()), nullptr);
                row.blowup_time_refined = fine.blowup_time_estimate;
            }
        } catch (const std::exception& e) {
            row.status = std::string("failed:") + e.what();
        }
    });

    json resolved = cfg;
    resolved["scan"] = p;
    SweepResult sweep;
    sweep.rows = rows;
    sweep.provenance = provenance(resolved, cfg.value("seed", 0l));

    std::ostringstream jsonl;
    for (const auto& r : rows) {
        json rec{{"p", r.p},
                 {"epsilon", r.epsilon},
                 {"status", r.status},
                 {"blowup_time_estimate", r.blowup_time ? json(*r.blowup_time) : json(nullptr)},
                 {"blowup_time_refined",
                  r.blowup_time_refined ? json(*r.blowup_time_refined) : json(nullptr)},
                 {"decay_slope", r.decay_slope ? json(*r.decay_slope) : json(nullptr)},
                 {"final_norms", r.final_norms},
                 {"provenance", sweep.provenance}};
        jsonl << rec.dump() << "\n";
    }
    json summary;
    summary["provenance"] = sweep.provenance;
    summary["config"] = resolved;
    summary["rows"] = json::array();
    for (const auto& r : rows)
        summary["rows"].push_back({{"p", r.p}, {"epsilon", r.epsilon}, {"status", r.status}});
    write_file_atomic(out_dir / "sweep.jsonl", jsonl.str());
    write_file_atomic(out_dir / "dichotomy.csv", dichotomy_plotdata(sweep));
    write_file_atomic(out_dir / "scan.json", summary.dump(2) + "\n");
    ExperimentResult res;
    res.summary = summary;
    res.artifacts = {out_dir / "sweep.jsonl", out_dir / "dichotomy.csv", out_dir / "scan.json"};
    return res;
}

inline ExperimentResult exp_picard(const json& cfg, const std::filesystem::path& out_dir) {
    json defaults{{"p", 7.0},      {"epsilon", 1e-3}, {"T0", 0.5},  {"t_num", 50.0},
                  {"grid", {{"L", 250.0}, {"n", 8192}}}, {"M", 3.0}, {"k_max", 6},
                  {"cfl", 0.3},    {"gamma", nullptr}};
    json p = merged(defaults, cfg.value("picard", json::object()));
    double pp = p["p"].get<double>();
    double gamma = p["gamma"].is_null() ? picard_weight_gamma(pp) : p["gamma"].get<double>();
    auto grid = Grid1D::make(p["grid"]["L"].get<double>(), p["grid"]["n"].get<int>());
    auto data = InitialData::positive_bump(grid, p["M"].get<double>(), p["epsilon"].get<double>());
    auto nl = NonlinearitySpec::with_cutoff(pp, p["T0"].get<double>());
    StepControl ctl;
    ctl.cfl = p["cfl"].get<double>();
    auto w = WeightSpec::make(gamma, pp + 1.0, p["M"].get<double>());
    auto result = picard_iterate(data, nl, p["k_max"].get<int>(), w, grid, ctl,
                                 p["t_num"].get<double>());
    json resolved = cfg;
    resolved["picard"] = p;
    resolved["picard"]["gamma"] = gamma;
    json summary;
    summary["provenance"] = provenance(resolved, cfg.value("seed", 0l));
    summary["config"] = resolved;
    json steps = json::array();
    json ratios = json::array();
    for (size_t k = 0; k < result.steps.size(); ++k) {
        steps.push_back({{"k", result.steps[k].k},
                         {"M_k", result.steps[k].m_norm},
                         {"N_k", result.steps[k].n_norm}});
        if (k >= 1 && result.steps[k - 1].n_norm > 0.0)
            ratios.push_back(result.steps[k].n_norm / result.steps[k - 1].n_norm);
    }
    summary["picard"] = {{"steps", steps},
                         {"ratios", ratios},
                         {"max_ratio", result.max_ratio},
                         {"contraction_failure", result.contraction_failure},
                         {"gamma", gamma},
                         {"q", pp + 1.0}};
    write_file_atomic(out_dir / "picard.json", summary.dump(2) + "\n");
    ExperimentResult res;
    res.summary = summary;
    res.artifacts = {out_dir / "picard.json"};
    return res;
}

inline ExperimentResult exp_strichartz_scan(const json& cfg,
                                            const std::filesystem::path& out_dir) {
    json defaults{{"corpus", "data/corpus.json"}};
    json p = merged(defaults, cfg.value("strichartz", json::object()));
    std::ifstream in(p["corpus"].get<std::string>());
    if (!in) throw std::invalid_argument("strichartz.corpus: cannot open " +
                                         p["corpus"].get<std::string>());
    json corpus = json::parse(in);

    // fractional-integral scan
    const auto& gj = corpus["glassey"];
    double q = gj["q"].get<double>();
    auto ab = alphabeta_solve(q);
    double delta = 1.0 / (3.0 * q) + 1.0 / 6.0;
    double r = q / (q - 1.0);
    std::vector<std::pair<std::string, SampledFn>> family;
    for (const auto& f : gj["family"]) {
        double c = f["center"].get<double>(), rad = f["radius"].get<double>();
        family.emplace_back(f["id"].get<std::string>(),
                            SampledFn::tabulate([c, rad](double x) { return bump(x, c, rad); },
                                                f["lo"].get<double>(), f["hi"].get<double>(),
                                                f["count"].get<int>()));
    }
    std::vector<double> u_grid;
    for (double u = gj["u_grid"]["lo"].get<double>(); u < gj["u_grid"]["hi"].get<double>();
         u *= gj["u_grid"]["factor"].get<double>())
        u_grid.push_back(u);
    auto scan = glassey_ratio_scan(family, ab.alpha, ab.beta, delta, q, r, u_grid);
    std::ostringstream gcsv;
    gcsv << "case_id,lhs,rhs,ratio\n";
    for (const auto& c : scan.cases)
        gcsv << c.id << "@" << fmt_g17(c.lambda) << ',' << fmt_g17(c.lhs) << ','
             << fmt_g17(c.rhs) << ',' << fmt_g17(c.ratio) << '\n';

    // inhomogeneous weighted inequality over the source corpus
    const auto& ij = corpus["inhomogeneous"];
    auto grid = Grid1D::make(ij["grid"]["L"].get<double>(), ij["grid"]["n"].get<int>());
    auto ab2 = alphabeta_solve(ij["q"].get<double>());
    std::vector<SourceTerm> sources;
    for (const auto& s : ij["sources"]) {
        SourceTerm F;
        double sc = s["s_center"].get<double>(), xc = s["x_center"].get<double>();
        double sr = s["s_radius"].get<double>(), xr = s["x_radius"].get<double>();
        F.f = [sc, xc, sr, xr](double t, double x) {
            return bump(t, sc, sr) * bump(x, xc, xr);
        };
        F.cone_interior = true;
        F.s_min = sc - sr;
        F.s_max = sc + sr;
        F.x_min = xc - xr;
        F.x_max = xc + xr;
        sources.push_back(std::move(F));
    }
    DuhamelOptions opts;
    opts.adaptive = false;
    opts.s_panels = 4;
    opts.y_panels = 4;
    opts.gl_order = 12;
    auto inhom = inhomogeneous_inequality_sample(sources, ab2, ij["M"].get<double>(),
                                                 ij["t_lo"].get<double>(),
                                                 ij["horizon"].get<double>(), grid,
                                                 ij["nsnaps"].get<int>(), opts);
    std::ostringstream icsv;
    icsv << "case_id,lhs,rhs,ratio\n";
    for (const auto& c : inhom.cases) {
        if (c.skipped) {
            icsv << c.index << ",,,skipped\n";
            continue;
        }
        icsv << c.index << ',' << fmt_g17(c.lhs) << ',' << fmt_g17(c.rhs) << ','
             << fmt_g17(c.ratio) << '\n';
    }

    json resolved = cfg;
    resolved["strichartz"] = p;
    json summary;
    summary["provenance"] = provenance(resolved, cfg.value("seed", 0l));
    summary["config"] = resolved;
    summary["corpus_version"] = corpus.value("version", 0);
    summary["glassey"] = {{"ok", scan.ok()},
                          {"violation", scan.violation},
                          {"max_ratio", scan.max_ratio},
                          {"alpha", ab.alpha},
                          {"beta", ab.beta},
                          {"delta", delta},
                          {"q", q},
                          {"r", r}};
    summary["inhomogeneous"] = {{"max_ratio", inhom.max_ratio},
                                {"min_ratio", inhom.min_ratio},
                                {"alpha", ab2.alpha},
                                {"beta", ab2.beta}};
    write_file_atomic(out_dir / "glassey.csv", gcsv.str());
    write_file_atomic(out_dir / "inhom.csv", icsv.str());
    write_file_atomic(out_dir / "strichartz.json", summary.dump(2) + "\n");
    ExperimentResult res;
    res.summary = summary;
    res.artifacts = {out_dir / "glassey.csv", out_dir / "inhom.csv",
                     out_dir / "strichartz.json"};
    return res;
}

} // namespace detail

/// Runs one experiment described by the config tree; artifacts land in
/// config["out"]. Scientific outcomes are data; invalid configs throw.
inline ExperimentResult run_experiment(const json& config) {
    if (!config.contains("kind") || !config["kind"].is_string())
        throw std::invalid_argument("config.kind: required string");
    const std::string kind = config["kind"];
    std::filesystem::path out_dir = config.value("out", std::string("results"));
    std::filesystem::create_directories(out_dir);
    if (kind == "exponents") return detail::exp_exponents(config, out_dir);
    if (kind == "specfun-table") return detail::exp_specfun_table(config, out_dir);
    if (kind == "simulate") return detail::exp_simulate(config, out_dir);
    if (kind == "linear-decay") return detail::exp_linear_decay(config, out_dir);
    if (kind == "blowup-scan") return detail::exp_blowup_scan(config, out_dir);
    if (kind == "picard") return detail::exp_picard(config, out_dir);
    if (kind == "strichartz-scan") return detail::exp_strichartz_scan(config, out_dir);
    throw std::invalid_argument("config.kind: unknown experiment '" + kind + "'");
}

} // namespace tricomi
