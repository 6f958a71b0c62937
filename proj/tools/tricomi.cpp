// Command-line driver: single runs, dichotomy sweeps, exponent tables,
// special-function tables, and weighted-inequality scans. Scientific outcomes
// (blowup, contraction failure) are recorded in the artifacts and never turn
// into nonzero exit codes; only infrastructure problems do.
//
// A --config file provides the base tree; only flags explicitly passed on the
// command line override it.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "tricomi/experiment.hpp"

using tricomi::json;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = "results";
    long seed = 0;
    int workers = 1;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "JSON config file (explicit flags override it)");
    sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "seed recorded in artifact provenance")
        ->capture_default_str();
    sub->add_option("--workers", c.workers, "worker threads for sweeps")
        ->capture_default_str();
}

json base_config(const Common& c, const std::string& kind) {
    json cfg = json::object();
    if (!c.config_path.empty()) {
        std::ifstream in(c.config_path);
        if (!in) throw std::invalid_argument("cannot open config file " + c.config_path);
        cfg = json::parse(in);
    }
    cfg["kind"] = kind;
    cfg["out"] = c.out_dir;
    cfg["seed"] = c.seed;
    cfg["workers"] = c.workers;
    return cfg;
}

// json pointer assignment gated on the option having been passed
struct Override {
    CLI::Option* opt;
    std::string pointer;
    std::function<json()> value;
};

void apply_overrides(json& block, const std::vector<Override>& ovs) {
    for (const auto& o : ovs)
        if (o.opt->count() > 0) block[json::json_pointer(o.pointer)] = o.value();
}

int finish(const tricomi::ExperimentResult& res) {
    for (const auto& a : res.artifacts) std::cout << "wrote " << a.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tricomi: numerical laboratory for the degenerate semilinear wave equation "
                 "d^2_t u - t d^2_x u = |u|^p"};
    app.require_subcommand(1);

    // exponents
    auto* sc_exp = app.add_subcommand("exponents", "critical-exponent report");
    Common c_exp;
    add_common(sc_exp, c_exp);
    int m = 1, n = 1;
    std::vector<Override> ov_exp{
        {sc_exp->add_option("--m", m, "degeneracy exponent of t^m")->capture_default_str(),
         "/m", [&] { return json(m); }},
        {sc_exp->add_option("--n", n, "space dimension of the exponent family")
             ->capture_default_str(),
         "/n", [&] { return json(n); }}};

    // specfun-table
    auto* sc_sf = app.add_subcommand("specfun-table", "special-function table generation");
    Common c_sf;
    add_common(sc_sf, c_sf);
    std::string fn = "airy_lambda", pair = "16";
    double nu = 1.0 / 3.0, sf_gamma = 1.0 / 6.0, sf_min = 0.0, sf_max = 10.0, at_value = 0.0;
    int sf_count = 101;
    std::vector<Override> ov_sf{
        {sc_sf->add_option("--fn", fn,
                           "bessel_k | airy_lambda | airy_pair | kummer_phi | gauss_hyp_unit")
             ->capture_default_str(),
         "/fn", [&] { return json(fn); }},
        {sc_sf->add_option("--nu", nu, "order for bessel_k")->capture_default_str(), "/nu",
         [&] { return json(nu); }},
        {sc_sf->add_option("--gamma", sf_gamma, "parameter for gauss_hyp_unit")
             ->capture_default_str(),
         "/gamma", [&] { return json(sf_gamma); }},
        {sc_sf->add_option("--pair", pair, "kummer parameter pair: 16 or 56")
             ->capture_default_str(),
         "/pair", [&] { return json(pair); }},
        {sc_sf->add_option("--min", sf_min, "table start")->capture_default_str(), "/t_min",
         [&] { return json(sf_min); }},
        {sc_sf->add_option("--max", sf_max, "table end")->capture_default_str(), "/t_max",
         [&] { return json(sf_max); }},
        {sc_sf->add_option("--count", sf_count, "table rows")->capture_default_str(), "/count",
         [&] { return json(sf_count); }}};
    auto* at_opt = sc_sf->add_option("--at", at_value, "evaluate at one point and print");

    // simulate
    auto* sc_sim = app.add_subcommand("simulate", "single semilinear run");
    Common c_sim;
    add_common(sc_sim, c_sim);
    double sim_p = 3.0, sim_eps = 0.5, sim_L = 24.0, sim_T = 10.0, sim_M = 3.0, sim_cfl = 0.4;
    double sim_threshold = 1e6, sim_T0 = 0.5;
    int sim_n = 512;
    std::string sim_variant = "pure", sim_shape = "bump_pair", sim_cone = "wrap";
    bool sim_snapshots = false, sim_linear = false;
    std::vector<Override> ov_sim{
        {sc_sim->add_option("--p", sim_p, "nonlinearity power")->capture_default_str(),
         "/nl/p", [&] { return json(sim_p); }},
        {sc_sim->add_option("--epsilon", sim_eps, "data amplitude")->capture_default_str(),
         "/data/epsilon", [&] { return json(sim_eps); }},
        {sc_sim->add_option("--L", sim_L, "box half-width")->capture_default_str(), "/grid/L",
         [&] { return json(sim_L); }},
        {sc_sim->add_option("--n", sim_n, "grid points (power of two)")->capture_default_str(),
         "/grid/n", [&] { return json(sim_n); }},
        {sc_sim->add_option("--T-end", sim_T, "final time")->capture_default_str(),
         "/ctl/T_end", [&] { return json(sim_T); }},
        {sc_sim->add_option("--M", sim_M, "data support radius")->capture_default_str(),
         "/data/M", [&] { return json(sim_M); }},
        {sc_sim->add_option("--cfl", sim_cfl, "cfl number")->capture_default_str(), "/ctl/cfl",
         [&] { return json(sim_cfl); }},
        {sc_sim->add_option("--threshold", sim_threshold, "blowup threshold")
             ->capture_default_str(),
         "/ctl/blowup_threshold", [&] { return json(sim_threshold); }},
        {sc_sim->add_option("--variant", sim_variant, "pure | cutoff")->capture_default_str(),
         "/nl/variant", [&] { return json(sim_variant); }},
        {sc_sim->add_option("--T0", sim_T0, "cutoff time for the cutoff variant")
             ->capture_default_str(),
         "/nl/T0", [&] { return json(sim_T0); }},
        {sc_sim->add_option("--shape", sim_shape, "bump_pair | bump | bump_vel")
             ->capture_default_str(),
         "/data/shape", [&] { return json(sim_shape); }},
        {sc_sim->add_option("--cone", sim_cone, "strict | wrap")->capture_default_str(),
         "/ctl/cone", [&] { return json(sim_cone); }},
        {sc_sim->add_flag("--snapshots", sim_snapshots, "store field snapshots"),
         "/ctl/snapshots", [&] { return json(sim_snapshots); }},
        {sc_sim->add_flag("--linear", sim_linear, "disable the nonlinearity"), "/nl/enabled",
         [&] { return json(!sim_linear); }}};

    // linear-decay
    auto* sc_dec = app.add_subcommand("linear-decay", "sup-norm decay of the free field");
    Common c_dec;
    add_common(sc_dec, c_dec);
    double dec_L = 60.0, dec_lo = 10.0, dec_hi = 200.0, dec_M = 3.0;
    int dec_n = 2048, dec_samples = 128;
    std::vector<Override> ov_dec{
        {sc_dec->add_option("--L", dec_L)->capture_default_str(), "/grid/L",
         [&] { return json(dec_L); }},
        {sc_dec->add_option("--n", dec_n)->capture_default_str(), "/grid/n",
         [&] { return json(dec_n); }},
        {sc_dec->add_option("--M", dec_M, "data support radius")->capture_default_str(),
         "/data/M", [&] { return json(dec_M); }},
        {sc_dec->add_option("--t-lo", dec_lo)->capture_default_str(), "/window/t_lo",
         [&] { return json(dec_lo); }},
        {sc_dec->add_option("--t-hi", dec_hi)->capture_default_str(), "/window/t_hi",
         [&] { return json(dec_hi); }},
        {sc_dec->add_option("--samples", dec_samples)->capture_default_str(), "/samples",
         [&] { return json(dec_samples); }}};

    // blowup-scan
    auto* sc_scan = app.add_subcommand("blowup-scan", "dichotomy sweep over (p, epsilon)");
    Common c_scan;
    add_common(sc_scan, c_scan);
    std::vector<double> scan_p{2.0, 3.0, 4.0, 4.5}, scan_eps{0.5};
    double scan_L = 24.0, scan_T = 100.0;
    int scan_n = 512;
    bool scan_refine = false;
    std::vector<Override> ov_scan{
        {sc_scan->add_option("--p", scan_p, "powers to sweep")->delimiter(','), "/p",
         [&] { return json(scan_p); }},
        {sc_scan->add_option("--epsilon", scan_eps, "amplitudes to sweep")->delimiter(','),
         "/epsilon", [&] { return json(scan_eps); }},
        {sc_scan->add_option("--L", scan_L)->capture_default_str(), "/grid/L",
         [&] { return json(scan_L); }},
        {sc_scan->add_option("--n", scan_n)->capture_default_str(), "/grid/n",
         [&] { return json(scan_n); }},
        {sc_scan->add_option("--T-end", scan_T)->capture_default_str(), "/ctl/T_end",
         [&] { return json(scan_T); }},
        {sc_scan->add_flag("--refine", scan_refine, "re-run blowups at doubled resolution"),
         "/refine", [&] { return json(scan_refine); }}};

    // picard
    auto* sc_pic = app.add_subcommand("picard", "successive-approximation contraction");
    Common c_pic;
    add_common(sc_pic, c_pic);
    double pic_p = 7.0, pic_eps = 1e-3, pic_tnum = 50.0, pic_L = 250.0;
    int pic_n = 8192, pic_kmax = 6;
    std::vector<Override> ov_pic{
        {sc_pic->add_option("--p", pic_p)->capture_default_str(), "/p",
         [&] { return json(pic_p); }},
        {sc_pic->add_option("--epsilon", pic_eps)->capture_default_str(), "/epsilon",
         [&] { return json(pic_eps); }},
        {sc_pic->add_option("--t-num", pic_tnum)->capture_default_str(), "/t_num",
         [&] { return json(pic_tnum); }},
        {sc_pic->add_option("--k-max", pic_kmax)->capture_default_str(), "/k_max",
         [&] { return json(pic_kmax); }},
        {sc_pic->add_option("--L", pic_L)->capture_default_str(), "/grid/L",
         [&] { return json(pic_L); }},
        {sc_pic->add_option("--n", pic_n)->capture_default_str(), "/grid/n",
         [&] { return json(pic_n); }}};

    // strichartz-scan
    auto* sc_str = app.add_subcommand("strichartz-scan", "weighted-inequality sampling");
    Common c_str;
    add_common(sc_str, c_str);
    std::string corpus = "data/corpus.json";
    std::vector<Override> ov_str{
        {sc_str->add_option("--corpus", corpus, "versioned corpus file")->capture_default_str(),
         "/corpus", [&] { return json(corpus); }}};

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_exp->parsed()) {
            json cfg = base_config(c_exp, "exponents");
            json block = cfg.value("exponents", json::object());
            apply_overrides(block, ov_exp);
            cfg["exponents"] = block;
            auto res = tricomi::run_experiment(cfg);
            const auto& r = res.summary["report"];
            std::cout << "p_crit  = " << r["p_crit"].get<double>() << "\n"
                      << "p_conf  = " << r["p_conf"].get<double>() << "\n"
                      << "p0      = " << r["p0"].get<double>() << "\n"
                      << "p1      = " << tricomi::fmt_g17(r["p1"].get<double>()) << "\n"
                      << "w1_root = " << tricomi::fmt_g17(r["w1_root"].get<double>()) << "\n";
            return finish(res);
        }
        if (sc_sf->parsed()) {
            if (at_opt->count() > 0) {
                if (fn == "bessel_k")
                    std::cout << tricomi::fmt_g17(tricomi::bessel_k(nu, at_value)) << "\n";
                else if (fn == "airy_lambda")
                    std::cout << tricomi::fmt_g17(tricomi::airy_lambda(at_value)) << "\n";
                else if (fn == "airy_pair") {
                    auto v = tricomi::airy_pair(at_value);
                    std::cout << tricomi::fmt_g17(v.ai) << " " << tricomi::fmt_g17(v.bi) << " "
                              << tricomi::fmt_g17(v.ai_prime) << " "
                              << tricomi::fmt_g17(v.bi_prime) << "\n";
                } else if (fn == "kummer_phi") {
                    double a = (pair == "56") ? 5.0 / 6.0 : 1.0 / 6.0;
                    double c = (pair == "56") ? 5.0 / 3.0 : 1.0 / 3.0;
                    auto v = tricomi::kummer_phi(a, c, {0.0, at_value});
                    std::cout << tricomi::fmt_g17(v.real()) << " "
                              << tricomi::fmt_g17(v.imag()) << "\n";
                } else if (fn == "gauss_hyp_unit")
                    std::cout << tricomi::fmt_g17(tricomi::gauss_hyp_unit(sf_gamma, at_value))
                              << "\n";
                else
                    throw std::invalid_argument("unknown --fn " + fn);
                return 0;
            }
            json cfg = base_config(c_sf, "specfun-table");
            json block = cfg.value("specfun", json::object());
            apply_overrides(block, ov_sf);
            cfg["specfun"] = block;
            return finish(tricomi::run_experiment(cfg));
        }
        if (sc_sim->parsed()) {
            json cfg = base_config(c_sim, "simulate");
            json block = cfg.value("simulate", json::object());
            apply_overrides(block, ov_sim);
            cfg["simulate"] = block;
            auto res = tricomi::run_experiment(cfg);
            std::cout << "status: " << res.summary["run"]["status"].get<std::string>() << "\n";
            return finish(res);
        }
        if (sc_dec->parsed()) {
            json cfg = base_config(c_dec, "linear-decay");
            json block = cfg.value("linear_decay", json::object());
            apply_overrides(block, ov_dec);
            cfg["linear_decay"] = block;
            auto res = tricomi::run_experiment(cfg);
            std::cout << "decay slope: " << res.summary["fit"]["slope"].get<double>()
                      << "  (r2 = " << res.summary["fit"]["r2"].get<double>() << ")\n";
            return finish(res);
        }
        if (sc_scan->parsed()) {
            json cfg = base_config(c_scan, "blowup-scan");
            json block = cfg.value("scan", json::object());
            apply_overrides(block, ov_scan);
            cfg["scan"] = block;
            auto res = tricomi::run_experiment(cfg);
            for (const auto& row : res.summary["rows"])
                std::cout << "p=" << row["p"].get<double>()
                          << " epsilon=" << row["epsilon"].get<double>() << " -> "
                          << row["status"].get<std::string>() << "\n";
            return finish(res);
        }
        if (sc_pic->parsed()) {
            json cfg = base_config(c_pic, "picard");
            json block = cfg.value("picard", json::object());
            apply_overrides(block, ov_pic);
            cfg["picard"] = block;
            auto res = tricomi::run_experiment(cfg);
            std::cout << "max contraction ratio: "
                      << res.summary["picard"]["max_ratio"].get<double>() << "\n";
            return finish(res);
        }
        if (sc_str->parsed()) {
            json cfg = base_config(c_str, "strichartz-scan");
            json block = cfg.value("strichartz", json::object());
            apply_overrides(block, ov_str);
            cfg["strichartz"] = block;
            return finish(tricomi::run_experiment(cfg));
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
