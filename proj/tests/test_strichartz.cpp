#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tricomi/strichartz.hpp"
#include "oracles.hpp"

using namespace tricomi;
using std::fabs;

TEST_CASE("exponent report at (1,1)") {
    auto r = critical_exponents(1, 1);
    CHECK(fabs(r.p_crit - 5.0) < 1e-15);
    CHECK(fabs(r.p_conf - 9.0) < 1e-15);
    CHECK(fabs(r.p0 - 9.0) < 1e-15);
    CHECK(fabs(r.w1_root - 0.5 * (3.0 + std::sqrt(33.0))) < 1e-12);
    CHECK(fabs(r.p1 - r.w1_root) < 1e-12);
    // back-substitution into the quadratic
    double A = 3.0 / 2.0 - 1.0, B = 3.0 / 2.0 - 3.0, C = -3.0;
    double v = A * r.w1_root * r.w1_root + B * r.w1_root + C;
    CHECK(fabs(v) < 1e-12);
    CHECK(!r.degenerate);
    // gamma interval at p_conf = 9 is (0, 1/12)
    CHECK(fabs(r.gamma_interval.hi - 1.0 / 12.0) < 1e-15);
    CHECK(r.gamma_interval.lo == 0.0);
    CHECK(r.gamma_interval.nonempty);
    CHECK(r.gamma_interval.global_gate);
}

TEST_CASE("exponent families in m and n") {
    CHECK(fabs(critical_exponents(2, 1).p_crit - 3.0) < 1e-15);
    CHECK(fabs(critical_exponents(4, 1).p_crit - 2.0) < 1e-15);
    CHECK(fabs(critical_exponents(1, 2).p_conf - 3.0) < 1e-15);
    CHECK(fabs(critical_exponents(1, 3).p_conf - 15.0 / 7.0) < 1e-15);
    CHECK_THROWS_AS(critical_exponents(0, 1), std::invalid_argument);
    // back-substitution for a few (m, n)
    for (int m : {1, 2, 3})
        for (int n : {1, 2, 4}) {
            auto r = critical_exponents(m, n);
            double A = (m + 2.0) * n / 2.0 - 1.0;
            double B = (m + 2.0) * (1.0 - n / 2.0) - 3.0;
            double v = A * r.w1_root * r.w1_root + B * r.w1_root - (m + 2.0);
            CHECK(fabs(v) < 1e-12);
        }
}

TEST_CASE("admissible gamma interval") {
    auto g9 = gamma_admissible(9.0);
    CHECK(g9.hi == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(g9.nonempty);
    CHECK(g9.global_gate);
    auto g5 = gamma_admissible(5.0);
    CHECK(g5.hi == doctest::Approx(1.0 / 36.0).epsilon(1e-12));
    CHECK(g5.nonempty);       // the interval itself opens at p > 4
    CHECK(!g5.global_gate);   // but the existence gate is strictly p > 5
    auto g4 = gamma_admissible(4.0);
    CHECK(!g4.nonempty);
    auto ginf = gamma_admissible(1e9);
    CHECK(ginf.hi == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
    CHECK_THROWS_AS(gamma_admissible(0.5), std::domain_error);
}

TEST_CASE("alpha-beta pairs") {
    // p = 5, q = 6: alpha = -1/36, beta = 5/36 < 1/6
    auto ab = alphabeta_solve(6.0);
    CHECK(ab.alpha == doctest::Approx(-1.0 / 36.0).epsilon(1e-14));
    CHECK(ab.beta == doctest::Approx(5.0 / 36.0).epsilon(1e-14));
    CHECK(ab.beta < 1.0 / 6.0);
    CHECK(!ab.boundary);
    // boundary q = 10 (p = 9): the degenerate admitted pair alpha = beta = 0
    auto b = alphabeta_solve(10.0);
    CHECK(b.alpha == 0.0);
    CHECK(b.beta == 0.0);
    CHECK(b.boundary);
    // the scaling identity is exact across the admissible range
    for (double p : {4.5, 5.0, 6.0, 7.0, 8.5, 9.0}) {
        double q = p + 1.0;
        auto x = alphabeta_solve(q);
        CHECK(fabs(x.alpha + 1.0 / 6.0 + x.beta - 5.0 / (3.0 * q)) < 1e-15);
        CHECK(x.beta < 1.0 / q + 1e-15);
        CHECK(x.alpha + x.beta >= -1e-15);  // q <= 10
        CHECK(x.alpha > -1.0 / (p * (p + 1.0)) - 1e-15);
    }
    // no admissible pair at or below p1, nor beyond 9
    double p1 = 0.5 * (3.0 + std::sqrt(33.0));
    CHECK_THROWS_AS(alphabeta_solve(p1 + 1.0), std::domain_error);
    CHECK_THROWS_AS(alphabeta_solve(4.0), std::domain_error);
    CHECK_THROWS_AS(alphabeta_solve(11.0), std::domain_error);
}

TEST_CASE("weighted norm reduces to the plain norm at gamma = 0") {
    auto g = Grid1D::make(12.0, 128);
    TrajectoryRecord rec;
    rec.grid = g;
    rec.M = 2.0;
    for (double t : {0.5, 0.75, 1.0, 1.25, 1.5}) {
        Snapshot s;
        s.t = t;
        s.u.resize(g.npoints);
        for (int j = 0; j < g.npoints; ++j) s.u[j] = (1.0 + t) * bump(g.x(j), 0.0, 2.0);
        rec.snapshots.push_back(std::move(s));
    }
    auto w = WeightSpec::make(0.0, 3.0, 2.0);
    double norm = weighted_norm(rec, w, 0.5, 1.5);
    // direct trapezoid of int |u|^3 dx dt
    std::vector<double> ms;
    for (const auto& s : rec.snapshots) {
        double m = 0.0;
        for (double v : s.u) m += std::pow(fabs(v), 3.0);
        ms.push_back(m * g.dx());
    }
    double I = 0.0;
    for (size_t i = 1; i < ms.size(); ++i) I += 0.5 * (ms[i] + ms[i - 1]) * 0.25;
    CHECK(fabs(norm - std::pow(I, 1.0 / 3.0)) < 1e-10);
    // zero field
    for (auto& s : rec.snapshots) std::fill(s.u.begin(), s.u.end(), 0.0);
    CHECK(weighted_norm(rec, w, 0.5, 1.5) == 0.0);
    // monotone under window extension
    for (auto& s : rec.snapshots)
        for (int j = 0; j < g.npoints; ++j) s.u[j] = bump(g.x(j), 0.0, 2.0);
    CHECK(weighted_norm(rec, w, 0.5, 1.0) <= weighted_norm(rec, w, 0.5, 1.5) + 1e-15);
    // cadence validation
    CHECK_THROWS_AS(weighted_norm(rec, w, 0.5, 1.5, 0.1), std::invalid_argument);
}

TEST_CASE("weighted norm flags genuine mass outside the cone") {
    auto g = Grid1D::make(12.0, 128);
    TrajectoryRecord rec;
    rec.grid = g;
    rec.M = 2.0;
    for (double t : {0.1, 0.2, 0.3}) {
        Snapshot s;
        s.t = t;
        s.u.assign(g.npoints, 1.0);  // constant field sticks far outside the cone
        rec.snapshots.push_back(std::move(s));
    }
    auto w = WeightSpec::make(0.05, 3.0, 2.0);
    CHECK_THROWS_AS(weighted_norm(rec, w, 0.0, 0.4), cone_error);
}

TEST_CASE("weighted norm of a free field is stable under grid refinement") {
    const double gamma = 0.5 * (1.0 / 6.0 - 5.0 / 48.0);  // half the admissible bound at p=7
    auto norm_at = [&](int n) {
        auto g = Grid1D::make(26.0, n);
        auto d = InitialData::make(
            g, [](double x) { return bump(x, 0.0, 3.0); }, [](double) { return 0.0; }, 3.0,
            1.0);
        TrajectoryRecord rec;
        rec.grid = g;
        rec.M = 3.0;
        for (double t = 0.5; t <= 6.01; t += 0.25) {
            auto st = evolve_homogeneous_exact(d, t, g);
            Snapshot s;
            s.t = t;
            s.u = std::move(st.u);
            rec.snapshots.push_back(std::move(s));
        }
        return weighted_norm(rec, WeightSpec::make(gamma, 8.0, 3.0), 0.5, 6.0);
    };
    double n1 = norm_at(512), n2 = norm_at(1024);
    CHECK(std::isfinite(n1));
    CHECK(n1 > 0.0);
    CHECK(fabs(n1 - n2) / n2 < 0.02);
}

TEST_CASE("fractional integral: trivial cases") {
    std::vector<double> grid;
    for (double u = 0.25; u <= 10.0; u += 0.25) grid.push_back(u);
    auto zero = SampledFn::tabulate([](double) { return 0.0; }, 0.0, 20.0, 41);
    for (double v : glassey_apply(zero, 0.1, 0.1, 0.1, grid)) CHECK(v == 0.0);
    auto one = SampledFn::tabulate([](double) { return 1.0; }, 0.0, 20.0, 41);
    auto f = glassey_apply(one, 0.0, 0.0, 0.0, grid);
    for (size_t i = 0; i < grid.size(); ++i) CHECK(fabs(f[i] - grid[i]) < 1e-12 * grid[i]);
    CHECK_THROWS_AS(glassey_apply(one, 0.0, 1.2, 0.1, grid), std::domain_error);
    CHECK_THROWS_AS(glassey_apply(one, 0.0, 0.1, 1.0, grid), std::domain_error);
    CHECK_THROWS_AS(glassey_apply(one, -0.3, 0.1, 0.1, grid), std::domain_error);
}

TEST_CASE("fractional integral against brute-force Riemann sums") {
    // indicator-like profile on [1, 2] and the exponents used at p = 7
    SampledFn g;
    g.x = {0.999999, 1.0, 2.0, 2.000001};
    g.y = {0.0, 1.0, 1.0, 0.0};
    const double q = 8.0;
    auto ab = alphabeta_solve(q);
    const double alpha = ab.alpha, beta = ab.beta, delta = 1.0 / (3.0 * q) + 1.0 / 6.0;
    std::vector<double> grid = {0.5, 1.5, 2.5, 4.0, 7.0, 10.0};
    auto f = glassey_apply(g, alpha, beta, delta, grid);
    for (size_t i = 0; i < grid.size(); ++i) {
        double u = grid[i];
        const int N = 1000000;
        double acc = 0.0;
        for (int k = 0; k < N; ++k) {
            double xi = u * (k + 0.5) / N;
            double gv = g(xi);
            if (gv == 0.0) continue;
            acc += gv * std::pow(u - xi, -delta) * std::pow(xi, -beta);
        }
        acc *= u / N * std::pow(u, -alpha);
        CHECK(std::isfinite(f[i]));
        CHECK(fabs(f[i] - acc) < 1e-4 * (1.0 + fabs(acc)));
    }
}

TEST_CASE("glassey conditions and ratio scan") {
    const double p1 = 0.5 * (3.0 + std::sqrt(33.0));
    for (double p : {4.5, 5.0, 7.0, 8.9}) {
        REQUIRE(p > p1);
        double q = p + 1.0;
        auto ab = alphabeta_solve(q);
        double delta = 1.0 / (3.0 * q) + 1.0 / 6.0;
        double r = q / (q - 1.0);
        CHECK(glassey_conditions_violation(ab.alpha, ab.beta, delta, q, r).empty());
    }
    // violated scaling identity is reported, not thrown
    CHECK(!glassey_conditions_violation(0.0, 0.0, 0.9, 8.0, 8.0 / 7.0).empty());
    CHECK(!glassey_conditions_violation(0.1, 0.1, 0.1, 1.5, 2.0).empty());

    const double q = 8.0;
    auto ab = alphabeta_solve(q);
    double delta = 1.0 / (3.0 * q) + 1.0 / 6.0;
    double r = q / (q - 1.0);
    std::vector<std::pair<std::string, SampledFn>> family;
    family.emplace_back("bump_12", SampledFn::tabulate(
                                       [](double x) { return bump(x, 2.0, 1.0); }, 0.5, 3.5, 200));
    family.emplace_back("bump_wide", SampledFn::tabulate(
                                         [](double x) { return bump(x, 3.0, 2.0); }, 0.5, 5.5, 200));
    std::vector<double> grid;
    for (double u = 1e-3; u < 60.0; u *= 1.15) grid.push_back(u);
    auto scan = glassey_ratio_scan(family, ab.alpha, ab.beta, delta, q, r, grid);
    REQUIRE(scan.ok());
    REQUIRE(scan.cases.size() == 6);
    for (const auto& c : scan.cases) {
        CHECK(std::isfinite(c.ratio));
        CHECK(c.ratio > 0.0);
    }
    // dilate stability within a factor of 2 per family member
    for (size_t base = 0; base < scan.cases.size(); base += 3) {
        double lo = 1e300, hi = 0.0;
        for (size_t k = 0; k < 3; ++k) {
            lo = std::min(lo, scan.cases[base + k].ratio);
            hi = std::max(hi, scan.cases[base + k].ratio);
        }
        CHECK(hi / lo < 2.0);
    }
    // condition violation path returns empty cases
    auto bad = glassey_ratio_scan(family, 0.0, 0.0, 0.9, q, 8.0 / 7.0, grid);
    CHECK(!bad.ok());
    CHECK(bad.cases.empty());
}

namespace {

SourceTerm cone_bump(double s_center, double x_center) {
    SourceTerm F;
    const double sr = 0.35, xr = 0.4;
    F.f = [=](double s, double y) { return bump(s, s_center, sr) * bump(y, x_center, xr); };
    F.cone_interior = true;
    F.s_min = s_center - sr;
    F.s_max = s_center + sr;
    F.x_min = x_center - xr;
    F.x_max = x_center + xr;
    return F;
}

} // namespace

TEST_CASE("inhomogeneous weighted inequality sampling") {
    auto g = Grid1D::make(16.0, 128);
    auto ab = alphabeta_solve(8.0);
    DuhamelOptions opts;
    opts.adaptive = false;
    opts.s_panels = 4;
    opts.y_panels = 4;
    opts.gl_order = 12;

    std::vector<SourceTerm> corpus;
    corpus.push_back(cone_bump(2.4, 0.0));
    corpus.push_back(cone_bump(2.4, 0.3));
    corpus.push_back(cone_bump(2.8, -0.4));
    corpus.push_back(cone_bump(3.2, 0.5));
    corpus.push_back(cone_bump(3.0, 0.0));
    // verify the cone-interior support condition |x| <= phi(s) - 1 on supp F
    for (const auto& F : corpus)
        CHECK(std::max(fabs(F.x_min), fabs(F.x_max)) <=
              characteristic_radius(F.s_min) - 1.0);

    auto scan = inhomogeneous_inequality_sample(corpus, ab, 2.0, 1.0, 5.0, g, 10, opts);
    REQUIRE(scan.cases.size() == 5);
    for (const auto& c : scan.cases) {
        CHECK(!c.skipped);
        CHECK(std::isfinite(c.ratio));
        CHECK(c.ratio > 0.0);
    }
    CHECK(scan.max_ratio < 10.0 * scan.min_ratio);

    // amplitude invariance: both sides are homogeneous of degree one
    auto doubled = corpus[0];
    auto base_f = corpus[0].f;
    doubled.f = [base_f](double s, double y) { return 2.0 * base_f(s, y); };
    auto one = inhomogeneous_inequality_sample({corpus[0]}, ab, 2.0, 1.0, 5.0, g, 10, opts);
    auto two = inhomogeneous_inequality_sample({doubled}, ab, 2.0, 1.0, 5.0, g, 10, opts);
    CHECK(fabs(one.cases[0].ratio - two.cases[0].ratio) < 1e-9 * one.cases[0].ratio);

    // zero source is skipped with a note, not an error
    SourceTerm zero;
    zero.f = [](double, double) { return 0.0; };
    zero.s_min = 2.0;
    zero.s_max = 3.0;
    zero.x_min = -0.5;
    zero.x_max = 0.5;
    auto z = inhomogeneous_inequality_sample({zero}, ab, 2.0, 1.0, 5.0, g, 10, opts);
    CHECK(z.cases[0].skipped);
}

TEST_CASE("weighted source norm at gamma 0 matches a direct panel sum") {
    auto F = cone_bump(2.4, 0.2);
    auto w = WeightSpec::make(0.0, 2.0, 2.0);
    double norm = weighted_source_norm(F, w, 1.0, 5.0);
    double ref = std::sqrt(integrate_composite(
        [&](double s) {
            return integrate_composite([&](double y) { return F(s, y) * F(s, y); }, F.x_min,
                                       F.x_max, 16, 8);
        },
        F.s_min, F.s_max, 16, 8));
    CHECK(fabs(norm - ref) < 1e-8 * ref);
}
