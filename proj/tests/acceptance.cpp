// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures.  Each scenario is pinned here, including every tolerance.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rou/cli.hpp"
#include "rou/gaussian.hpp"
#include "rou/rou.hpp"

using namespace rou;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void check_report(const CheckReport& r, const std::string& name) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s lhs=%.6g rhs=%.6g se=%.3g z=%.3g",
                  r.name.c_str(), r.lhs, r.rhs, r.std_error, r.z_score);
    check(r.pass, name, buf);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

ExtraDrift constant_drift(Point v) {
    ExtraDrift e;
    e.sup_bound = norm(v);
    e.eval = [v = std::move(v)](const Point&, Point& out) { out = v; };
    return e;
}

// bounded monotone-perturbed drift: B(x) = -x/2 + 0.8 tanh(x_1) e_2,
// monotonicity constant 0.9 <= 1, bounded on the unit disk
ExtraDrift monotone_drift(int d) {
    ExtraDrift e;
    e.sup_bound = 0.5 + 0.8 + 0.05;
    e.eval = [d](const Point& x, Point& out) {
        out.resize(d);
        for (int j = 0; j < d; ++j) out[j] = -0.5 * x[j];
        out[d > 1 ? 1 : 0] += 0.8 * std::tanh(x[0]);
    };
    return e;
}

std::vector<double> sigma_semiaxes(const SpectralSpace& s, double k) {
    std::vector<double> r(s.dim());
    for (int j = 0; j < s.dim(); ++j) r[j] = k * s.covariance_sqrt(j);
    return r;
}

// --------------------------------------------------------------------------
// criterion 1 (and the d = 16 part of criterion 9): integration-by-parts
// --------------------------------------------------------------------------

void ibp_trio(const std::string& tag, const SpectralSpace& space,
              std::shared_ptr<ConvexBody> body, const ObliqueField& field,
              std::shared_ptr<SkewLayering> layering, const MonteCarloSizes& sizes,
              std::uint64_t seed) {
    const int d = space.dim();
    Point e1(d, 0.0);
    e1[0] = 1.0;
    check_report(ibp_normal(space, *body, e1, tf_coordinate(d, 0), sizes, seed),
                 "criterion 1 ibp_normal " + tag);
    check_report(ibp_oblique(space, *body, field, e1,
                             tf_coordinate(d, d > 1 ? 1 : 0), sizes, seed + 1),
                 "criterion 1 ibp_oblique " + tag);
    check_report(ibp_skew(space, *layering, e1, tf_coordinate(d, 0), sizes, seed + 2),
                 "criterion 1 ibp_skew " + tag);
}

void criterion_1_and_9_ibp() {
    {  // d = 1: half line, alpha = 1, with the exact 0.28209 cancellation
        auto space = SpectralSpace::make({1.0}, {1.0});
        auto half = std::make_shared<HalfspaceBody>(Point{1.0}, 0.0);
        MonteCarloSizes sizes;
        sizes.n_volume = 1000000;
        sizes.n_surface_hits = 100000;
        sizes.shell_eps = 5e-3;
        auto rep = ibp_normal(space, *half, {1.0}, tf_constant(1), sizes, 101);
        check(rep.pass && std::abs(rep.lhs) < 1e-12,
              "criterion 1 ibp_normal d=1 halfline",
              fmt("volume+surface=%.3g (each side 0.28209), se=%.3g", rep.rhs,
                  rep.std_error));
        auto zero = ObliqueField::zero(1);
        check_report(ibp_oblique(space, *half, zero, {1.0}, tf_constant(1), sizes, 102),
                     "criterion 1 ibp_oblique d=1");
        std::vector<std::shared_ptr<const ConvexBody>> bodies{half};
        auto lay = make_layering(space, bodies, {3.0 / 7.0}, 1.0);
        check_report(ibp_skew(space, *lay, {1.0}, tf_coordinate(1, 0), sizes, 103),
                     "criterion 1 ibp_skew d=1");
    }
    {  // d = 2
        auto space = SpectralSpace::make({1.0, 2.0}, {1.0, 1.0});
        auto body = std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 0.8});
        auto field = ObliqueField::constant(2, {1.0});
        std::vector<std::shared_ptr<const ConvexBody>> bodies{
            body, std::make_shared<EllipsoidBody>(std::vector<double>{1.6, 1.3})};
        auto lay = make_layering(space, bodies, {1.0, 2.0}, 2.0);
        MonteCarloSizes sizes;
        sizes.n_volume = 1000000;
        sizes.n_surface_hits = 20000;
        ibp_trio("d=2", space, body, field, lay, sizes, 110);
    }
    {  // d = 8
        std::vector<double> eig(8), w(8, 1.0);
        for (int j = 0; j < 8; ++j) eig[j] = 0.5 * (j + 1);
        auto space = SpectralSpace::make(eig, w);
        auto body = std::make_shared<EllipsoidBody>(sigma_semiaxes(space, 3.0));
        std::vector<double> upper(28, 0.0);
        upper[0] = 1.0;   // a_12
        upper[14] = 0.5;  // a_34
        auto field = ObliqueField::constant(8, upper);
        std::vector<std::shared_ptr<const ConvexBody>> bodies{
            body, std::make_shared<EllipsoidBody>(sigma_semiaxes(space, 4.0))};
        auto lay = make_layering(space, bodies, {1.0, 2.0}, 2.0);
        MonteCarloSizes sizes;
        sizes.n_volume = 1000000;
        sizes.n_surface_hits = 20000;
        ibp_trio("d=8", space, body, field, lay, sizes, 120);
    }
    {  // criterion 9: dirichlet truncation at d = 16 with an ellipsoid body
        auto space = SpectralSpace::dirichlet(16, 0.5);
        auto body = std::make_shared<EllipsoidBody>(sigma_semiaxes(space, 4.0));
        std::vector<double> upper(120, 0.0);
        upper[0] = 1.0;
        auto field = ObliqueField::constant(16, upper);
        std::vector<std::shared_ptr<const ConvexBody>> bodies{
            body, std::make_shared<EllipsoidBody>(sigma_semiaxes(space, 5.0))};
        auto lay = make_layering(space, bodies, {1.0, 2.0}, 2.0);
        MonteCarloSizes sizes;
        sizes.n_volume = 1000000;
        sizes.n_surface_hits = 20000;
        ibp_trio("d=16 dirichlet", space, body, field, lay, sizes, 130);
    }
}

// --------------------------------------------------------------------------
// criterion 2 (and the d = 16 part of criterion 9): quadratic variation
// --------------------------------------------------------------------------

void qv_suite(const std::string& tag, const SpectralSpace& space,
              std::shared_ptr<ConvexBody> body, std::uint64_t seed) {
    const int d = space.dim();
    SimulationSpec base;
    base.space = &space;
    base.mode = Mode::normal;
    base.body = body;
    base.config.dt = 1e-3;
    base.config.t_end = 10.0;
    PathCheckOptions opts;
    opts.n_paths = 1000;
    opts.config = base.config;
    opts.seed = seed;
    std::vector<std::pair<std::string, Point>> ls;
    Point e1(d, 0.0), l2(d, 0.0), l3(d, 0.0);
    e1[0] = 1.0;
    l2[0] = 2.0;
    l3[0] = l3[1] = 1.0 / std::numbers::sqrt2;
    ls.emplace_back("e1", e1);
    ls.emplace_back("2e1", l2);
    ls.emplace_back("diag", l3);
    for (const auto& r : qv_check(space, base, ls, opts))
        check_report(r, "criterion 2 " + tag);
}

void criterion_2_and_9_qv() {
    auto space2 = SpectralSpace::make({1.0, 2.0}, {1.0, 1.0});
    qv_suite("d=2", space2,
             std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 0.8}), 201);
    auto space16 = SpectralSpace::dirichlet(16, 0.5);
    qv_suite("d=16 dirichlet", space16,
             std::make_shared<EllipsoidBody>(sigma_semiaxes(space16, 4.0)), 209);
}

// --------------------------------------------------------------------------
// criterion 3: Revuz local-time rate on [-1, 1], alpha = 1/2
// --------------------------------------------------------------------------

void criterion_3_revuz() {
    auto space = SpectralSpace::make({0.5}, {1.0});
    PathCheckOptions opts;
    opts.n_paths = 200;
    opts.config.dt = 1e-4;
    opts.config.t_end = 200.0;
    opts.seed = 301;
    opts.n_surface_hits = 40000;
    auto res = revuz_rate(space,
                          std::make_shared<EllipsoidBody>(std::vector<double>{1.0}),
                          opts);
    const double target =
        2.0 * gauss::pdf(1.0, 1.0) / gauss::interval_mass(-1.0, 1.0, 1.0);
    check(std::abs(res.rate - target) <= 0.05 * target,
          "criterion 3 revuz rate",
          fmt("E[L_t]/t=%.5f target=%.5f (5%% band)", res.rate, target));
    for (const auto& r : res.reports) check_report(r, "criterion 3");
}

// --------------------------------------------------------------------------
// criterion 4: stationary law of the p-skew process, p = 0.7
// --------------------------------------------------------------------------

void criterion_4_skew() {
    auto space = SpectralSpace::make({1.0}, {1.0});
    std::vector<std::shared_ptr<const ConvexBody>> bodies{
        std::make_shared<HalfspaceBody>(Point{1.0}, 0.0)};
    auto lay = make_layering(space, bodies, {3.0 / 7.0}, 1.0);
    SimulationSpec spec;
    spec.space = &space;
    spec.mode = Mode::skew;
    spec.layering = lay;
    spec.config.dt = 1e-4;
    spec.config.t_end = 100.0;
    spec.seed = 401;
    const long n_paths = 200;  // total simulated time 2e4

    const double h = 0.05;
    struct Out {
        double neg, total, below, above;
        long crossings;
    };
    auto outs = run_indexed(n_paths, 0, [&](long i) {
        SimulationSpec s = spec;
        s.path_index = static_cast<std::uint64_t>(i);
        struct Obs {
            double h;
            double neg = 0, total = 0, below = 0, above = 0;
            long crossings = 0;
            void on_start(const Point&) {}
            void on_step(const StepInfo& info) {
                const double x = (*info.x_new)[0];
                total += 1;
                if (x < 0) neg += 1;
                if (x > -h && x < 0) below += 1;
                if (x > 0 && x < h) above += 1;
                crossings += static_cast<long>(info.membrane_events->size());
            }
            void on_finish(const GirsanovWeight&, bool) {}
        } obs{h};
        run_path(s, obs);
        return Out{obs.neg, obs.total, obs.below, obs.above, obs.crossings};
    });
    double neg = 0, total = 0, below = 0, above = 0;
    long crossings = 0;
    for (const auto& o : outs) {
        neg += o.neg;
        total += o.total;
        below += o.below;
        above += o.above;
        crossings += o.crossings;
    }
    const double p_neg = neg / total;
    check(std::abs(p_neg - 0.3) <= 0.01, "criterion 4 skew mass",
          fmt("P(X<0)=%.4f target 0.3 (+-0.01), crossings=%.3g", p_neg,
              double(crossings)));
    const double ratio = below / above;
    check(std::abs(ratio - 3.0 / 7.0) <= 0.1 * (3.0 / 7.0),
          "criterion 4 occupation ratio",
          fmt("near-membrane ratio=%.4f target %.4f (10%% band)", ratio, 3.0 / 7.0));
}

// --------------------------------------------------------------------------
// criterion 5: oblique invariance on the disk and the pi/4 reflection angle
// --------------------------------------------------------------------------

void criterion_5_oblique() {
    auto space = SpectralSpace::make({1.0, 1.0}, {1.0, 1.0});
    auto body = std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 1.0});
    auto field = ObliqueField::constant(2, {1.0});

    double worst = 0.0;
    for (double th : {0.0, 0.7, 1.9, 3.4, 5.1}) {
        Point x{std::cos(th), std::sin(th)};
        worst = std::max(worst, std::abs(reflection_angle(field, *body, space, x) -
                                         std::numbers::pi / 4));
    }
    check(worst <= 1e-10, "criterion 5 reflection angle",
          fmt("max |theta - pi/4| = %.3g (tol 1e-10)", worst));

    SimulationSpec oblique;
    oblique.space = &space;
    oblique.mode = Mode::oblique;
    oblique.body = body;
    oblique.field = &field;
    oblique.config.dt = 1e-3;
    oblique.config.t_end = 40.0;
    SimulationSpec normal = oblique;
    normal.mode = Mode::normal;
    normal.field = nullptr;
    PathCheckOptions opts;
    opts.n_paths = 240;
    opts.config = oblique.config;
    opts.seed = 501;
    opts.burn_in = 10.0;
    std::vector<Moment> moments;
    moments.push_back({"mean_x1", [](const Point& x) { return x[0]; }});
    moments.push_back({"mean_x2", [](const Point& x) { return x[1]; }});
    moments.push_back({"second_x1", [](const Point& x) { return x[0] * x[0]; }});
    moments.push_back({"second_x2", [](const Point& x) { return x[1] * x[1]; }});
    for (const auto& r :
         stationary_two_runs(oblique, normal, moments, opts, "obl_vs_norm_"))
        check_report(r, "criterion 5");
}

// --------------------------------------------------------------------------
// criterion 6: Girsanov reweighting, |B| = 0.5, T = 1, 1e4 paths
// --------------------------------------------------------------------------

void criterion_6_girsanov() {
    auto space = SpectralSpace::make({1.0, 1.0}, {1.0, 1.0});
    SimulationSpec proto;
    proto.mode = Mode::normal;
    proto.body = std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 1.0});
    PathCheckOptions opts;
    opts.n_paths = 10000;
    opts.config.dt = 1e-3;
    opts.config.t_end = 1.0;
    opts.seed = 601;
    auto res = girsanov_checks(space, proto, constant_drift({0.5, 0.0}), opts, 100.0);
    for (const auto& r : res.reports) check_report(r, "criterion 6");
    check(res.effective_sample_size > 1000.0, "criterion 6 effective sample size",
          fmt("ess=%.0f of 10000", res.effective_sample_size));
}

// --------------------------------------------------------------------------
// criterion 7: pathwise contraction for coupled solutions
// --------------------------------------------------------------------------

void criterion_7_contraction() {
    auto space = SpectralSpace::make({1.0, 1.0}, {1.0, 1.0});
    auto body = std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 1.0});
    PathCheckOptions opts;
    opts.config.dt = 1e-3;
    opts.config.t_end = 1.0;
    opts.seed = 701;
    check_report(contraction_check(space, body, ExtraDrift{}, 0.0, 1000, opts),
                 "criterion 7 (B = 0, alpha = 0)");
    check_report(contraction_check(space, body, monotone_drift(2), 1.0, 1000, opts),
                 "criterion 7 (monotone B, alpha = 1)");
}

// --------------------------------------------------------------------------
// criterion 8: determinism and worker-count independence of the CLI
// --------------------------------------------------------------------------

std::string file_body(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream body;
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') body << line << "\n";
    return body.str();
}

void criterion_8_determinism() {
    auto dir = fs::temp_directory_path() / "rou_acceptance";
    fs::create_directories(dir);
    auto cfg = dir / "cfg.json";
    {
        std::ofstream out(cfg);
        out << R"({
  "space": {"preset": "custom", "eigenvalues": [1.0, 2.0], "h1_weights": [1.0, 1.0]},
  "mode": "skew",
  "body": {"kind": "ellipsoid", "semiaxes": [1.0, 0.8]},
  "layering": {"bodies": [{"kind": "ellipsoid", "semiaxes": [1.0, 0.8]}],
               "gammas": [0.42857142857], "gamma_bar": 1.0},
  "step": {"dt": 1e-3, "t_end": 5.0, "record_stride": 20},
  "n_paths": 6, "seed": 888,
  "verify": {"n_volume": 50000, "n_surface_hits": 5000, "n_paths": 60,
             "t_end": 5.0, "burn_in": 1.0, "n_measure_samples": 50000}
})";
    }
    auto t1 = dir / "t1.csv", t2 = dir / "t2.csv";
    auto v1 = dir / "v1.csv", v2 = dir / "v2.csv";
    int rc = 0;
    rc |= cli::run({"simulate", "-c", cfg.string(), "--out", t1.string()});
    rc |= cli::run({"simulate", "-c", cfg.string(), "--out", t2.string()});
    check(rc == 0 && !file_body(t1).empty() && file_body(t1) == file_body(t2),
          "criterion 8 simulate rerun", "byte-identical trajectory dumps");
    int rv1 = cli::run({"verify", "qv", "-c", cfg.string(), "--workers", "1",
                        "--out", v1.string()});
    int rv2 = cli::run({"verify", "qv", "-c", cfg.string(), "--workers", "4",
                        "--out", v2.string()});
    check(rv1 == 0 && rv2 == 0 && !file_body(v1).empty() &&
              file_body(v1) == file_body(v2),
          "criterion 8 worker independence", "1 vs 4 workers, identical CSV body");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1_and_9_ibp();
    criterion_2_and_9_qv();
    criterion_3_revuz();
    criterion_4_skew();
    criterion_5_oblique();
    criterion_6_girsanov();
    criterion_7_contraction();
    criterion_8_determinism();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d check(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
