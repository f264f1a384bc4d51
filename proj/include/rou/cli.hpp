#pragma once

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rou/config.hpp"
#include "rou/dynamics.hpp"
#include "rou/parallel.hpp"
#include "rou/verify.hpp"

namespace rou::cli {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Trajectory table: one row per recorded step (time, coordinates,
/// per-boundary local-time increments of the window ending at that time).
inline void write_trajectory(std::ostream& os, const PathSample& path, int dim) {
    os << "time";
    for (int j = 0; j < dim; ++j) os << ",x" << (j + 1);
    for (const auto& [id, _] : path.local_time) os << ",dL_" << id;
    os << "\n";
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        os << format_double(path.times[i]);
        for (int j = 0; j < dim; ++j) os << "," << format_double(path.states[i][j]);
        for (const auto& [id, series] : path.local_time)
            os << "," << format_double(i == 0 ? 0.0 : series[i - 1]);
        os << "\n";
    }
    for (const auto& [id, n] : path.crossings)
        os << "# crossings membrane_" << id << "=" << n << "\n";
    if (path.multi_membrane_steps > 0)
        os << "# multi_membrane_steps=" << path.multi_membrane_steps << "\n";
}

struct OutStream {
    explicit OutStream(const std::string& file) {
        if (!file.empty()) {
            owned = std::make_unique<std::ofstream>(file);
            if (!*owned) throw ConfigError("cannot open output file: " + file);
        }
    }
    std::ostream& get() { return owned ? *owned : std::cout; }
    std::unique_ptr<std::ofstream> owned;
};

inline int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_override) {
    cfg.validate();
    const SpectralSpace space = cfg.build_space();
    SimulationSpec proto = cfg.build_simulation(space);
    auto paths = run_indexed(cfg.n_paths, cfg.workers, [&](long i) {
        SimulationSpec s = proto;
        s.path_index = static_cast<std::uint64_t>(i);
        return simulate(s);
    });
    std::map<int, long> crossings;
    long multi = 0;
    for (const auto& p : paths) {
        for (const auto& [id, n] : p.crossings) crossings[id] += n;
        multi += p.multi_membrane_steps;
    }
    const std::string file =
        !out_override.empty() ? out_override : cfg.output.trajectory;
    OutStream out(file);
    write_trajectory(out.get(), paths.front(), space.dim());
    if (cfg.n_paths > 1) {
        for (const auto& [id, n] : crossings)
            out.get() << "# total_crossings membrane_" << id << "=" << n << "\n";
    }
    std::cerr << "simulate: " << cfg.n_paths << " path(s), "
              << proto.config.n_steps() << " steps each\n";
    for (const auto& [id, n] : crossings)
        std::cerr << "simulate: membrane " << id << " crossed " << n << " times\n";
    if (multi > 0)
        std::cerr << "simulate: warning: " << multi
                  << " steps crossed >= 2 membranes (dt large for the spacing)\n";
    return 0;
}

inline PathCheckOptions path_options(const ExperimentConfig& cfg,
                                     const SpectralSpace& space) {
    PathCheckOptions o;
    o.n_paths = cfg.verify.n_paths;
    o.config = cfg.build_step(space);
    o.config.t_end = cfg.verify.t_end;
    o.config.record_stride = 1;
    o.seed = cfg.seed;
    o.workers = cfg.workers;
    o.n_surface_hits = cfg.verify.n_surface_hits;
    o.shell_eps = cfg.verify.shell_eps;
    o.n_measure_samples = cfg.verify.n_measure_samples;
    o.burn_in = cfg.verify.burn_in;
    return o;
}

inline std::vector<CheckReport> verify_set(const ExperimentConfig& cfg,
                                           const std::string& set,
                                           std::vector<std::string>& comments) {
    cfg.validate();
    const SpectralSpace space = cfg.build_space();
    const int d = space.dim();
    std::vector<CheckReport> reports;

    MonteCarloSizes sizes;
    sizes.n_volume = cfg.verify.n_volume;
    sizes.n_surface_hits = cfg.verify.n_surface_hits;
    sizes.shell_eps = cfg.verify.shell_eps;

    Point e1(d, 0.0);
    e1[0] = 1.0;

    const bool all = set == "all";

    if (all || set == "ibp") {
        auto body = cfg.build_body(space);
        reports.push_back(
            ibp_normal(space, *body, e1, tf_coordinate(d, 0), sizes, cfg.seed));
        ObliqueField field = cfg.build_field(space);
        if (field.is_zero() && d >= 2 && body->bounded()) {
            // exercise the oblique identity even when the config leaves the
            // dispersion field empty
            std::vector<double> upper(static_cast<std::size_t>(d) * (d - 1) / 2, 0.0);
            upper[0] = 1.0;
            field = ObliqueField::constant(d, upper);
        }
        if (field.is_zero() || body->bounded()) {
            reports.push_back(ibp_oblique(space, *body, field, e1,
                                          tf_coordinate(d, d > 1 ? 1 : 0), sizes,
                                          cfg.seed));
        }
        auto layering = cfg.build_layering(space);
        reports.push_back(
            ibp_skew(space, *layering, e1, tf_coordinate(d, 0), sizes, cfg.seed));
    }
    if (all || set == "revuz") {
        PathCheckOptions opts = path_options(cfg, space);
        if (cfg.build_mode() == Mode::skew) {
            auto layering = cfg.build_layering(space);
            auto res = revuz_rate_skew(space, layering, 0, opts);
            reports.insert(reports.end(), res.reports.begin(), res.reports.end());
        } else {
            auto res = revuz_rate(space, cfg.build_body(space), opts);
            reports.insert(reports.end(), res.reports.begin(), res.reports.end());
        }
    }
    if (all || set == "qv") {
        PathCheckOptions opts = path_options(cfg, space);
        SimulationSpec base;
        base.space = &space;
        base.mode = Mode::normal;
        base.body = cfg.build_body(space);
        base.config = opts.config;
        std::vector<std::pair<std::string, Point>> ls;
        ls.emplace_back("e1", e1);
        Point l2 = e1;
        l2[0] = 2.0;
        ls.emplace_back("2e1", l2);
        if (d >= 2) {
            Point l3(d, 0.0);
            l3[0] = l3[1] = 1.0 / std::numbers::sqrt2;
            ls.emplace_back("diag", l3);
        }
        auto r = qv_check(space, base, ls, opts);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (all || set == "stationary") {
        PathCheckOptions opts = path_options(cfg, space);
        SimulationSpec base = cfg.build_simulation(space);
        base.config = opts.config;
        std::vector<Moment> moments;
        moments.push_back({"mean_x1", [](const Point& x) { return x[0]; }});
        moments.push_back({"second_x1", [](const Point& x) { return x[0] * x[0]; }});
        moments.push_back({"norm_sq", [](const Point& x) { return norm_sq(x); }});
        auto r = stationary_check(base, moments, opts);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (all || set == "girsanov") {
        PathCheckOptions opts = path_options(cfg, space);
        opts.config.t_end = std::min(opts.config.t_end, 2.0);  // short horizon
        SimulationSpec proto;
        proto.space = &space;
        proto.mode = cfg.build_mode() == Mode::oblique ? Mode::oblique : Mode::normal;
        proto.body = cfg.build_body(space);
        ObliqueField field = cfg.build_field(space);
        if (proto.mode == Mode::oblique) proto.field = &field;
        ExtraDrift b = cfg.build_drift(space);
        if (b.none()) {
            Point v(d, 0.0);
            v[0] = 0.5;
            b.eval = [v](const Point&, Point& out) { out = v; };
            b.sup_bound = 0.5;
        }
        auto res = girsanov_checks(space, proto, b, opts, cfg.verify.ess_floor);
        comments.push_back("girsanov_ess=" +
                           format_double(res.effective_sample_size));
        if (res.effective_sample_size < cfg.verify.ess_floor)
            std::cerr << "verify: warning: effective sample size "
                      << res.effective_sample_size << " below floor "
                      << cfg.verify.ess_floor << "\n";
        reports.insert(reports.end(), res.reports.begin(), res.reports.end());
    }
    if (all || set == "contraction") {
        PathCheckOptions opts = path_options(cfg, space);
        opts.config.t_end = std::min(opts.config.t_end, 2.0);
        auto body = cfg.build_body(space);
        reports.push_back(
            contraction_check(space, body, ExtraDrift{}, 0.0, 200, opts));
        if (cfg.drift.kind == "preset") {
            ExtraDrift b = cfg.build_drift(space);
            reports.push_back(contraction_check(space, body, b, 1.0, 200, opts));
        }
    }
    if (reports.empty())
        throw ConfigError("unknown verify set: " + set +
                          " (expected ibp, revuz, qv, stationary, girsanov, "
                          "contraction or all)");
    return reports;
}

inline int cmd_verify(const ExperimentConfig& cfg, const std::string& set,
                      const std::string& out_override) {
    std::vector<std::string> comments;
    comments.push_back("rou verify " + set + " seed=" + std::to_string(cfg.seed));
    {
        std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        comments.push_back(std::string("generated=") + buf);
    }
    auto reports = verify_set(cfg, set, comments);
    const std::string file = !out_override.empty() ? out_override : cfg.output.checks;
    OutStream out(file);
    write_checks_csv(out.get(), reports, comments);
    long failed = 0;
    for (const auto& r : reports)
        if (!r.pass) ++failed;
    std::cerr << "verify " << set << ": " << reports.size() - failed << "/"
              << reports.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

inline int cmd_report(const std::vector<std::string>& files) {
    bool any_fail = false;
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw ConfigError("cannot open report file: " + file);
        std::string line;
        long total = 0, passed = 0;
        std::vector<std::string> failures;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("name,", 0) == 0) continue;
            std::stringstream ss(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(ss, field, ',')) fields.push_back(field);
            if (fields.size() != 6) continue;
            ++total;
            if (fields[5] == "1")
                ++passed;
            else
                failures.push_back(fields[0] + " (z=" + fields[4] + ")");
        }
        std::cout << file << ": " << passed << "/" << total << " passed\n";
        for (const auto& f : failures) std::cout << "  FAIL " << f << "\n";
        if (passed != total) any_fail = true;
    }
    return any_fail ? 1 : 0;
}

/// Entry point behind the binary; args exclude the program name.
inline int run(std::vector<std::string> args) {
    CLI::App app{"reflected / skew / oblique Ornstein-Uhlenbeck simulator"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_file;
    bool print_config = false;
    app.add_option("-c,--config", config_file, "experiment config (JSON)");
    app.add_flag("--print-config", print_config, "print the default config and exit");

    int workers = 0;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    app.add_option("--workers", workers, "worker threads (0 = ROU_WORKERS or hardware)");
    auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");

    std::string out_file;
    app.add_option("--out", out_file, "output file (default: config output or stdout)");

    auto* sim = app.add_subcommand("simulate", "run the configured simulation");
    auto* ver = app.add_subcommand("verify", "run a verification check set");
    std::string check_set = "all";
    ver->add_option("set", check_set,
                    "ibp | revuz | qv | stationary | girsanov | contraction | all");
    auto* rep = app.add_subcommand("report", "summarize check CSV files");
    std::vector<std::string> report_files;
    rep->add_option("files", report_files, "check CSV files")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    seed_set = seed_opt->count() > 0;

    try {
        if (print_config) {
            std::cout << ExperimentConfig::defaults().to_json().dump(2) << "\n";
            return 0;
        }
        ExperimentConfig cfg = config_file.empty()
                                   ? ExperimentConfig::defaults()
                                   : ExperimentConfig::from_file(config_file);
        if (workers > 0) cfg.workers = workers;
        if (seed_set) cfg.seed = seed_override;

        if (sim->parsed()) return cmd_simulate(cfg, out_file);
        if (ver->parsed()) return cmd_verify(cfg, check_set, out_file);
        if (rep->parsed()) return cmd_report(report_files);
        std::cout << app.help();
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace rou::cli
