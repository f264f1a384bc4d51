#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rou/bodies.hpp"
#include "rou/common.hpp"
#include "rou/dynamics.hpp"
#include "rou/layering.hpp"
#include "rou/oblique.hpp"
#include "rou/spectral.hpp"

namespace rou {

using nlohmann::json;

struct SpaceSpec {
    std::string preset = "custom";  // "custom" | "dirichlet"
    int d = 2;
    double epsilon = 0.5;
    std::vector<double> eigenvalues{1.0, 2.0};
    std::vector<double> h1_weights{1.0, 1.0};
};

struct BodySpec {
    std::string kind = "ellipsoid";  // "ellipsoid" | "halfspace" | "nonneg_level"
    std::vector<double> semiaxes{1.0, 1.0};
    std::vector<double> normal;
    double offset = 0.0;
    double alpha = 0.5;
    int grid_points = 64;
};

struct LayeringSpec {
    std::vector<BodySpec> bodies;
    std::vector<double> gammas;
    double gamma_bar = 1.0;
    double c0 = 0.0;  // 0 = derive from the gammas
};

struct ObliqueSpec {
    std::string kind = "zero";  // "zero" | "constant" | "callable_preset"
    std::vector<double> upper;  // strictly upper triangle, row-major
    double amplitude = 0.0;     // callable_preset modulation
};

struct DriftSpec {
    std::string kind = "none";  // "none" | "constant" | "preset"
    std::vector<double> values;
    double bound = 0.0;
    bool reweight = false;  // estimate under B by reweighting base paths
};

struct StepSpec {
    double dt = 0.0;  // 0 = auto: 1e-3 / max alpha_j
    double t_end = 10.0;
    std::string scheme = "project";  // "project" | "penalize"
    double penalization_strength = 100.0;
    long record_stride = 10;
    bool use_exact_free = true;
    std::string normal_norm = "H";  // "H" | "H1star"
};

struct VerifySizes {
    long n_volume = 200000;
    long n_surface_hits = 20000;
    double shell_eps = 1e-2;
    long n_paths = 200;
    double t_end = 20.0;
    double burn_in = 5.0;
    long n_measure_samples = 200000;
    double ess_floor = 100.0;
};

struct OutputSpec {
    std::string trajectory;  // empty = stdout
    std::string checks;      // empty = stdout
};

struct ExperimentConfig {
    SpaceSpec space;
    std::string mode = "normal";  // "normal" | "oblique" | "skew"
    BodySpec body;
    LayeringSpec layering;
    ObliqueSpec oblique;
    DriftSpec drift;
    StepSpec step;
    long n_paths = 8;
    std::uint64_t seed = 12345;
    int workers = 0;  // 0 = ROU_WORKERS env or hardware
    OutputSpec output;
    VerifySizes verify;

    static ExperimentConfig defaults() {
        ExperimentConfig c;
        c.layering.bodies.push_back(c.body);
        c.layering.gammas = {3.0 / 7.0};
        c.layering.gamma_bar = 1.0;
        return c;
    }

    json to_json() const;
    static ExperimentConfig from_json(const json& j);
    static ExperimentConfig from_file(const std::string& path);

    // ---- object builders -------------------------------------------------

    SpectralSpace build_space() const {
        if (space.preset == "dirichlet") return SpectralSpace::dirichlet(space.d, space.epsilon);
        if (space.preset == "custom")
            return SpectralSpace::make(space.eigenvalues, space.h1_weights);
        throw ConfigError("space.preset must be \"custom\" or \"dirichlet\"");
    }

    static std::shared_ptr<ConvexBody> build_body(const BodySpec& b,
                                                  const SpectralSpace& s) {
        if (b.kind == "ellipsoid") {
            if (static_cast<int>(b.semiaxes.size()) != s.dim())
                throw ConfigError("body: need one semiaxis per dimension");
            return std::make_shared<EllipsoidBody>(b.semiaxes);
        }
        if (b.kind == "halfspace") {
            if (static_cast<int>(b.normal.size()) != s.dim())
                throw ConfigError("body: halfspace normal has wrong dimension");
            return std::make_shared<HalfspaceBody>(b.normal, b.offset);
        }
        if (b.kind == "nonneg_level") {
            if (!s.is_dirichlet())
                throw ConfigError(
                    "body: nonneg_level requires the dirichlet space preset");
            return std::make_shared<NonnegLevelBody>(s, b.alpha, b.grid_points);
        }
        throw ConfigError("body.kind must be ellipsoid, halfspace or nonneg_level");
    }

    std::shared_ptr<ConvexBody> build_body(const SpectralSpace& s) const {
        return build_body(body, s);
    }

    std::shared_ptr<SkewLayering> build_layering(const SpectralSpace& s) const {
        if (layering.bodies.empty())
            throw ConfigError("layering: skew mode needs at least one body");
        std::vector<std::shared_ptr<const ConvexBody>> bodies;
        for (const auto& b : layering.bodies) bodies.push_back(build_body(b, s));
        return make_layering(s, std::move(bodies), layering.gammas,
                             layering.gamma_bar, layering.c0);
    }

    ObliqueField build_field(const SpectralSpace& s) const {
        if (oblique.kind == "zero") return ObliqueField::zero(s.dim());
        if (oblique.kind == "constant") return ObliqueField::constant(s.dim(), oblique.upper);
        if (oblique.kind == "callable_preset")
            return ObliqueField::sine_preset(s.dim(), oblique.upper, oblique.amplitude);
        throw ConfigError("oblique.kind must be zero, constant or callable_preset");
    }

    ExtraDrift build_drift(const SpectralSpace& s) const {
        ExtraDrift e;
        if (drift.kind == "none") return e;
        if (drift.kind == "constant") {
            if (static_cast<int>(drift.values.size()) != s.dim())
                throw ConfigError("drift: constant drift has wrong dimension");
            Point v = drift.values;
            e.eval = [v](const Point&, Point& out) { out = v; };
            e.sup_bound = drift.bound > 0.0 ? drift.bound : norm(v);
            return e;
        }
        if (drift.kind == "preset") {
            // bounded monotone-perturbed preset: B(x) = -x/2 + 0.8 tanh(x_0) e_1^perp
            const int d = s.dim();
            e.eval = [d](const Point& x, Point& out) {
                out.assign(d, 0.0);
                for (int j = 0; j < d; ++j) out[j] = -0.5 * x[j];
                out[d > 1 ? 1 : 0] += 0.8 * std::tanh(x[0]);
            };
            e.sup_bound = drift.bound;
            return e;
        }
        throw ConfigError("drift.kind must be none, constant or preset");
    }

    Mode build_mode() const {
        if (mode == "normal") return Mode::normal;
        if (mode == "oblique") return Mode::oblique;
        if (mode == "skew") return Mode::skew;
        throw ConfigError("mode must be normal, oblique or skew");
    }

    StepConfig build_step(const SpectralSpace& s) const {
        StepConfig c;
        c.dt = step.dt > 0.0 ? step.dt : 1e-3 / s.max_eigenvalue();
        c.t_end = step.t_end;
        if (step.scheme == "project")
            c.scheme = Scheme::project;
        else if (step.scheme == "penalize")
            c.scheme = Scheme::penalize;
        else
            throw ConfigError("step.scheme must be project or penalize");
        c.penalization_strength = step.penalization_strength;
        c.record_stride = step.record_stride;
        c.use_exact_free = step.use_exact_free;
        if (step.normal_norm == "H")
            c.normal_norm = NormalNorm::H;
        else if (step.normal_norm == "H1star")
            c.normal_norm = NormalNorm::H1star;
        else
            throw ConfigError("step.normal_norm must be H or H1star");
        c.validate();
        return c;
    }

    /// Cross-field validation; throws ConfigError naming the violated rule.
    void validate() const {
        const SpectralSpace s = build_space();
        const Mode m = build_mode();
        const StepConfig cfg = build_step(s);
        (void)cfg;
        ObliqueField field = build_field(s);
        if (m == Mode::skew) {
            auto lay = build_layering(s);
            if (drift.kind != "none")
                throw ConfigError("rule skew_ou_drift_only: skew mode runs with the OU "
                                  "drift only");
        } else {
            auto b = build_body(s);
            if (m == Mode::oblique && !b->bounded())
                throw ConfigError(
                    "rule oblique_requires_bounded_body: oblique mode needs a bounded "
                    "body");
            if (!field.is_zero() && !b->bounded())
                throw ConfigError(
                    "rule field_requires_bounded_body: a nonzero dispersion field "
                    "needs a bounded body");
        }
        if (drift.reweight && drift.kind == "none")
            throw ConfigError(
                "rule reweight_requires_drift: girsanov reweighting needs a drift");
        if (n_paths < 1) throw ConfigError("rule n_paths: need at least one path");
        (void)build_drift(s);
    }

    SimulationSpec build_simulation(const SpectralSpace& s) const {
        SimulationSpec spec;
        spec.space = &s;
        spec.mode = build_mode();
        if (spec.mode == Mode::skew)
            spec.layering = build_layering(s);
        else
            spec.body = build_body(s);
        spec.config = build_step(s);
        spec.drift = build_drift(s);
        spec.girsanov_reweight = drift.reweight && !spec.drift.none();
        spec.seed = seed;
        return spec;
    }
};

// ---- JSON (de)serialization ------------------------------------------------

inline json ExperimentConfig::to_json() const {
    json j;
    j["space"] = {{"preset", space.preset},
                  {"d", space.d},
                  {"epsilon", space.epsilon},
                  {"eigenvalues", space.eigenvalues},
                  {"h1_weights", space.h1_weights}};
    j["mode"] = mode;
    auto body_json = [](const BodySpec& b) {
        return json{{"kind", b.kind},       {"semiaxes", b.semiaxes},
                    {"normal", b.normal},   {"offset", b.offset},
                    {"alpha", b.alpha},     {"grid_points", b.grid_points}};
    };
    j["body"] = body_json(body);
    json jb = json::array();
    for (const auto& b : layering.bodies) jb.push_back(body_json(b));
    j["layering"] = {{"bodies", jb},
                     {"gammas", layering.gammas},
                     {"gamma_bar", layering.gamma_bar},
                     {"c0", layering.c0}};
    j["oblique"] = {{"kind", oblique.kind},
                    {"upper", oblique.upper},
                    {"amplitude", oblique.amplitude}};
    j["drift"] = {{"kind", drift.kind},
                  {"values", drift.values},
                  {"bound", drift.bound},
                  {"reweight", drift.reweight}};
    j["step"] = {{"dt", step.dt},
                 {"t_end", step.t_end},
                 {"scheme", step.scheme},
                 {"penalization_strength", step.penalization_strength},
                 {"record_stride", step.record_stride},
                 {"use_exact_free", step.use_exact_free},
                 {"normal_norm", step.normal_norm}};
    j["n_paths"] = n_paths;
    j["seed"] = seed;
    j["workers"] = workers;
    j["output"] = {{"trajectory", output.trajectory}, {"checks", output.checks}};
    j["verify"] = {{"n_volume", verify.n_volume},
                   {"n_surface_hits", verify.n_surface_hits},
                   {"shell_eps", verify.shell_eps},
                   {"n_paths", verify.n_paths},
                   {"t_end", verify.t_end},
                   {"burn_in", verify.burn_in},
                   {"n_measure_samples", verify.n_measure_samples},
                   {"ess_floor", verify.ess_floor}};
    return j;
}

namespace detail {
template <class T>
void read_into(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}
inline BodySpec body_from_json(const json& j) {
    BodySpec b;
    read_into(j, "kind", b.kind);
    read_into(j, "semiaxes", b.semiaxes);
    read_into(j, "normal", b.normal);
    read_into(j, "offset", b.offset);
    read_into(j, "alpha", b.alpha);
    read_into(j, "grid_points", b.grid_points);
    return b;
}
}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c = ExperimentConfig::defaults();
    using detail::read_into;
    if (j.contains("space")) {
        const json& js = j.at("space");
        read_into(js, "preset", c.space.preset);
        read_into(js, "d", c.space.d);
        read_into(js, "epsilon", c.space.epsilon);
        read_into(js, "eigenvalues", c.space.eigenvalues);
        read_into(js, "h1_weights", c.space.h1_weights);
        if (c.space.preset == "custom" &&
            c.space.h1_weights.size() != c.space.eigenvalues.size())
            c.space.h1_weights.assign(c.space.eigenvalues.size(), 1.0);
    }
    read_into(j, "mode", c.mode);
    if (j.contains("body")) c.body = detail::body_from_json(j.at("body"));
    // the default single-membrane layering follows the configured body
    c.layering.bodies = {c.body};
    if (j.contains("layering")) {
        const json& jl = j.at("layering");
        if (jl.contains("bodies")) {
            c.layering.bodies.clear();
            for (const auto& jb : jl.at("bodies"))
                c.layering.bodies.push_back(detail::body_from_json(jb));
        }
        read_into(jl, "gammas", c.layering.gammas);
        read_into(jl, "gamma_bar", c.layering.gamma_bar);
        read_into(jl, "c0", c.layering.c0);
    }
    if (j.contains("oblique")) {
        const json& jo = j.at("oblique");
        read_into(jo, "kind", c.oblique.kind);
        read_into(jo, "upper", c.oblique.upper);
        read_into(jo, "amplitude", c.oblique.amplitude);
    }
    if (j.contains("drift")) {
        const json& jd = j.at("drift");
        read_into(jd, "kind", c.drift.kind);
        read_into(jd, "values", c.drift.values);
        read_into(jd, "bound", c.drift.bound);
        read_into(jd, "reweight", c.drift.reweight);
    }
    if (j.contains("step")) {
        const json& js = j.at("step");
        read_into(js, "dt", c.step.dt);
        read_into(js, "t_end", c.step.t_end);
        read_into(js, "scheme", c.step.scheme);
        read_into(js, "penalization_strength", c.step.penalization_strength);
        read_into(js, "record_stride", c.step.record_stride);
        read_into(js, "use_exact_free", c.step.use_exact_free);
        read_into(js, "normal_norm", c.step.normal_norm);
    }
    read_into(j, "n_paths", c.n_paths);
    read_into(j, "seed", c.seed);
    read_into(j, "workers", c.workers);
    if (j.contains("output")) {
        read_into(j.at("output"), "trajectory", c.output.trajectory);
        read_into(j.at("output"), "checks", c.output.checks);
    }
    if (j.contains("verify")) {
        const json& jv = j.at("verify");
        read_into(jv, "n_volume", c.verify.n_volume);
        read_into(jv, "n_surface_hits", c.verify.n_surface_hits);
        read_into(jv, "shell_eps", c.verify.shell_eps);
        read_into(jv, "n_paths", c.verify.n_paths);
        read_into(jv, "t_end", c.verify.t_end);
        read_into(jv, "burn_in", c.verify.burn_in);
        read_into(jv, "n_measure_samples", c.verify.n_measure_samples);
        read_into(jv, "ess_floor", c.verify.ess_floor);
    }
    return c;
}

inline ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path + ": " + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError("bad config value in " + path + ": " + e.what());
    }
}

}  // namespace rou
