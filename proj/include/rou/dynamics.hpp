#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "rou/bodies.hpp"
#include "rou/common.hpp"
#include "rou/girsanov.hpp"
#include "rou/layering.hpp"
#include "rou/oblique.hpp"
#include "rou/rng.hpp"
#include "rou/spectral.hpp"

namespace rou {

enum class Mode { normal, oblique, skew };
enum class Scheme { project, penalize };
enum class NormalNorm { H, H1star };

struct StepConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    Scheme scheme = Scheme::project;
    double penalization_strength = 0.0;
    long record_stride = 1;
    /// Exact per-coordinate OU transition when the step cannot reach any
    /// boundary; Euler-Maruyama otherwise.
    bool use_exact_free = true;
    /// Normalization of the local-time *reports* for membranes whose natural
    /// normal lives in H1* rather than H.  Paths are unaffected.
    NormalNorm normal_norm = NormalNorm::H;
    /// Test hook: suppress the Wiener increments (dW = 0), leaving the
    /// deterministic Euler flow.
    bool noise_off = false;

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
        if (!(t_end > 0.0)) throw ConfigError("step: t_end must be positive");
        if (dt > t_end) throw ConfigError("step: dt must not exceed t_end");
        if (record_stride < 1) throw ConfigError("step: record_stride must be >= 1");
        if (scheme == Scheme::penalize) {
            if (!(penalization_strength > 0.0))
                throw ConfigError("step: penalize scheme needs a positive strength");
            if (penalization_strength * dt > 1.0)
                throw ConfigError("step: penalization_strength * dt > 1 (unstable)");
        }
    }

    long n_steps() const { return std::max<long>(1, std::llround(t_end / dt)); }
};

/// Bounded extra drift B with a declared sup norm; the simulator asserts the
/// bound at every evaluation.
struct ExtraDrift {
    std::function<void(const Point&, Point&)> eval;
    double sup_bound = 0.0;
    bool none() const { return !eval; }
};

inline void check_drift_bound(const Point& b, double sup_bound) {
    if (sup_bound > 0.0 && norm(b) > sup_bound * (1.0 + 1e-9))
        throw Error("drift: |B(x)| exceeds the declared sup bound");
}

/// A recorded trajectory.  Entry i > 0 of the increment arrays covers the
/// window between recorded times i-1 and i: wiener_increments, reflections
/// and local_time hold window sums, so the bookkeeping identity
///   x_i - x_{i-1} = drift displacement + wiener_increments[i] + reflections[i]
/// is exact for every window.
struct PathSample {
    std::vector<double> times;
    std::vector<Point> states;
    std::vector<Point> wiener_increments;           // entry 0 is a zero vector
    std::vector<Point> reflections;                 // entry 0 is a zero vector
    std::map<int, std::vector<double>> local_time;  // boundary id -> window sums
    std::vector<double> girsanov_z;                 // running Z at record times
    std::map<int, long> crossings;                  // membrane id -> crossing events
    long multi_membrane_steps = 0;  // steps crossing >= 2 distinct membranes
    GirsanovWeight weight;
    bool has_weight = false;
};

struct SimulationSpec {
    const SpectralSpace* space = nullptr;
    Mode mode = Mode::normal;
    std::shared_ptr<const ConvexBody> body;        // normal / oblique
    std::shared_ptr<const SkewLayering> layering;  // skew
    const ObliqueField* field = nullptr;           // oblique; null means zero
    ExtraDrift drift;                              // bounded extra drift B
    /// Simulate the base drift but accumulate reweighting factors targeting B.
    bool girsanov_reweight = false;
    StepConfig config;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::optional<Point> start;

    void validate() const {
        if (!space) throw ConfigError("simulation: no space");
        config.validate();
        switch (mode) {
            case Mode::normal:
                if (!body) throw ConfigError("simulation: normal mode needs a body");
                break;
            case Mode::oblique:
                if (!body) throw ConfigError("simulation: oblique mode needs a body");
                if (!body->bounded())
                    throw ConfigError("oblique mode requires a bounded body");
                if (config.scheme == Scheme::penalize)
                    throw ConfigError("simulation: penalize scheme is normal-mode only");
                break;
            case Mode::skew:
                if (!layering) throw ConfigError("simulation: skew mode needs a layering");
                if (!drift.none())
                    throw ConfigError("simulation: skew mode runs with the OU drift only");
                if (config.scheme == Scheme::penalize)
                    throw ConfigError("simulation: penalize scheme is normal-mode only");
                break;
        }
        if (field && !field->is_zero() && body) require_bounded_for_field(*field, *body);
        if (girsanov_reweight) {
            if (drift.none())
                throw ConfigError("simulation: girsanov reweighting needs a target drift");
            if (mode == Mode::skew)
                throw ConfigError("simulation: girsanov reweighting unsupported in skew mode");
        }
    }
};

// ---------------------------------------------------------------------------
// Single-step operations
// ---------------------------------------------------------------------------

/// Projection step for normal reflection.  Returns the local-time increment
/// dL = 2 |Y - proj(Y)|: the SDE carries (1/2) nu dL, so the Skorokhod push
/// equals dL/2 and the Revuz rate of L comes out against ‖∂Γ‖ with no extra
/// constant.
inline double step_reflect_normal(const ConvexBody& body, const Point& x,
                                  const Point& dw, const Point& drift, double dt,
                                  Point& out) {
    const std::size_t d = x.size();
    out.resize(d);
    for (std::size_t j = 0; j < d; ++j) out[j] = x[j] + drift[j] * dt + dw[j];
    if (body.contains(out)) return 0.0;
    Point y = out;
    body.project(y, out);
    return 2.0 * dist(y, out);
}

/// Oblique pushback: solves x* on the boundary and lambda >= 0 with
///   x* = Y + lambda (nu(x*) + Ǎ(x*)^T nu(x*))
/// by a damped fixed point seeded at proj(Y); each iterate lands on the
/// boundary by bisection along the current direction.  Returns dL = 2 lambda.
inline double step_reflect_oblique(const ConvexBody& body, const ObliqueField& field,
                                   const SpectralSpace& space, const Point& x,
                                   const Point& dw, const Point& drift, double dt,
                                   Point& out) {
    const std::size_t d = x.size();
    Point y(d);
    for (std::size_t j = 0; j < d; ++j) y[j] = x[j] + drift[j] * dt + dw[j];
    if (body.contains(y)) {
        out = y;
        return 0.0;
    }
    if (field.is_zero()) {
        body.project(y, out);
        return 2.0 * dist(y, out);
    }

    Point xs;
    body.project(y, xs);
    Point dir(d), tmp(d);
    double lambda = 0.0;
    double omega = 1.0;
    const double scale = std::max(1.0, norm(y));
    for (int it = 0; it < 50; ++it) {
        oblique_direction(field, body, space, xs, dir, 1e-5);
        // 1D root-find for level(Y + s dir) = 1; moving along dir from Y
        // points into the body since <dir, nu> = 1 > 0.
        auto lvl = [&](double s) {
            for (std::size_t j = 0; j < d; ++j) tmp[j] = y[j] + s * dir[j];
            return body.level(tmp) - 1.0;
        };
        double lo = 0.0, hi = std::max(2.0 * dist(y, xs), 16.0 * kRootTol);
        int guard = 0;
        while (lvl(hi) > 0.0 && guard++ < 60) hi *= 2.0;
        if (guard >= 60) throw SolverError("oblique step: no boundary bracket");
        for (int b = 0; b < 100; ++b) {
            const double mid = 0.5 * (lo + hi);
            if (lvl(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < kRootTol * scale) break;
        }
        const double s = 0.5 * (lo + hi);
        double move = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double cand = y[j] + s * dir[j];
            const double nx = xs[j] + omega * (cand - xs[j]);
            move = std::max(move, std::abs(nx - xs[j]));
            xs[j] = nx;
        }
        body.to_boundary(xs, xs);
        lambda = s;
        if (move <= 1e-10 * scale) {
            out = xs;
            return 2.0 * lambda;
        }
        if (it == 20) omega = 0.5;  // damp late, stubborn iterations
    }
    throw SolverError("oblique step: fixed point did not converge");
}

/// Penalization step: adds -strength (x - proj(x)) to the drift.  Cross-check
/// scheme only; produces no local time.
inline void step_penalized(const ConvexBody& body, const Point& x, const Point& dw,
                           const Point& drift, double dt, double strength, Point& out) {
    const std::size_t d = x.size();
    Point proj;
    body.project(x, proj);
    out.resize(d);
    for (std::size_t j = 0; j < d; ++j)
        out[j] = x[j] + (drift[j] - strength * (x[j] - proj[j])) * dt + dw[j];
}

namespace detail {

/// Fallback when the oblique fixed point rejects a step as too large: split
/// it in two by a Brownian bridge (the first half-increment is
/// N(dw/2, dt/4) given the full increment) and recurse, re-evaluating the
/// drift at the half-way state.
template <class DriftFn>
inline double oblique_step_split(const ConvexBody& body, const ObliqueField& field,
                                 const SpectralSpace& space, DriftFn&& eval_drift,
                                 const Point& x, const Point& dw, double dt,
                                 RngStream& aux, Point& out, int depth) {
    Point drift(x.size());
    eval_drift(x, drift);
    try {
        return step_reflect_oblique(body, field, space, x, dw, drift, dt, out);
    } catch (const SolverError&) {
        if (depth >= 6) throw;
        const std::size_t d = x.size();
        Point dw1(d), dw2(d);
        const double sd = 0.5 * std::sqrt(dt);
        for (std::size_t j = 0; j < d; ++j) {
            dw1[j] = 0.5 * dw[j] + sd * aux.normal();
            dw2[j] = dw[j] - dw1[j];
        }
        Point mid;
        double dl = oblique_step_split(body, field, space, eval_drift, x, dw1,
                                       0.5 * dt, aux, mid, depth + 1);
        dl += oblique_step_split(body, field, space, eval_drift, mid, dw2, 0.5 * dt,
                                 aux, out, depth + 1);
        return dl;
    }
}

/// Crossing point of the chord a -> b with the membrane {level = 1};
/// assumes opposite sides.  Returns the chord parameter.
inline double chord_crossing(const ConvexBody& body, const Point& a, const Point& b,
                             Point& tmp) {
    const std::size_t d = a.size();
    double lo = 0.0, hi = 1.0;
    const bool lo_out = body.level(a) > 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        for (std::size_t j = 0; j < d; ++j) tmp[j] = a[j] + mid * (b[j] - a[j]);
        const bool mid_out = body.level(tmp) > 1.0;
        if (mid_out == lo_out)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

struct SkewEvent {
    int membrane = 0;
    double dl = 0.0;  // symmetric local-time increment
};

/// Harrison-Shepp style skew step: membrane crossings of the Euler chord are
/// resampled so that the outcome lands on the outer (gamma_{k+1}) side with
/// probability p_k, the rejected side being the mirror image of the overshoot
/// across the tangent hyperplane at the crossing point.  Each crossing event
/// deposits sqrt(pi dt / 2) of symmetric local time (the crossing-count
/// estimator).  Crossings are resolved sequentially in chord order, at most
/// once per membrane per step.
inline void step_skew(const SkewLayering& layering, const SpectralSpace& space,
                      const Point& x, const Point& dw, const Point& drift, double dt,
                      RngStream& aux, Point& out, std::vector<SkewEvent>& events,
                      bool h1star_norm_reports = false) {
    const std::size_t d = x.size();
    events.clear();
    out.resize(d);
    for (std::size_t j = 0; j < d; ++j) out[j] = x[j] + drift[j] * dt + dw[j];

    const int n_mem = layering.n_membranes();
    if (n_mem > 64) throw ConfigError("skew: membrane window larger than 64");
    std::array<bool, 64> processed{};

    Point anchor = x, tmp(d), c(d), n(d);
    const double dl_unit = std::sqrt(std::numbers::pi * dt / 2.0);
    for (int round = 0; round <= n_mem; ++round) {
        int k_first = -1;
        double s_first = 2.0;
        for (int k = 0; k < n_mem; ++k) {
            if (processed[k]) continue;
            const bool a_out = layering.body(k).level(anchor) > 1.0;
            const bool b_out = layering.body(k).level(out) > 1.0;
            if (a_out == b_out) continue;
            const double s = detail::chord_crossing(layering.body(k), anchor, out, tmp);
            if (s < s_first) {
                s_first = s;
                k_first = k;
            }
        }
        if (k_first < 0) break;
        const ConvexBody& mem = layering.body(k_first);
        for (std::size_t j = 0; j < d; ++j)
            c[j] = anchor[j] + s_first * (out[j] - anchor[j]);
        mem.grad(c, n);
        const double nn = norm(n);
        if (nn > 0.0)
            for (double& v : n) v /= nn;

        const bool out_side = mem.level(out) > 1.0;
        const bool want_outer = aux.uniform() < layering.skew_prob(k_first);
        if (want_outer != out_side) {
            double h = 0.0;
            for (std::size_t j = 0; j < d; ++j) h += (out[j] - c[j]) * n[j];
            for (std::size_t j = 0; j < d; ++j) out[j] -= 2.0 * h * n[j];
        }
        double dl = dl_unit;
        if (h1star_norm_reports) {
            Point raw;
            mem.grad(c, raw);
            dl *= h1star_norm(space, raw) / norm(raw);
        }
        events.push_back({k_first, dl});
        processed[k_first] = true;
        anchor = c;
    }
}

// ---------------------------------------------------------------------------
// Path runner
// ---------------------------------------------------------------------------

/// Everything an observer may inspect after each step.  The bookkeeping
/// identity x_new = x_prev + drift_disp + dw + reflection holds exactly for
/// every step (for exact free-OU steps drift_disp is the exponential decay).
struct StepInfo {
    long step = 0;
    double t = 0.0;  // time after the step
    const Point* x_prev = nullptr;
    const Point* x_new = nullptr;
    const Point* dw = nullptr;
    const Point* drift_disp = nullptr;
    const Point* reflection = nullptr;
    double dl_body = 0.0;
    const std::vector<SkewEvent>* membrane_events = nullptr;
    double girsanov_z = 0.0;
};

/// Draws the stationary start: mu restricted to the body (normal/oblique) or
/// rho dmu / mass (skew), by rejection.
inline Point draw_initial_state(const SimulationSpec& spec, RngStream& init) {
    Point x;
    if (spec.mode == Mode::skew) {
        double rho_max = spec.layering->gamma_bar();
        for (double g : spec.layering->gammas()) rho_max = std::max(rho_max, g);
        for (;;) {
            sample_mu(*spec.space, init, x);
            if (init.uniform() * rho_max <= spec.layering->rho(x)) return x;
        }
    }
    for (;;) {
        sample_mu(*spec.space, init, x);
        if (spec.body->contains(x)) return x;
    }
}

/// Runs one path, invoking obs.on_start(x0) once, obs.on_step(info) after
/// every step and obs.on_finish(weight, has_weight) at the end.
/// Deterministic function of (spec.seed, spec.path_index).
template <class Observer>
inline void run_path(const SimulationSpec& spec, Observer&& obs) {
    spec.validate();
    const SpectralSpace& space = *spec.space;
    const int d = space.dim();
    const StepConfig& cfg = spec.config;
    const double dt = cfg.dt;
    const double sqrt_dt = std::sqrt(dt);
    const long n_steps = cfg.n_steps();
    ObliqueField local_zero = ObliqueField::zero(d);
    const ObliqueField* field = spec.field ? spec.field : &local_zero;

    PathRng rng(spec.seed, spec.path_index);

    Point x;
    if (spec.start) {
        x = *spec.start;
        if (static_cast<int>(x.size()) != d)
            throw ConfigError("simulation: start point has wrong dimension");
    } else {
        x = draw_initial_state(spec, rng.init);
    }
    obs.on_start(x);

    Point dw(d), drift_rate(d), drift_disp(d), refl(d), y(d), extra(d), vdiff(d),
        base_extra(d, 0.0);
    std::vector<SkewEvent> events;
    GirsanovWeight weight;

    std::vector<double> decay(d), exact_sd(d);
    for (int j = 0; j < d; ++j) {
        decay[j] = std::exp(-space.eigenvalue(j) * dt);
        exact_sd[j] = std::sqrt(space.covariance(j) * (1.0 - decay[j] * decay[j]));
    }
    // The exact shortcut needs purely linear drift and no weight accounting.
    const bool exact_allowed = cfg.use_exact_free && cfg.scheme == Scheme::project &&
                               spec.drift.none() && !spec.girsanov_reweight &&
                               !cfg.noise_off &&
                               (spec.mode != Mode::oblique || field->is_zero());
    const double noise_envelope = 8.0 * std::sqrt(static_cast<double>(d) * dt);
    const double alpha_max = space.max_eigenvalue();
    const bool h1star = cfg.normal_norm == NormalNorm::H1star;

    StepInfo info;
    for (long step = 0; step < n_steps; ++step) {
        ou_drift(space, x, drift_rate);
        bool drift_is_linear = true;
        if (spec.mode == Mode::oblique &&
            (spec.drift.none() || spec.girsanov_reweight)) {
            beta_mu_A(*field, space, x, base_extra);
            for (int j = 0; j < d; ++j) drift_rate[j] += base_extra[j];
            drift_is_linear = field->is_zero();
        }
        if (!spec.drift.none() && !spec.girsanov_reweight) {
            spec.drift.eval(x, extra);
            check_drift_bound(extra, spec.drift.sup_bound);
            for (int j = 0; j < d; ++j) drift_rate[j] += extra[j];
            drift_is_linear = false;
        }

        bool did_exact = false;
        if (exact_allowed && drift_is_linear) {
            double clearance;
            if (spec.mode == Mode::skew) {
                clearance = std::numeric_limits<double>::infinity();
                for (int k = 0; k < spec.layering->n_membranes(); ++k)
                    clearance = std::min(
                        clearance, spec.layering->body(k).boundary_clearance(x));
            } else {
                clearance = spec.body->boundary_clearance(x);
            }
            if (clearance > alpha_max * dt * norm(x) + noise_envelope) {
                for (int j = 0; j < d; ++j) {
                    dw[j] = exact_sd[j] * rng.wiener.normal();
                    drift_disp[j] = (decay[j] - 1.0) * x[j];
                    y[j] = x[j] + drift_disp[j] + dw[j];
                    refl[j] = 0.0;
                }
                did_exact = true;
            }
        }

        double dl_body = 0.0;
        events.clear();
        if (did_exact) {
            // The 8-sigma envelope makes a boundary contact here a tail event;
            // body modes still resolve it, for safety.
            if (spec.mode != Mode::skew && !spec.body->contains(y)) {
                Point outside = y;
                spec.body->project(outside, y);
                dl_body = 2.0 * dist(outside, y);
                for (int j = 0; j < d; ++j) refl[j] = y[j] - outside[j];
            }
        } else {
            for (int j = 0; j < d; ++j) {
                dw[j] = cfg.noise_off ? 0.0 : sqrt_dt * rng.wiener.normal();
                drift_disp[j] = drift_rate[j] * dt;
            }
            if (spec.girsanov_reweight) {
                spec.drift.eval(x, extra);
                check_drift_bound(extra, spec.drift.sup_bound);
                for (int j = 0; j < d; ++j) vdiff[j] = extra[j] - base_extra[j];
                girsanov_accumulate(weight, vdiff, dw, dt);
            }
            switch (spec.mode) {
                case Mode::normal:
                    if (cfg.scheme == Scheme::penalize)
                        step_penalized(*spec.body, x, dw, drift_rate, dt,
                                       cfg.penalization_strength, y);
                    else
                        dl_body =
                            step_reflect_normal(*spec.body, x, dw, drift_rate, dt, y);
                    break;
                case Mode::oblique:
                    try {
                        dl_body = step_reflect_oblique(*spec.body, *field, space, x,
                                                       dw, drift_rate, dt, y);
                    } catch (const SolverError&) {
                        auto eval_drift = [&](const Point& z, Point& rate) {
                            ou_drift(space, z, rate);
                            Point add(d);
                            if (spec.drift.none() || spec.girsanov_reweight)
                                beta_mu_A(*field, space, z, add);
                            else
                                spec.drift.eval(z, add);
                            for (int j = 0; j < d; ++j) rate[j] += add[j];
                        };
                        dl_body = detail::oblique_step_split(
                            *spec.body, *field, space, eval_drift, x, dw, dt,
                            rng.aux, y, 0);
                    }
                    break;
                case Mode::skew:
                    step_skew(*spec.layering, space, x, dw, drift_rate, dt, rng.aux, y,
                              events, h1star);
                    break;
            }
            if (dl_body > 0.0 && h1star) {
                Point g;
                spec.body->grad(y, g);
                dl_body *= h1star_norm(space, g) / norm(g);
            }
            for (int j = 0; j < d; ++j)
                refl[j] = y[j] - (x[j] + drift_disp[j] + dw[j]);
        }

        info.step = step;
        info.t = static_cast<double>(step + 1) * dt;
        info.x_prev = &x;
        info.x_new = &y;
        info.dw = &dw;
        info.drift_disp = &drift_disp;
        info.reflection = &refl;
        info.dl_body = dl_body;
        info.membrane_events = &events;
        info.girsanov_z = weight.z;
        obs.on_step(info);

        x.swap(y);
    }
    obs.on_finish(weight, spec.girsanov_reweight);
}

/// Records a PathSample, honoring record_stride (window sums between
/// recorded times).
class PathRecorder {
public:
    PathRecorder(int dim, long stride, long n_steps, std::vector<int> boundary_ids,
                 bool with_weight)
        : d_(dim), stride_(stride), n_steps_(n_steps), with_weight_(with_weight) {
        for (int id : boundary_ids) win_dl_[id] = 0.0;
    }

    void on_start(const Point& x0) {
        sample_.times.push_back(0.0);
        sample_.states.push_back(x0);
        sample_.wiener_increments.push_back(Point(d_, 0.0));
        sample_.reflections.push_back(Point(d_, 0.0));
        if (with_weight_) sample_.girsanov_z.push_back(0.0);
        win_dw_.assign(d_, 0.0);
        win_refl_.assign(d_, 0.0);
    }

    void on_step(const StepInfo& info) {
        for (int j = 0; j < d_; ++j) {
            win_dw_[j] += (*info.dw)[j];
            win_refl_[j] += (*info.reflection)[j];
        }
        if (info.dl_body > 0.0) win_dl_[0] += info.dl_body;
        for (const SkewEvent& e : *info.membrane_events) {
            win_dl_[e.membrane] += e.dl;
            ++sample_.crossings[e.membrane];
        }
        if (info.membrane_events->size() >= 2) ++sample_.multi_membrane_steps;
        if ((info.step + 1) % stride_ == 0 || info.step + 1 == n_steps_) {
            sample_.times.push_back(info.t);
            sample_.states.push_back(*info.x_new);
            sample_.wiener_increments.push_back(win_dw_);
            sample_.reflections.push_back(win_refl_);
            for (auto& [id, dl] : win_dl_) {
                sample_.local_time[id].push_back(dl);
                dl = 0.0;
            }
            if (with_weight_) sample_.girsanov_z.push_back(info.girsanov_z);
            win_dw_.assign(d_, 0.0);
            win_refl_.assign(d_, 0.0);
        }
    }

    void on_finish(const GirsanovWeight& w, bool has_weight) {
        sample_.weight = w;
        sample_.has_weight = has_weight;
    }

    PathSample take() { return std::move(sample_); }

private:
    int d_;
    long stride_;
    long n_steps_;
    bool with_weight_;
    PathSample sample_;
    Point win_dw_, win_refl_;
    std::map<int, double> win_dl_;
};

/// Simulates one trajectory; a deterministic function of the spec including
/// (seed, path_index).
inline PathSample simulate(const SimulationSpec& spec) {
    spec.validate();
    std::vector<int> ids;
    if (spec.mode == Mode::skew)
        for (int k = 0; k < spec.layering->n_membranes(); ++k) ids.push_back(k);
    else
        ids.push_back(0);
    PathRecorder rec(spec.space->dim(), spec.config.record_stride,
                     spec.config.n_steps(), ids, spec.girsanov_reweight);
    run_path(spec, rec);
    return rec.take();
}

}  // namespace rou
