#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "rou/bodies.hpp"
#include "rou/common.hpp"
#include "rou/spectral.hpp"

namespace rou {

/// An increasing family of closed convex bodies Gamma_0 ⊆ ... ⊆ Gamma_{K-1}
/// (a finite window of membranes) with step weights gamma_k.  The step
/// density is
///   rho = gamma_0 inside Gamma_0,  gamma_{k+1} on Gamma_{k+1} \ Gamma_k,
///   gamma_bar outside Gamma_{K-1},
/// and the permeability of membrane k (the boundary of body k) is
///   p_k = gamma_out / (gamma_in + gamma_out),
/// the probability of landing on the outer side after a crossing attempt.
class SkewLayering {
public:
    SkewLayering(std::vector<std::shared_ptr<const ConvexBody>> bodies,
                 std::vector<double> gammas, double gamma_bar,
                 double c0 = 0.0)
        : bodies_(std::move(bodies)), gammas_(std::move(gammas)), gamma_bar_(gamma_bar) {
        if (bodies_.empty()) throw ConfigError("layering: no bodies");
        if (gammas_.size() != bodies_.size())
            throw ConfigError("layering: need one gamma per body");
        for (double g : gammas_)
            if (!(g > 0.0)) throw ConfigError("layering: gammas must be positive");
        if (!(gamma_bar_ > 0.0)) throw ConfigError("layering: gamma_bar must be positive");

        double band = std::max(gamma_bar_, 1.0 / gamma_bar_);
        for (double g : gammas_) band = std::max({band, g, 1.0 / g});
        if (c0 > 0.0) {
            if (band > c0 * (1.0 + 1e-12))
                throw ConfigError("layering: gamma outside declared band [1/c0, c0]");
            c0_ = c0;
        } else {
            c0_ = std::max(band, 1.0 + 1e-9);
        }
    }

    int n_membranes() const { return static_cast<int>(bodies_.size()); }
    const ConvexBody& body(int k) const { return *bodies_[k]; }
    std::shared_ptr<const ConvexBody> body_ptr(int k) const { return bodies_[k]; }
    double c0() const { return c0_; }
    double gamma_bar() const { return gamma_bar_; }
    const std::vector<double>& gammas() const { return gammas_; }

    /// rho just inside membrane k.
    double gamma_inside(int k) const { return gammas_[k]; }
    /// rho just outside membrane k (gamma_bar beyond the largest body).
    double gamma_outside(int k) const {
        return k + 1 < n_membranes() ? gammas_[k + 1] : gamma_bar_;
    }

    double rho(const Point& x) const {
        for (int k = 0; k < n_membranes(); ++k)
            if (bodies_[k]->contains(x)) return gammas_[k];
        return gamma_bar_;
    }

    /// p_k = gamma_{k+1} / (gamma_{k+1} + gamma_k); 2 p_k - 1 is the skew drift
    /// coefficient of the local-time term.
    double skew_prob(int k) const {
        if (k < 0 || k >= n_membranes()) throw Error("skew_prob: membrane index out of window");
        const double gi = gamma_inside(k), go = gamma_outside(k);
        return go / (gi + go);
    }

    /// Symmetric membrane weight (gamma_in + gamma_out)/2 relating the raw
    /// boundary functional to the symmetric local time.
    double symmetric_weight(int k) const {
        return 0.5 * (gamma_inside(k) + gamma_outside(k));
    }

private:
    std::vector<std::shared_ptr<const ConvexBody>> bodies_;
    std::vector<double> gammas_;
    double gamma_bar_;
    double c0_ = 0.0;
};

/// Builds a layering and checks nestedness by sampling: projections into
/// body k must land in body k+1, and each ring must contain a witness point.
inline std::shared_ptr<SkewLayering> make_layering(
    const SpectralSpace& space,
    std::vector<std::shared_ptr<const ConvexBody>> bodies,
    std::vector<double> gammas, double gamma_bar, double c0 = 0.0,
    int check_samples = 256) {
    auto layering = std::make_shared<SkewLayering>(std::move(bodies),
                                                   std::move(gammas), gamma_bar, c0);
    RngStream rng(0x6c617972u, 0, 0);
    Point x, p, b;
    for (int k = 0; k + 1 < layering->n_membranes(); ++k) {
        bool witness = false;
        for (int s = 0; s < check_samples; ++s) {
            sample_mu(space, rng, x);
            layering->body(k).project(x, p);
            if (!layering->body(k + 1).contains(p))
                throw ConfigError("layering: bodies not nested (projection of body " +
                                  std::to_string(k) + " escapes body " +
                                  std::to_string(k + 1) + ")");
            layering->body(k).to_boundary(x, b);
            if (!layering->body(k + 1).contains(b))
                throw ConfigError("layering: bodies not nested (boundary of body " +
                                  std::to_string(k) + " escapes body " +
                                  std::to_string(k + 1) + ")");
            if (!witness && layering->body(k + 1).contains(x) &&
                !layering->body(k).contains(x))
                witness = true;
            if (!witness) {
                layering->body(k + 1).to_boundary(x, b);
                if (!layering->body(k).contains(b)) witness = true;
            }
        }
        if (!witness)
            throw ConfigError("layering: bodies " + std::to_string(k) + " and " +
                              std::to_string(k + 1) +
                              " look identical (no witness point in the ring)");
    }
    return layering;
}

/// rho at x (free-function form of the step density).
inline double rho_eval(const SkewLayering& layering, const Point& x) {
    return layering.rho(x);
}

/// Finite-window analogue of the membrane variation sum
/// sum_k |gamma_{k+1} - gamma_k| ‖∂Γ_k‖(∂Γ_k), estimated by shell sampling.
/// Reported, not asserted.
inline double variation_sum_estimate(const SkewLayering& layering,
                                     const SpectralSpace& space, RngStream& rng,
                                     long target_hits_per_membrane = 2000,
                                     double shell_eps = 1e-2) {
    double total = 0.0;
    for (int k = 0; k < layering.n_membranes(); ++k) {
        const double jump =
            std::abs(layering.gamma_outside(k) - layering.gamma_inside(k));
        if (jump == 0.0) continue;
        SurfaceSampler sampler(layering.body(k), space, shell_eps);
        total += jump * sampler.total_mass(rng, target_hits_per_membrane).value;
    }
    return total;
}

}  // namespace rou
