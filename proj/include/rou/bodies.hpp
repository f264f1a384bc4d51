#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "rou/common.hpp"
#include "rou/rng.hpp"
#include "rou/spectral.hpp"

namespace rou {

/// Relative tolerance used for "on the boundary" / membership decisions on
/// the level value g(x) (convention: Gamma = {g <= 1}).
inline constexpr double kTolBoundary = 1e-8;

/// Tolerance and iteration cap for projection / boundary root-finds.
inline constexpr double kRootTol = 1e-12;
inline constexpr int kRootMaxIter = 100;

/// A closed convex set Gamma = {x : g(x) <= 1} with the capabilities the
/// steppers and the verification suite need: level function g, its gradient,
/// membership, nearest-point projection in the H norm, and a boundary hit
/// along a ray ("to_boundary").
class ConvexBody {
public:
    virtual ~ConvexBody() = default;

    virtual int dim() const = 0;

    /// Level function g with Gamma = {g <= 1}.
    virtual double level(const Point& x) const = 0;

    /// Dg(x).
    virtual void grad(const Point& x, Point& out) const = 0;

    /// D²g(x)·h when available; returns false for bodies without one.
    virtual bool hess_apply(const Point& /*x*/, const Point& /*h*/, Point& /*out*/) const {
        return false;
    }

    virtual bool contains(const Point& x) const { return level(x) <= 1.0 + kTolBoundary; }

    /// Nearest point of Gamma in the H norm; the identity on Gamma itself.
    virtual void project(const Point& y, Point& out) const = 0;

    virtual bool bounded() const = 0;

    /// Moves x onto the boundary {g = 1} (radially where the body supports it).
    virtual void to_boundary(const Point& x, Point& out) const = 0;

    /// Lower bound on the H-distance from an interior x to the boundary;
    /// 0 means "unknown", which disables the exact free-step shortcut.
    virtual double boundary_clearance(const Point& /*x*/) const { return 0.0; }

    Point project(const Point& y) const {
        Point out;
        project(y, out);
        return out;
    }
    Point grad(const Point& x) const {
        Point g;
        grad(x, g);
        return g;
    }
};

inline bool on_boundary(const ConvexBody& body, const Point& x, double tol = 1e-6) {
    return std::abs(body.level(x) - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// Ellipsoid  g(x) = sum_j (x_j / r_j)^2
// ---------------------------------------------------------------------------

class EllipsoidBody final : public ConvexBody {
public:
    using ConvexBody::grad;
    using ConvexBody::project;
    explicit EllipsoidBody(std::vector<double> semiaxes) : r_(std::move(semiaxes)) {
        if (r_.empty()) throw ConfigError("ellipsoid: empty semiaxis list");
        for (double r : r_)
            if (!(r > 0.0)) throw ConfigError("ellipsoid: semiaxes must be positive");
        r_min_ = *std::min_element(r_.begin(), r_.end());
        inv_r_sq_.resize(r_.size());
        for (std::size_t j = 0; j < r_.size(); ++j) inv_r_sq_[j] = 1.0 / (r_[j] * r_[j]);
    }

    int dim() const override { return static_cast<int>(r_.size()); }

    double level(const Point& x) const override {
        double s = 0.0;
        for (std::size_t j = 0; j < r_.size(); ++j) s += x[j] * x[j] * inv_r_sq_[j];
        return s;
    }

    void grad(const Point& x, Point& out) const override {
        out.resize(r_.size());
        for (std::size_t j = 0; j < r_.size(); ++j) out[j] = 2.0 * x[j] * inv_r_sq_[j];
    }

    bool hess_apply(const Point&, const Point& h, Point& out) const override {
        out.resize(r_.size());
        for (std::size_t j = 0; j < r_.size(); ++j) out[j] = 2.0 * h[j] * inv_r_sq_[j];
        return true;
    }

    /// Nearest point via the standard one-dimensional dual root-find:
    /// p_j = y_j r_j² / (r_j² + lambda) with F(lambda) = g(p) - 1 = 0.
    void project(const Point& y, Point& out) const override {
        const double g = level(y);
        if (g <= 1.0) {
            out = y;
            return;
        }
        // F(lambda) = sum_j y_j² r_j² / (r_j² + lambda)² - 1 is decreasing with
        // F(0) = g(y) - 1 > 0; F(hi) <= 0 for hi = |diag(r) y|.
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t j = 0; j < r_.size(); ++j) hi += y[j] * y[j] * r_[j] * r_[j];
        hi = std::sqrt(hi) + 1.0;
        double lambda = 0.5 * hi;
        for (int it = 0; it < kRootMaxIter; ++it) {
            double f = -1.0, df = 0.0;
            for (std::size_t j = 0; j < r_.size(); ++j) {
                const double rj2 = r_[j] * r_[j];
                const double den = rj2 + lambda;
                f += y[j] * y[j] * rj2 / (den * den);
                df += -2.0 * y[j] * y[j] * rj2 / (den * den * den);
            }
            if (f > 0.0)
                lo = lambda;
            else
                hi = lambda;
            const double step = (std::abs(df) > 0.0) ? -f / df : 0.0;
            double next = lambda + step;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
            if (std::abs(next - lambda) <= kRootTol * (1.0 + lambda) && std::abs(f) < 1e-12) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        out.resize(r_.size());
        for (std::size_t j = 0; j < r_.size(); ++j) {
            const double rj2 = r_[j] * r_[j];
            out[j] = y[j] * rj2 / (rj2 + lambda);
        }
    }

    bool bounded() const override { return true; }

    void to_boundary(const Point& x, Point& out) const override {
        const double g = level(x);
        out = x;
        if (g > 0.0) {
            const double t = 1.0 / std::sqrt(g);
            for (double& v : out) v *= t;
        } else {
            out.assign(r_.size(), 0.0);
            out[0] = r_[0];  // centre: pick an axis point
        }
    }

    double boundary_clearance(const Point& x) const override {
        const double s = std::sqrt(level(x));
        return s < 1.0 ? (1.0 - s) * r_min_ : 0.0;
    }

    const std::vector<double>& semiaxes() const { return r_; }

private:
    std::vector<double> r_;
    std::vector<double> inv_r_sq_;
    double r_min_ = 0.0;
};

// ---------------------------------------------------------------------------
// Halfspace  Gamma = {x : <n, x> <= offset},  g(x) = 1 + <n, x> - offset
// ---------------------------------------------------------------------------

class HalfspaceBody final : public ConvexBody {
public:
    using ConvexBody::grad;
    using ConvexBody::project;
    HalfspaceBody(Point normal, double offset) : n_(std::move(normal)), b_(offset) {
        n_norm_sq_ = norm_sq(n_);
        if (!(n_norm_sq_ > 0.0)) throw ConfigError("halfspace: zero normal");
        n_norm_ = std::sqrt(n_norm_sq_);
    }

    int dim() const override { return static_cast<int>(n_.size()); }

    double level(const Point& x) const override { return 1.0 + dot(n_, x) - b_; }

    void grad(const Point&, Point& out) const override { out = n_; }

    bool hess_apply(const Point&, const Point& h, Point& out) const override {
        out.assign(h.size(), 0.0);
        return true;
    }

    void project(const Point& y, Point& out) const override {
        const double excess = dot(n_, y) - b_;
        out = y;
        if (excess > 0.0) {
            const double t = excess / n_norm_sq_;
            for (std::size_t j = 0; j < n_.size(); ++j) out[j] -= t * n_[j];
        }
    }

    bool bounded() const override { return false; }

    void to_boundary(const Point& x, Point& out) const override {
        const double t = (dot(n_, x) - b_) / n_norm_sq_;
        out = x;
        for (std::size_t j = 0; j < n_.size(); ++j) out[j] -= t * n_[j];
    }

    double boundary_clearance(const Point& x) const override {
        const double d = (b_ - dot(n_, x)) / n_norm_;
        return d > 0.0 ? d : 0.0;
    }

private:
    Point n_;
    double b_;
    double n_norm_sq_ = 0.0;
    double n_norm_ = 0.0;
};

// ---------------------------------------------------------------------------
// Nonnegativity level set of the Dirichlet sine basis:
//   Gamma_alpha = {f in L²(0,1) : f >= -alpha},  evaluated on a grid through
// the discrete sine transform.  With grid nodes r_i = i/(m+1) the synthesis
// matrix E_ij = sqrt(2) sin((j+1) pi r_i) has orthonormal columns under the
// inner product (1/(m+1)) sum_i f_i g_i, so clipping on the grid is the L²
// projection onto the box constraint and Dykstra's alternating scheme gives
// the projection onto the intersection with the coefficient span.
// ---------------------------------------------------------------------------

class NonnegLevelBody final : public ConvexBody {
public:
    using ConvexBody::grad;
    using ConvexBody::project;
    NonnegLevelBody(const SpectralSpace& space, double alpha, int grid_points)
        : d_(space.dim()), m_(grid_points), alpha_(alpha) {
        if (!space.is_dirichlet())
            throw ConfigError("nonneg_level: requires a dirichlet-preset space");
        if (alpha_ < 0.0) throw ConfigError("nonneg_level: alpha must be >= 0");
        if (m_ < d_) throw ConfigError("nonneg_level: grid too coarse (grid_points < dim)");
        synth_.resize(static_cast<std::size_t>(m_) * d_);
        for (int i = 0; i < m_; ++i) {
            const double r = static_cast<double>(i + 1) / (m_ + 1);
            for (int j = 0; j < d_; ++j)
                synth_[static_cast<std::size_t>(i) * d_ + j] =
                    std::numbers::sqrt2 * std::sin((j + 1) * std::numbers::pi * r);
        }
        row_norm_max_ = 0.0;
        for (int i = 0; i < m_; ++i) {
            double s = 0.0;
            for (int j = 0; j < d_; ++j) {
                const double e = synth_[static_cast<std::size_t>(i) * d_ + j];
                s += e * e;
            }
            row_norm_max_ = std::max(row_norm_max_, std::sqrt(s));
        }
    }

    int dim() const override { return d_; }
    double alpha() const { return alpha_; }
    int grid_points() const { return m_; }

    void synthesize(const Point& c, std::vector<double>& f) const {
        f.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double* row = &synth_[static_cast<std::size_t>(i) * d_];
            double s = 0.0;
            for (int j = 0; j < d_; ++j) s += row[j] * c[j];
            f[i] = s;
        }
    }

    void analyze(const std::vector<double>& f, Point& c) const {
        c.assign(d_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double* row = &synth_[static_cast<std::size_t>(i) * d_];
            for (int j = 0; j < d_; ++j) c[j] += row[j] * f[i];
        }
        const double scale = 1.0 / (m_ + 1);
        for (double& v : c) v *= scale;
    }

    /// g(x) = 1 + (-min_i f_i - alpha): convex, piecewise affine in the
    /// coefficients; Gamma = {g <= 1} is exactly {f >= -alpha on the grid}.
    double level(const Point& x) const override {
        std::vector<double> f;
        synthesize(x, f);
        const double fmin = *std::min_element(f.begin(), f.end());
        return 1.0 - fmin - alpha_;
    }

    void grad(const Point& x, Point& out) const override {
        std::vector<double> f;
        synthesize(x, f);
        const int imin = static_cast<int>(
            std::min_element(f.begin(), f.end()) - f.begin());
        out.resize(d_);
        const double* row = &synth_[static_cast<std::size_t>(imin) * d_];
        for (int j = 0; j < d_; ++j) out[j] = -row[j];
    }

    bool contains(const Point& x) const override {
        return level(x) <= 1.0 + kTolBoundary;
    }

    void project(const Point& y, Point& out) const override {
        std::vector<double> f;
        synthesize(y, f);
        bool feasible = true;
        for (double v : f)
            if (v < -alpha_) {
                feasible = false;
                break;
            }
        if (feasible) {
            out = y;
            return;
        }
        // Dykstra between the box {f >= -alpha} and the coefficient span.
        std::vector<double> x = f, p(m_, 0.0), q(m_, 0.0), yb(m_), prev(m_);
        Point c;
        for (int it = 0; it < kRootMaxIter; ++it) {
            prev = x;
            for (int i = 0; i < m_; ++i) {
                const double v = x[i] + p[i];
                yb[i] = std::max(v, -alpha_);
                p[i] = v - yb[i];
            }
            for (int i = 0; i < m_; ++i) yb[i] += q[i];
            analyze(yb, c);
            synthesize(c, x);
            for (int i = 0; i < m_; ++i) q[i] = yb[i] - x[i];
            double delta = 0.0;
            for (int i = 0; i < m_; ++i) delta = std::max(delta, std::abs(x[i] - prev[i]));
            if (delta <= kRootTol) break;
        }
        out = c;
    }

    bool bounded() const override { return false; }

    void to_boundary(const Point& x, Point& out) const override {
        std::vector<double> f;
        synthesize(x, f);
        const double fmin = *std::min_element(f.begin(), f.end());
        if (fmin < 0.0 && alpha_ > 0.0) {
            // radial: min(t f) = t min(f) hits -alpha at t = alpha / (-min f)
            const double t = alpha_ / (-fmin);
            out = x;
            for (double& v : out) v *= t;
            return;
        }
        // fall back: lower the profile along the first eigenfunction, which is
        // positive on (0,1), until the minimum touches -alpha
        Point probe = x;
        double lo = 0.0, hi = 1.0;
        auto lvl = [&](double s) {
            probe = x;
            probe[0] -= s;
            return level(probe) - 1.0;
        };
        while (lvl(hi) < 0.0 && hi < 1e12) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (lvl(mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        out = x;
        out[0] -= 0.5 * (lo + hi);
    }

    double boundary_clearance(const Point& x) const override {
        const double slack = 1.0 - level(x);  // = min f + alpha
        return slack > 0.0 ? slack / row_norm_max_ : 0.0;
    }

private:
    int d_;
    int m_;
    double alpha_;
    std::vector<double> synth_;  // row-major m x d
    double row_norm_max_ = 0.0;
};

// ---------------------------------------------------------------------------
// Boundary quantities
// ---------------------------------------------------------------------------

/// Exterior unit normal eta = Dg/|Dg| at a boundary point (H normalization).
inline void exterior_normal(const ConvexBody& body, const Point& x, Point& out,
                            double boundary_tol = 1e-6) {
    if (std::abs(body.level(x) - 1.0) > boundary_tol)
        throw Error("exterior_normal: point is not on the boundary");
    body.grad(x, out);
    const double n = norm(out);
    if (!(n > 0.0)) throw Error("exterior_normal: vanishing gradient");
    for (double& v : out) v /= n;
}

inline Point exterior_normal(const ConvexBody& body, const Point& x,
                             double boundary_tol = 1e-6) {
    Point eta;
    exterior_normal(body, x, eta, boundary_tol);
    return eta;
}

/// Exterior normal normalized to |.|_{H1*} = 1 instead of H norm 1.
inline Point exterior_normal_h1star(const ConvexBody& body, const SpectralSpace& space,
                                    const Point& x, double boundary_tol = 1e-6) {
    Point eta = exterior_normal(body, x, boundary_tol);
    const double n = h1star_norm(space, eta);
    for (double& v : eta) v /= n;
    return eta;
}

/// Density |Dg(x)| / |Q^{1/2} Dg(x)| of the Gaussian perimeter measure
/// against the surface measure induced by mu; Q^{1/2} scales coordinate j by
/// sqrt(q_j) = 1/sqrt(2 alpha_j).
inline double surface_density(const ConvexBody& body, const SpectralSpace& space,
                              const Point& x, double boundary_tol = 1e-6) {
    if (std::abs(body.level(x) - 1.0) > boundary_tol)
        throw Error("surface_density: point is not on the boundary");
    Point g;
    body.grad(x, g);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < space.dim(); ++j) {
        num += g[j] * g[j];
        den += g[j] * g[j] * space.covariance(j);
    }
    if (!(num > 0.0)) throw Error("surface_density: vanishing gradient");
    return std::sqrt(num / den);
}

// ---------------------------------------------------------------------------
// Thin-shell sampler for the Gaussian perimeter measure ‖∂Γ‖.
//
// Proposals are mu-samples; hits in the shell {1 - eps <= g <= 1} are pushed
// to the boundary and carry the coarea weight |Dg(x)| / eps, so that
//   (1/N_proposals) * sum_hits w_i h(x_i*)  ->  ∫_{∂Γ} h d‖∂Γ‖.
// ---------------------------------------------------------------------------

class SurfaceSampler {
public:
    SurfaceSampler(const ConvexBody& body, const SpectralSpace& space,
                   double shell_eps = 1e-2, long min_hits = 32)
        : body_(body), space_(space), eps_(shell_eps), min_hits_(min_hits) {
        if (!(eps_ > 0.0)) throw ConfigError("surface sampler: shell_eps must be > 0");
    }

    struct Draw {
        Point x;        // boundary point
        double weight;  // |Dg| / eps at the shell sample
    };

    /// One accepted surface point; throws ShellStarvationError if max_tries
    /// proposals yield no hit.
    Draw sample_one(RngStream& rng, long max_tries = 1000000) const {
        Point x, g;
        for (long i = 0; i < max_tries; ++i) {
            sample_mu(space_, rng, x);
            const double lv = body_.level(x);
            if (lv >= 1.0 - eps_ && lv <= 1.0) {
                body_.grad(x, g);
                const double w = norm(g) / eps_;
                Draw d;
                body_.to_boundary(x, d.x);
                d.weight = w;
                return d;
            }
        }
        throw ShellStarvationError("surface sampler: no shell hit");
    }

    struct Estimate {
        double value = 0.0;
        double std_error = 0.0;
        long hits = 0;
        long proposals = 0;
    };

    /// Weighted shell estimate of ∫ h d‖∂Γ‖, run until target_hits are
    /// collected (or max_proposals attempted).
    template <class Fn>
    Estimate estimate(RngStream& rng, long target_hits, Fn&& h,
                      long max_proposals = -1) const {
        if (max_proposals < 0) max_proposals = 20000 * std::max<long>(target_hits, 1);
        Point x, g, xb;
        MeanAccumulator acc;
        long hits = 0;
        while (hits < target_hits && acc.count() < max_proposals) {
            sample_mu(space_, rng, x);
            const double lv = body_.level(x);
            if (lv >= 1.0 - eps_ && lv <= 1.0) {
                body_.grad(x, g);
                body_.to_boundary(x, xb);
                acc.add(norm(g) / eps_ * h(xb));
                ++hits;
            } else {
                acc.add(0.0);
            }
        }
        if (hits < std::min<long>(min_hits_, target_hits))
            throw ShellStarvationError("surface sampler: shell starvation (" +
                                       std::to_string(hits) + " hits)");
        Estimate e;
        e.value = acc.mean();
        e.std_error = acc.std_error();
        e.hits = hits;
        e.proposals = acc.count();
        return e;
    }

    /// Total perimeter mass ‖∂Γ‖(Γ).
    Estimate total_mass(RngStream& rng, long target_hits) const {
        return estimate(rng, target_hits, [](const Point&) { return 1.0; });
    }

    double shell_eps() const { return eps_; }

private:
    const ConvexBody& body_;
    const SpectralSpace& space_;
    double eps_;
    long min_hits_;
};

}  // namespace rou
