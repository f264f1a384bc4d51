#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rou/common.hpp"
#include "rou/rng.hpp"

namespace rou {

/// Truncated eigenstructure of the self-adjoint drift operator A together
/// with the centred Gaussian measure mu = N(0, Q), Q = A^{-1}/2, which is
/// diagonal in the eigenbasis.  Coordinates of a Point are the expansion
/// coefficients <x, e_j>; the H inner product is the plain dot product and
/// the H1/H1* pairings are the c_j-weighted ones.
///
/// Immutable after construction; safe to share across worker threads.
class SpectralSpace {
public:
    static SpectralSpace make(std::vector<double> eigenvalues,
                              std::vector<double> h1_weights) {
        if (eigenvalues.empty()) throw ConfigError("space: eigenvalue list is empty");
        if (eigenvalues.size() != h1_weights.size())
            throw ConfigError("space: eigenvalues and h1_weights have different lengths");
        for (double a : eigenvalues)
            if (!(a > 0.0)) throw ConfigError("space: eigenvalues must be positive (A >= delta Id)");
        for (double c : h1_weights)
            if (!(c >= 1.0)) throw ConfigError("space: h1 weights must be >= 1");
        return SpectralSpace(std::move(eigenvalues), std::move(h1_weights), false, 0.0);
    }

    /// Eigenpairs of A = -1/2 d²/dr² on (0,1) with Dirichlet conditions:
    /// alpha_j = (j·pi)²/2 and c_j = (j·pi)^{1/2+epsilon}.  The eigenfunction
    /// convention e_j(r) = sqrt(2) sin(j·pi·r) is what the sine-transform
    /// bodies use for grid synthesis.
    static SpectralSpace dirichlet(int dim, double epsilon) {
        if (dim < 1) throw ConfigError("dirichlet preset: dim must be >= 1");
        if (!(epsilon > 0.0 && epsilon <= 1.5))
            throw ConfigError("dirichlet preset: epsilon must lie in (0, 3/2]");
        std::vector<double> eig(dim), w(dim);
        for (int j = 0; j < dim; ++j) {
            const double jpi = (j + 1) * std::numbers::pi;
            eig[j] = 0.5 * jpi * jpi;
            w[j] = std::pow(jpi, 0.5 + epsilon);
        }
        return SpectralSpace(std::move(eig), std::move(w), true, epsilon);
    }

    int dim() const { return static_cast<int>(eigenvalues_.size()); }
    double eigenvalue(int j) const { return eigenvalues_[j]; }
    double h1_weight(int j) const { return h1_weights_[j]; }
    /// q_j = 1/(2 alpha_j), the diagonal of the covariance of mu.
    double covariance(int j) const { return cov_[j]; }
    double covariance_sqrt(int j) const { return cov_sqrt_[j]; }
    double delta() const { return delta_; }
    double max_eigenvalue() const { return alpha_max_; }
    bool is_dirichlet() const { return dirichlet_; }
    double dirichlet_epsilon() const { return epsilon_; }

    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<double>& h1_weights() const { return h1_weights_; }

    /// Trace of Q at this truncation level.
    double covariance_trace() const {
        double s = 0.0;
        for (double q : cov_) s += q;
        return s;
    }

private:
    SpectralSpace(std::vector<double> eig, std::vector<double> w, bool dir, double eps)
        : eigenvalues_(std::move(eig)), h1_weights_(std::move(w)),
          dirichlet_(dir), epsilon_(eps) {
        cov_.resize(eigenvalues_.size());
        cov_sqrt_.resize(eigenvalues_.size());
        delta_ = eigenvalues_[0];
        alpha_max_ = eigenvalues_[0];
        for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
            cov_[j] = 0.5 / eigenvalues_[j];
            cov_sqrt_[j] = std::sqrt(cov_[j]);
            delta_ = std::min(delta_, eigenvalues_[j]);
            alpha_max_ = std::max(alpha_max_, eigenvalues_[j]);
        }
    }

    std::vector<double> eigenvalues_;
    std::vector<double> h1_weights_;
    std::vector<double> cov_;
    std::vector<double> cov_sqrt_;
    double delta_ = 0.0;
    double alpha_max_ = 0.0;
    bool dirichlet_ = false;
    double epsilon_ = 0.0;
};

/// One draw from mu: independent centred Gaussians with variance 1/(2 alpha_j).
inline void sample_mu(const SpectralSpace& space, RngStream& rng, Point& out) {
    out.resize(space.dim());
    for (int j = 0; j < space.dim(); ++j) out[j] = space.covariance_sqrt(j) * rng.normal();
}

inline Point sample_mu(const SpectralSpace& space, RngStream& rng) {
    Point x;
    sample_mu(space, rng, x);
    return x;
}

/// Logarithmic derivative of mu in direction e_i:  beta^mu_{e_i}(x) = -2 alpha_i x_i.
inline double beta_mu(const SpectralSpace& space, int i, const Point& x) {
    if (i < 0 || i >= space.dim()) throw Error("beta_mu: index out of range");
    return -2.0 * space.eigenvalue(i) * x[i];
}

/// Linear drift of the free OU process: component j is -alpha_j x_j.
inline void ou_drift(const SpectralSpace& space, const Point& x, Point& out) {
    out.resize(space.dim());
    for (int j = 0; j < space.dim(); ++j) out[j] = -space.eigenvalue(j) * x[j];
}

inline Point ou_drift(const SpectralSpace& space, const Point& x) {
    Point d;
    ou_drift(space, x, d);
    return d;
}

/// Exact transition of the free OU process over a step of length dt:
/// x_j -> e^{-alpha_j dt} x_j + N(0, q_j (1 - e^{-2 alpha_j dt})).
/// Bias-free for free motion; reflection handling needs the Euler form.
inline void exact_ou_step(const SpectralSpace& space, Point& x, double dt, RngStream& rng) {
    for (int j = 0; j < space.dim(); ++j) {
        const double decay = std::exp(-space.eigenvalue(j) * dt);
        const double sd = std::sqrt(space.covariance(j) * (1.0 - decay * decay));
        x[j] = decay * x[j] + sd * rng.normal();
    }
}

/// |v|_{H1*}² = sum_j v_j² / c_j²  (dual weights 1/c_j).
inline double h1star_norm_sq(const SpectralSpace& space, const Point& v) {
    double s = 0.0;
    for (int j = 0; j < space.dim(); ++j) {
        const double w = v[j] / space.h1_weight(j);
        s += w * w;
    }
    return s;
}

inline double h1star_norm(const SpectralSpace& space, const Point& v) {
    return std::sqrt(h1star_norm_sq(space, v));
}

}  // namespace rou
