#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "rou/bodies.hpp"
#include "rou/common.hpp"
#include "rou/spectral.hpp"

namespace rou {

/// Antisymmetric dispersion field Ǎ(x) = (a_ij(x)) driving oblique
/// reflection.  Entries are supplied as callables together with the
/// coordinate derivatives ∂_i a_ij needed by the induced drift; when no
/// analytic derivative is given a central finite difference is used.
class ObliqueField {
public:
    using EntryFn = std::function<double(int, int, const Point&)>;

    static ObliqueField zero(int dim) {
        ObliqueField f;
        f.dim_ = dim;
        f.zero_ = true;
        f.fro_bound_ = 0.0;
        return f;
    }

    /// Constant field from the strictly upper triangle (row-major order
    /// (0,1), (0,2), ..., (d-2,d-1)); the lower triangle is the negation.
    static ObliqueField constant(int dim, const std::vector<double>& upper) {
        const std::size_t expect = static_cast<std::size_t>(dim) * (dim - 1) / 2;
        if (upper.size() != expect)
            throw ConfigError("oblique: constant field needs d(d-1)/2 upper entries");
        ObliqueField f;
        f.dim_ = dim;
        f.matrix_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
        std::size_t u = 0;
        double fro = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                const double v = upper[u++];
                f.matrix_[static_cast<std::size_t>(i) * dim + j] = v;
                f.matrix_[static_cast<std::size_t>(j) * dim + i] = -v;
                fro += 2.0 * v * v;
            }
        f.fro_bound_ = std::sqrt(fro);
        f.zero_ = fro == 0.0;
        return f;
    }

    /// State-dependent field a_ij(x) = s_ij (1 + amplitude sin(x_0)) with s
    /// the constant antisymmetric pattern from the upper triangle.  C^1 with
    /// analytic coordinate derivatives.
    static ObliqueField sine_preset(int dim, const std::vector<double>& upper,
                                    double amplitude) {
        ObliqueField base = constant(dim, upper);
        ObliqueField f;
        f.dim_ = dim;
        f.zero_ = base.zero_;
        f.fro_bound_ = base.fro_bound_ * (1.0 + std::abs(amplitude));
        auto pattern = std::make_shared<std::vector<double>>(base.matrix_);
        const int d = dim;
        f.entry_ = [pattern, amplitude, d](int i, int j, const Point& x) {
            return (*pattern)[static_cast<std::size_t>(i) * d + j] *
                   (1.0 + amplitude * std::sin(x[0]));
        };
        f.d_entry_ = [pattern, amplitude, d](int i, int j, const Point& x) {
            if (i != 0) return 0.0;
            return (*pattern)[static_cast<std::size_t>(i) * d + j] * amplitude *
                   std::cos(x[0]);
        };
        return f;
    }

    static ObliqueField from_callables(int dim, EntryFn entry, EntryFn d_entry,
                                       double fro_bound) {
        ObliqueField f;
        f.dim_ = dim;
        f.zero_ = false;
        f.entry_ = std::move(entry);
        f.d_entry_ = std::move(d_entry);
        f.fro_bound_ = fro_bound;
        return f;
    }

    int dim() const { return dim_; }
    bool is_zero() const { return zero_; }
    double fro_bound() const { return fro_bound_; }
    bool is_constant() const { return !matrix_.empty() || zero_; }

    double entry(int i, int j, const Point& x) const {
        if (zero_) return 0.0;
        if (!matrix_.empty()) return matrix_[static_cast<std::size_t>(i) * dim_ + j];
        return entry_(i, j, x);
    }

    /// ∂_i a_ij(x); finite-difference fallback with h = 1e-5 · scale.
    double d_entry(int i, int j, const Point& x) const {
        if (zero_ || !matrix_.empty()) return 0.0;
        if (d_entry_) return d_entry_(i, j, x);
        const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
        Point xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        return (entry_(i, j, xp) - entry_(i, j, xm)) / (2.0 * h);
    }

    /// out = Ǎ(x) v
    void apply(const Point& x, const Point& v, Point& out) const {
        out.assign(dim_, 0.0);
        if (zero_) return;
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += entry(i, j, x) * v[j];
            out[i] = s;
        }
    }

    /// out = Ǎ(x)^T v
    void apply_transpose(const Point& x, const Point& v, Point& out) const {
        out.assign(dim_, 0.0);
        if (zero_) return;
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += entry(j, i, x) * v[j];
            out[i] = s;
        }
    }

private:
    int dim_ = 0;
    bool zero_ = true;
    double fro_bound_ = 0.0;
    std::vector<double> matrix_;  // constant case, row-major d x d
    EntryFn entry_;
    EntryFn d_entry_;
};

/// Antisymmetric part of the logarithmic derivative of mu:
///   component j of beta^{mu,Ǎ}(x) = sum_i [ (a_ij/2) beta^mu_{e_i}(x) + (∂_i a_ij)/2 ]
/// with beta^mu_{e_i}(x) = -2 alpha_i x_i.  Bounded on bounded bodies only,
/// which is why nonzero fields are rejected on unbounded ones.
inline void beta_mu_A(const ObliqueField& field, const SpectralSpace& space,
                      const Point& x, Point& out) {
    out.assign(space.dim(), 0.0);
    if (field.is_zero()) return;
    for (int j = 0; j < space.dim(); ++j) {
        double s = 0.0;
        for (int i = 0; i < space.dim(); ++i) {
            s += -field.entry(i, j, x) * space.eigenvalue(i) * x[i] +
                 0.5 * field.d_entry(i, j, x);
        }
        out[j] = s;
    }
}

inline Point beta_mu_A(const ObliqueField& field, const SpectralSpace& space,
                       const Point& x) {
    Point b;
    beta_mu_A(field, space, x, b);
    return b;
}

/// Guards the standing boundedness assumption: a nonzero dispersion field on
/// an unbounded body would make beta^{mu,Ǎ} unbounded.
inline void require_bounded_for_field(const ObliqueField& field, const ConvexBody& body) {
    if (!field.is_zero() && !body.bounded())
        throw ConfigError("oblique: nonzero dispersion field requires a bounded body");
}

/// Oblique reflection vector at a boundary point:
///   dir = nu + Ǎ(x)^T nu  with nu = -eta the inward normal.
/// Antisymmetry forces <dir, nu> = 1.
inline void oblique_direction(const ObliqueField& field, const ConvexBody& body,
                              const SpectralSpace& space, const Point& x, Point& out,
                              double boundary_tol = 1e-6) {
    require_bounded_for_field(field, body);
    Point nu = exterior_normal(body, x, boundary_tol);
    for (double& v : nu) v = -v;
    Point av;
    field.apply_transpose(x, nu, av);
    out.resize(space.dim());
    for (int j = 0; j < space.dim(); ++j) out[j] = nu[j] + av[j];
}

inline Point oblique_direction(const ObliqueField& field, const ConvexBody& body,
                               const SpectralSpace& space, const Point& x,
                               double boundary_tol = 1e-6) {
    Point d;
    oblique_direction(field, body, space, x, d, boundary_tol);
    return d;
}

/// Reflection angle theta(x) = arcsin(1 / |nu + Ǎ^T nu|) in (0, pi/2];
/// pi/2 is normal reflection.
inline double reflection_angle(const ObliqueField& field, const ConvexBody& body,
                               const SpectralSpace& space, const Point& x,
                               double boundary_tol = 1e-6) {
    const Point dir = oblique_direction(field, body, space, x, boundary_tol);
    return std::asin(1.0 / norm(dir));
}

/// Tangential component F(x) = sum_k <dir, z_k> z_k of the reflection vector
/// in an orthonormal frame {nu, z_1, ..., z_{d-1}}; dir = nu + F(x).
inline Point tangential_direction(const ObliqueField& field, const ConvexBody& body,
                                  const SpectralSpace& space, const Point& x,
                                  const std::vector<Point>& tangent_frame,
                                  double boundary_tol = 1e-6) {
    const Point dir = oblique_direction(field, body, space, x, boundary_tol);
    Point nu = exterior_normal(body, x, boundary_tol);
    for (double& v : nu) v = -v;
    const double frame_tol = 1e-8;
    for (std::size_t k = 0; k < tangent_frame.size(); ++k) {
        if (std::abs(norm(tangent_frame[k]) - 1.0) > frame_tol)
            throw Error("tangential_direction: frame vector not unit length");
        if (std::abs(dot(tangent_frame[k], nu)) > frame_tol)
            throw Error("tangential_direction: frame vector not orthogonal to the normal");
        for (std::size_t l = 0; l < k; ++l)
            if (std::abs(dot(tangent_frame[k], tangent_frame[l])) > frame_tol)
                throw Error("tangential_direction: frame vectors not orthogonal");
    }
    Point f(space.dim(), 0.0);
    for (const Point& z : tangent_frame) {
        const double c = dot(dir, z);
        for (int j = 0; j < space.dim(); ++j) f[j] += c * z[j];
    }
    return f;
}

/// Completes {nu} to an orthonormal basis by Gram-Schmidt over the
/// coordinate axes; returns the d-1 tangent vectors.
inline std::vector<Point> tangent_frame(const Point& nu) {
    const int d = static_cast<int>(nu.size());
    std::vector<Point> frame;
    frame.reserve(d - 1);
    std::vector<Point> basis{nu};
    for (int j = 0; j < d && static_cast<int>(basis.size()) < d; ++j) {
        Point v(d, 0.0);
        v[j] = 1.0;
        for (const Point& b : basis) {
            const double c = dot(v, b);
            for (int i = 0; i < d; ++i) v[i] -= c * b[i];
        }
        const double n = norm(v);
        if (n > 1e-10) {
            for (double& w : v) w /= n;
            basis.push_back(v);
            frame.push_back(std::move(v));
        }
    }
    return frame;
}

}  // namespace rou
