#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rou {

/// Coordinates of a state in the eigenbasis of the drift operator A.
using Point = std::vector<double>;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid experiment configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// A boundary root-find did not converge; signals a step too large.
struct SolverError : Error {
    using Error::Error;
};

/// The thin-shell surface sampler collected fewer hits than the configured minimum.
struct ShellStarvationError : Error {
    using Error::Error;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(dist_sq(a, b));
}

/// Running mean / standard error over a stream of scalar samples.
class MeanAccumulator {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }
    long count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_error() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace rou
