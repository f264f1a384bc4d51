#pragma once

#include <cmath>
#include <numbers>

// Closed-form helpers for the one-dimensional centred Gaussian N(0, variance).
// These are the analytic targets the Monte Carlo verification suite compares
// against; they are unit-tested against quadrature.

namespace rou::gauss {

inline double pdf(double x, double variance) {
    return std::exp(-0.5 * x * x / variance) /
           std::sqrt(2.0 * std::numbers::pi * variance);
}

inline double cdf(double x, double variance) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

inline double interval_mass(double a, double b, double variance) {
    return cdf(b, variance) - cdf(a, variance);
}

/// ∫_a^∞ x φ(x) dx = variance · φ(a)
inline double upper_partial_mean(double a, double variance) {
    return variance * pdf(a, variance);
}

/// ∫_a^b x φ(x) dx
inline double interval_partial_mean(double a, double b, double variance) {
    return variance * (pdf(a, variance) - pdf(b, variance));
}

/// ∫_a^b x² φ(x) dx = variance·(Φ(b) − Φ(a)) + variance·(a φ(a) − b φ(b))
inline double interval_second_moment(double a, double b, double variance) {
    return variance * interval_mass(a, b, variance) +
           variance * (a * pdf(a, variance) - b * pdf(b, variance));
}

/// E[X² | a < X < b]
inline double truncated_second_moment(double a, double b, double variance) {
    return interval_second_moment(a, b, variance) / interval_mass(a, b, variance);
}

}  // namespace rou::gauss
