#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "rou/common.hpp"

namespace rou {

/// Exponential-martingale accumulator for a change of drift: z is the
/// stochastic integral ∫<v, dW> and qv its quadratic variation ∫|v|² dt,
/// where v = B - beta is the drift difference evaluated along the path.
/// The Radon-Nikodym weight is exp(z - qv/2).
struct GirsanovWeight {
    double z = 0.0;
    double qv = 0.0;
    double weight() const { return std::exp(z - 0.5 * qv); }
};

/// One step of the accumulator; dW must be the same Wiener increment the
/// path stepper consumed.
inline void girsanov_accumulate(GirsanovWeight& w, std::span<const double> v,
                                std::span<const double> dw, double dt) {
    w.z += dot(v, dw);
    w.qv += norm_sq(v) * dt;
}

/// Novikov bound  E[e^{qv/2}] <= exp(T sup|B-beta|² / 2).
inline double novikov_bound(double sup_diff, double t_horizon) {
    return std::exp(0.5 * t_horizon * sup_diff * sup_diff);
}

struct WeightedEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double effective_sample_size = 0.0;
};

/// Self-normalized importance-sampling estimate sum w_i f_i / sum w_i with a
/// delta-method standard error.
inline WeightedEstimate weighted_expectation(std::span<const double> weights,
                                             std::span<const double> values) {
    if (weights.size() != values.size() || weights.empty())
        throw Error("weighted_expectation: need matching, nonempty weights/values");
    double sw = 0.0, sw2 = 0.0, swf = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        sw += weights[i];
        sw2 += weights[i] * weights[i];
        swf += weights[i] * values[i];
    }
    WeightedEstimate e;
    e.value = swf / sw;
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double r = weights[i] * (values[i] - e.value);
        s += r * r;
    }
    e.std_error = std::sqrt(s) / sw;
    e.effective_sample_size = sw * sw / sw2;
    return e;
}

}  // namespace rou
