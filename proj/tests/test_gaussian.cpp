#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "rou/gaussian.hpp"

using namespace rou;
using Catch::Approx;

namespace {

// Simpson quadrature oracle, independent of the closed forms under test.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("pdf and cdf against quadrature") {
    const double var = 0.5;
    REQUIRE(gauss::pdf(0.0, var) == Approx(0.56418958).epsilon(1e-7));
    const double mass = simpson([&](double x) { return gauss::pdf(x, var); }, -8, 1.3);
    REQUIRE(gauss::cdf(1.3, var) == Approx(mass).epsilon(1e-8));
    REQUIRE(gauss::cdf(0.0, var) == Approx(0.5));
}

TEST_CASE("partial means against quadrature") {
    const double var = 0.5;
    const double q = simpson([&](double x) { return x * gauss::pdf(x, var); }, 0.0, 9.0);
    REQUIRE(gauss::upper_partial_mean(0.0, var) == Approx(q).epsilon(1e-8));
    REQUIRE(gauss::upper_partial_mean(0.0, var) == Approx(0.28209479).epsilon(1e-7));

    const double q2 =
        simpson([&](double x) { return x * gauss::pdf(x, 2.0); }, -1.0, 2.0);
    REQUIRE(gauss::interval_partial_mean(-1.0, 2.0, 2.0) == Approx(q2).epsilon(1e-8));
}

TEST_CASE("second moments against quadrature") {
    const double var = 1.0;
    const double q =
        simpson([&](double x) { return x * x * gauss::pdf(x, var); }, -1.0, 1.0);
    REQUIRE(gauss::interval_second_moment(-1.0, 1.0, var) == Approx(q).epsilon(1e-8));
    // truncated N(0,1) second moment on [-1,1]
    REQUIRE(gauss::truncated_second_moment(-1.0, 1.0, 1.0) ==
            Approx(0.29112).epsilon(1e-4));
}

TEST_CASE("boundary density values used by the local-time oracles") {
    // alpha = 1/2 gives variance 1; the perimeter mass of [-1,1] is 2 phi(1)
    REQUIRE(2.0 * gauss::pdf(1.0, 1.0) == Approx(0.48394).epsilon(1e-4));
    // Revuz rate 2 phi(1) / mu([-1,1])
    const double rate = 2.0 * gauss::pdf(1.0, 1.0) / gauss::interval_mass(-1.0, 1.0, 1.0);
    REQUIRE(rate == Approx(0.70887).epsilon(1e-4));
}
