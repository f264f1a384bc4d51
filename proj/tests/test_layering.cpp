#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "rou/layering.hpp"
#include "rou/rng.hpp"
#include "rou/spectral.hpp"

using namespace rou;
using Catch::Approx;

namespace {

std::shared_ptr<SkewLayering> p_skew_layering(const SpectralSpace& space, double p) {
    // single membrane at 0: rho = (1-p)/p inside, 1 outside
    std::vector<std::shared_ptr<const ConvexBody>> bodies{
        std::make_shared<HalfspaceBody>(Point{1.0}, 0.0)};
    return make_layering(space, bodies, {(1.0 - p) / p}, 1.0);
}

}  // namespace

TEST_CASE("p-skew layering reproduces the single-membrane density") {
    auto space = SpectralSpace::make({1.0}, {1.0});
    const double p = 0.7;
    auto lay = p_skew_layering(space, p);

    REQUIRE(lay->rho({-0.5}) == Approx(3.0 / 7.0));
    REQUIRE(lay->rho({0.5}) == Approx(1.0));
    REQUIRE(lay->skew_prob(0) == Approx(p));
    REQUIRE(2.0 * lay->skew_prob(0) - 1.0 == Approx(0.4));
    REQUIRE_THROWS_AS(lay->skew_prob(1), Error);
}

TEST_CASE("skew probabilities from the weight ratio") {
    auto space = SpectralSpace::make({1.0, 1.0}, {1.0, 1.0});
    std::vector<std::shared_ptr<const ConvexBody>> bodies{
        std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 1.0}),
        std::make_shared<EllipsoidBody>(std::vector<double>{2.0, 2.0})};
    auto lay = make_layering(space, bodies, {1.0, 3.0}, 3.0);
    REQUIRE(lay->skew_prob(0) == Approx(0.75));
    REQUIRE(2.0 * lay->skew_prob(0) - 1.0 == Approx(0.5));
    // equal weights across the outer membrane: p = 1/2
    REQUIRE(lay->skew_prob(1) == Approx(0.5));
    // swapping the roles of the two weights gives the complementary p
    auto swapped = make_layering(space, bodies, {3.0, 1.0}, 3.0);
    REQUIRE(lay->skew_prob(0) + swapped->skew_prob(0) == Approx(1.0));

    REQUIRE(lay->rho({0.5, 0.0}) == Approx(1.0));
    REQUIRE(lay->rho({1.5, 0.0}) == Approx(3.0));
    REQUIRE(lay->rho({5.0, 0.0}) == Approx(3.0));
}

TEST_CASE("constant weights mean no skew") {
    auto space = SpectralSpace::make({1.0}, {1.0});
    std::vector<std::shared_ptr<const ConvexBody>> bodies{
        std::make_shared<HalfspaceBody>(Point{1.0}, 0.0)};
    auto lay = make_layering(space, bodies, {2.0}, 2.0);
    RngStream rng(4, 0, 0);
    Point x(1);
    for (int i = 0; i < 100; ++i) {
        x[0] = 4.0 * (rng.uniform() - 0.5);
        REQUIRE(lay->rho(x) == Approx(2.0));
    }
    REQUIRE(lay->skew_prob(0) == Approx(0.5));
}

TEST_CASE("rho stays within the declared band") {
    auto space = SpectralSpace::make({1.0, 1.0}, {1.0, 1.0});
    std::vector<std::shared_ptr<const ConvexBody>> bodies{
        std::make_shared<EllipsoidBody>(std::vector<double>{0.5, 0.5}),
        std::make_shared<EllipsoidBody>(std::vector<double>{1.2, 1.2})};
    auto lay = make_layering(space, bodies, {0.5, 2.0}, 1.0);
    RngStream rng(6, 0, 0);
    Point x;
    for (int i = 0; i < 2000; ++i) {
        sample_mu(space, rng, x);
        const double r = lay->rho(x);
        REQUIRE(r >= 1.0 / lay->c0() - 1e-12);
        REQUIRE(r <= lay->c0() + 1e-12);
    }
    // declared band too tight
    REQUIRE_THROWS_AS(make_layering(space, bodies, {0.5, 2.0}, 1.0, 1.5), ConfigError);
}

TEST_CASE("non-nested bodies are rejected") {
    auto space = SpectralSpace::make({1.0, 1.0}, {1.0, 1.0});
    std::vector<std::shared_ptr<const ConvexBody>> bad{
        std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 0.3}),
        std::make_shared<EllipsoidBody>(std::vector<double>{0.3, 1.0})};
    REQUIRE_THROWS_AS(make_layering(space, bad, {1.0, 2.0}, 2.0), ConfigError);

    std::vector<std::shared_ptr<const ConvexBody>> same{
        std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 1.0}),
        std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 1.0})};
    REQUIRE_THROWS_AS(make_layering(space, same, {1.0, 2.0}, 2.0), ConfigError);

    REQUIRE_THROWS_AS(make_layering(space, {}, {}, 1.0), ConfigError);
}

TEST_CASE("finite-window variation sum is reported") {
    auto space = SpectralSpace::make({1.0, 1.0}, {1.0, 1.0});
    std::vector<std::shared_ptr<const ConvexBody>> bodies{
        std::make_shared<EllipsoidBody>(std::vector<double>{1.0, 1.0})};
    auto lay = make_layering(space, bodies, {3.0 / 7.0}, 1.0);
    RngStream rng(12, 0, 0);
    const double v = variation_sum_estimate(*lay, space, rng, 4000);
    // |1 - 3/7| times the perimeter mass of the unit disk; positive, finite
    REQUIRE(v > 0.0);
    REQUIRE(std::isfinite(v));
}
