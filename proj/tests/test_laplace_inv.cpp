#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "udnjt/laplace_inv.hpp"
#include "udnjt/moments.hpp"

using namespace udnjt;
using namespace udnjt::laplace_inv;
using cd = std::complex<double>;

TEST_SUITE("laplace_inv") {
    TEST_CASE("known transform pairs") {
        SUBCASE("exponential") {
            for (double x = 0.05; x < 12.0; x *= 1.3) {
                CHECK(std::abs(invert_point([](cd s) { return 1.0 / (1.0 + s); }, x).value - std::exp(-x)) < 1e-7);
            }
        }
        SUBCASE("Erlang-2") {
            for (double x = 0.05; x < 12.0; x *= 1.3) {
                const double v = invert_point([](cd s) { return 1.0 / ((1.0 + s) * (1.0 + s)); }, x).value;
                CHECK(std::abs(v - x * std::exp(-x)) < 1e-7);
            }
        }
        SUBCASE("gamma with shape 1/2") {
            for (double x = 0.2; x < 8.0; x *= 1.4) {
                const double v = invert_point([](cd s) { return 1.0 / std::sqrt(1.0 + s); }, x).value;
                CHECK(std::abs(v - std::exp(-x) / std::sqrt(std::numbers::pi * x)) < 1e-6);
            }
        }
        SUBCASE("shifted exponential, away from the jump at 1") {
            // The jump causes Gibbs-type error within about one unit of x = 1.
            auto f = [](cd s) { return std::exp(-s) / (1.0 + s); };
            for (double x : {0.1, 0.3, 0.6}) CHECK(std::abs(invert_point(f, x).value) < 1e-5);
            for (double x : {2.0, 3.0, 4.0, 5.0}) CHECK(std::abs(invert_point(f, x).value - std::exp(1.0 - x)) < 2e-5);
        }
    }

    TEST_CASE("narrow Gaussian peak") {
        const double mu = 10.0, sigma = 0.5;
        auto f = [&](cd s) { return std::exp(-s * mu + s * s * sigma * sigma / 2.0); };
        const double peak = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
        for (double x = 8.0; x <= 12.0; x += 0.25) {
            const double exact = peak * std::exp(-(x - mu) * (x - mu) / (2.0 * sigma * sigma));
            CHECK(std::abs(invert_point(f, x).value - exact) < 1e-6 * peak);
        }
    }

    TEST_CASE("a transform whose partial sums diverge is reported") {
        auto f = [](cd s) { return std::exp(-s * s); };
        CHECK_THROWS_AS(invert_transform(f, {1.0, 2.0}), NumericError);
        CHECK_THROWS_AS(invert_point(f, 0.0), DomainError);
    }

    TEST_CASE("default grid") {
        const auto g = default_grid(3.0);
        REQUIRE(g.size() == 200);
        CHECK(g.front() == doctest::Approx(3e-4));
        CHECK(g.back() == doctest::Approx(60.0));
        for (std::size_t i = 2; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]));
    }

    TEST_CASE("bin masses integrate the linear interpolant exactly") {
        PdfCurve c;
        c.grid = {0.0, 1.0, 2.0};
        c.density = {0.0, 1.0, 0.0};
        const auto m = bin_masses(c, {-1.0, 0.5, 1.0, 1.5, 3.0});
        REQUIRE(m.size() == 4);
        CHECK(m[0] == doctest::Approx(0.125));
        CHECK(m[1] == doctest::Approx(0.375));
        CHECK(m[2] == doctest::Approx(0.375));
        CHECK(m[3] == doctest::Approx(0.125));
    }

    TEST_CASE("interference density, CD with Rayleigh fading") {
        auto p = testing_support::section5(1e-2);
        p.alpha_s = 2.0;
        const Scheme s = scheme::CD{3.0};
        const ChannelModel c = channel::Rayleigh{};
        const double mean = moments::mean_power(p, s, c, AggregateKind::Interference);
        const auto curve = invert_auto(mgf::mgf(p, s, c, AggregateKind::Interference), mean);
        CHECK(std::abs(curve.mass_check - 1.0) < 2e-3);
        CHECK(std::abs(curve.mean_check / mean - 1.0) < 1e-2);
        for (double d : curve.density) CHECK(d >= 0.0);
        // Tail criterion of invert_auto.
        double peak = 0.0;
        for (std::size_t i = 0; i < curve.grid.size(); ++i) peak = std::max(peak, curve.grid[i] * curve.density[i]);
        CHECK(curve.grid.back() * curve.density.back() < 1e-4 * peak);
    }
}
