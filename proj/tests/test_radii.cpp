#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "udnjt/radii.hpp"

using namespace udnjt;
using namespace udnjt::radii;
using testing_support::rel_diff;
using testing_support::simpson;

TEST_SUITE("radii") {
    TEST_CASE("untruncated densities integrate to their CDFs") {
        const auto p = testing_support::section5(1e-2);
        for (const Scheme& s : {Scheme{scheme::NoJT{}}, Scheme{scheme::TwoNS{}}, Scheme{scheme::FPD{10.0}}}) {
            const RadiusDist d{s, p};
            CAPTURE(to_string(s));
            for (double r : {1.0, 3.0, 7.5, 15.0}) {
                CHECK(std::abs(simpson([&](double x) { return pdf(d, x); }, 1e-12, r, 4000) - cdf(d, r)) < 1e-10);
            }
            CHECK(std::abs(simpson([&](double x) { return pdf(d, x); }, 1e-12, 200.0, 40000) - 1.0) < 1e-9);
        }
        CHECK_THROWS_AS(pdf(RadiusDist{scheme::CD{}, p}, 1.0), DomainError);
    }

    TEST_CASE("closed forms of the nearest and second-nearest laws") {
        const auto p = testing_support::section5(2.5e-3);
        const double pl = std::numbers::pi * p.lambda_b;
        for (double r = 0.5; r < 40.0; r *= 1.7) {
            CHECK(rel_diff(pdf({scheme::NoJT{}, p}, r), 2.0 * pl * r * std::exp(-pl * r * r)) < 1e-14);
            CHECK(rel_diff(pdf({scheme::TwoNS{}, p}, r), 2.0 * pl * pl * r * r * r * std::exp(-pl * r * r)) < 1e-14);
        }
    }

    TEST_CASE("FPD law is the scaled NoJT law; eta = 0 reduces to NoJT") {
        const auto p = testing_support::section5(1e-2);
        const double et = eta_t(10.0, p.alpha_s);
        for (int i = 1; i <= 20; ++i) {
            const double r = 0.6 * i;
            CHECK(rel_diff(pdf({scheme::FPD{10.0}, p}, r), et * pdf({scheme::NoJT{}, p}, et * r)) < 1e-13);
            CHECK(pdf({scheme::FPD{0.0}, p}, r) == doctest::Approx(pdf({scheme::NoJT{}, p}, r)).epsilon(1e-15));
        }
    }

    TEST_CASE("samplers match the laws") {
        const auto p = testing_support::section5(1e-2);
        Rng rng(5);
        const int n = 200000;
        for (const Scheme& s : {Scheme{scheme::NoJT{}}, Scheme{scheme::TwoNS{}}, Scheme{scheme::FPD{10.0}}}) {
            const RadiusDist d{s, p};
            // Kolmogorov-Smirnov on a coarse grid of CDF values.
            std::vector<double> x(n);
            for (auto& v : x) v = sample(d, rng);
            double ks = 0.0;
            for (double r = 0.5; r < 40.0; r += 0.5) {
                const double emp = static_cast<double>(std::count_if(x.begin(), x.end(), [r](double v) { return v <= r; })) / n;
                ks = std::max(ks, std::abs(emp - cdf(d, r)));
            }
            CAPTURE(to_string(s));
            CHECK(ks < 0.006);
        }
        CHECK(sample({scheme::CD{4.0}, p}, rng) == 4.0);
    }

    TEST_CASE("boundary from order statistics") {
        const auto p = testing_support::section5(1e-2);
        CHECK(boundary_from_order_stats({scheme::NoJT{}, p}, 1.0, 2.0) == 1.0);
        CHECK(boundary_from_order_stats({scheme::TwoNS{}, p}, 1.0, 2.0) == 2.0);
        CHECK(boundary_from_order_stats({scheme::CD{3.0}, p}, 1.0, 2.0) == 3.0);
        CHECK(boundary_from_order_stats({scheme::FPD{10.0}, p}, 1.0, 2.0) ==
              doctest::Approx(1.0 / eta_t(10.0, p.alpha_s)));
        CHECK(boundary_from_order_stats({scheme::FPD{10.0}, p}, 50.0, 55.0) == p.r_m);
    }

    TEST_CASE("annulus law: continuous part plus atom is a probability law") {
        testing_support::Gen g(77);
        for (int i = 0; i < 40; ++i) {
            auto p = g.params();
            p.lambda_b = g.log_uniform(1e-4, 2e-2);
            const Scheme s = i % 3 == 0 ? Scheme{scheme::NoJT{}} : i % 3 == 1 ? Scheme{scheme::TwoNS{}}
                                                                                : Scheme{scheme::FPD{g.uniform(0.0, 15.0)}};
            const RadiusDist d{s, p};
            const double lo = annulus_support_lo(d);
            const double mass = testing_support::simpson_log([&](double r) { return annulus_pdf(d, r); }, lo,
                                                                 std::nextafter(p.r_m, 0.0), 20000);
            CAPTURE(to_string(s));
            CAPTURE(p.lambda_b);
            CHECK(std::abs(mass + annulus_atom(d) - 1.0) < 1e-7);
        }
        const auto p = testing_support::section5(1e-3);
        const double mu_t = annulus_mu(p, p.r_m);
        CHECK(rel_diff(annulus_atom({scheme::NoJT{}, p}), std::exp(-mu_t)) < 1e-14);
        CHECK(rel_diff(annulus_atom({scheme::TwoNS{}, p}), std::exp(-mu_t) * (1.0 + mu_t)) < 1e-14);
        CHECK(annulus_atom({scheme::CD{60.0}, p}) == 1.0);
        CHECK(rel_diff(annulus_radius(p, annulus_mu(p, 7.0)), 7.0) < 1e-14);
    }
}
