#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "udnjt/core_model.hpp"

namespace testing_support {

/// Hand-rolled generator for property tests; fixed seed per test.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    udnjt::NetworkParams params() {
        udnjt::NetworkParams p;
        p.lambda_b = log_uniform(5e-4, 2e-2);
        p.r_l = uniform(0.05, 1.0);
        p.r_m = uniform(20.0, 80.0);
        p.alpha_s = uniform(2.2, 4.5);
        p.p_s = udnjt::dbm_to_mw(uniform(10.0, 25.0));
        return p;
    }
    udnjt::Scheme scheme() {
        switch (integer(0, 3)) {
            case 0: return udnjt::scheme::NoJT{};
            case 1: return udnjt::scheme::TwoNS{};
            case 2: return udnjt::scheme::CD{uniform(1.5, 10.0)};
            default: return udnjt::scheme::FPD{uniform(0.5, 15.0)};
        }
    }
    udnjt::ChannelModel channel() {
        switch (integer(0, 2)) {
            case 0: return udnjt::channel::Constant{uniform(0.5, 3.0)};
            case 1: return udnjt::channel::Rayleigh{};
            default: return udnjt::channel::Nakagami{uniform(0.5, 4.0), uniform(0.5, 2.0)};
        }
    }

private:
    std::mt19937_64 rng_;
};

/// Composite Simpson rule on [a, b] with n (even) panels; the reference
/// integrator for test oracles, independent of the library's quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Simpson in u = ln x over [a, b] (a > 0), for integrands spread over decades.
inline double simpson_log(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    // exp(log(b)) can round past b; clamp so a density cut off at b is not lost at the end point.
    return simpson([&](double u) { const double x = std::clamp(std::exp(u), a, b); return f(x) * x; }, std::log(a),
                   std::log(b), n);
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline const std::vector<udnjt::Scheme>& all_schemes() {
    static const std::vector<udnjt::Scheme> s{udnjt::scheme::NoJT{}, udnjt::scheme::TwoNS{}, udnjt::scheme::CD{3.0},
                                              udnjt::scheme::FPD{10.0}};
    return s;
}

inline const std::vector<udnjt::ChannelModel>& all_channels() {
    static const std::vector<udnjt::ChannelModel> c{udnjt::channel::Constant{1.0}, udnjt::channel::Rayleigh{},
                                                    udnjt::channel::Nakagami{2.0, 1.0}};
    return c;
}

/// Section V scenario at a given density.
inline udnjt::NetworkParams section5(double lambda) {
    udnjt::NetworkParams p;
    p.lambda_b = lambda;
    return p;
}

}  // namespace testing_support
