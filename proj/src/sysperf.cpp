#include "udnjt/sysperf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "udnjt/mgf.hpp"
#include "udnjt/moments.hpp"
#include "udnjt/specfun.hpp"

namespace udnjt::sysperf {

namespace {

constexpr specfun::QuadratureSpec kLogZ{1e-300, 1e-9, 4000};
// M_I - M_PI is a difference of two values near 1, so each node carries ~1e-16
// absolute round-off; the absolute floor keeps tiny efficiencies reachable.
constexpr specfun::QuadratureSpec kSe{1e-12, 1e-9, 4000};

// Unit-spaced breakpoints in u = ln z over [lo, hi].
std::vector<double> unit_points(double lo, double hi) {
    std::vector<double> pts{lo};
    for (double u = std::ceil(lo); u < hi; u += 1.0)
        if (u > pts.back() + 0.25) pts.push_back(u);
    pts.push_back(hi);
    return pts;
}

// Largest z that matters: where e^{-z N0} is negligible, or a fixed far point
// (relative to the mean interference) when there is no noise.
double z_upper(const NetworkParams& p, double scale_mean) {
    if (p.n_0 > 0.0) return 60.0 / p.n_0;
    return 1e12 / scale_mean;
}

}  // namespace

double mean_sinr(const NetworkParams& p, const Scheme& s, const ChannelModel& c) {
    const double ep = moments::mean_power(p, s, c, AggregateKind::Desired);
    const double den = moments::mean_power(p, s, c, AggregateKind::Interference) + p.n_0;
    if (!(den > 0.0)) throw DomainError(fmt::format("mean_sinr: E[I] + N0 = 0 for {}", to_string(s)));
    return ep / den;
}

double sinr_moment(const NetworkParams& p, const Scheme& s, const ChannelModel& c, int n) {
    if (n != 1 && n != 2) throw DomainError("sinr_moment: n must be 1 or 2");
    const double epn = n == 1 ? moments::mean_power(p, s, c, AggregateKind::Desired)
                              : moments::second_moment_power(p, s, c, AggregateKind::Desired);
    const double ei = moments::mean_power(p, s, c, AggregateKind::Interference);
    const auto mi = mgf::mgf(p, s, c, AggregateKind::Interference);
    const double scale = ei > 0.0 ? ei : 1.0;
    // M_I and e^{-z N0} are both 1 to within 1e-10 below z0.
    const double z0 = 1e-10 / (scale + p.n_0);
    const double z1 = z_upper(p, scale);
    if (p.n_0 == 0.0) {
        const double tail = mi(z1);
        if (tail > std::pow(z1 * scale, -1.5)) {
            throw NumericError(fmt::format("sinr_moment: integral diverges for {} ({}), N0 = 0 and M_I({:.3g}) = {:.3g} "
                                           "decays slower than z^-1.5",
                                           to_string(s), to_string(c), z1, tail),
                               std::numeric_limits<double>::infinity(), tail);
        }
    }
    const double gamma_n = 1.0;  // Gamma(1) = Gamma(2) = 1
    auto g = [&](double u) {
        const double z = std::exp(u);
        return std::pow(z, n) / gamma_n * mi(z) * std::exp(-z * p.n_0);
    };
    const double head = std::pow(z0, n) / (n * gamma_n);
    const auto r = specfun::integrate_adaptive<double>(g, unit_points(std::log(z0), std::log(z1)), kLogZ);
    return epn * (head + r.value);
}

SinrStats sinr_stats(const NetworkParams& p, const Scheme& s, const ChannelModel& c) {
    return {mean_sinr(p, s, c), sinr_moment(p, s, c, 2), s, c};
}

double spectral_efficiency(const NetworkParams& p, const Scheme& s, const ChannelModel& c) {
    validate(s, p);
    const double ep = moments::mean_power(p, s, c, AggregateKind::Desired);
    const double ei = moments::mean_power(p, s, c, AggregateKind::Interference);
    if (ep == 0.0) return 0.0;
    const auto mi = mgf::mgf(p, s, c, AggregateKind::Interference);
    const auto mt = mgf::mgf_total(p, c);
    const double z0 = 1e-8 / (ep + ei + p.n_0);
    const double z1 = z_upper(p, ep + ei);
    if (p.n_0 == 0.0) {
        const double gap = mi(z1) - mt(z1);
        if (gap > 1e-9) {
            throw NumericError(fmt::format("spectral_efficiency: integral diverges for {} ({}) with N0 = 0: "
                                           "M_I - M_PI = {:.3g} at z = {:.3g} (interference is zero with "
                                           "positive probability)",
                                           to_string(s), to_string(c), gap, z1),
                               std::numeric_limits<double>::infinity(), gap);
        }
    }
    auto g = [&](double u) {
        const double z = std::exp(u);
        return (mi(z) - mt(z)) * std::exp(-z * p.n_0);
    };
    const auto r = specfun::integrate_adaptive<double>(g, unit_points(std::log(z0), std::log(z1)), kSe);
    return (ep * z0 + r.value) / std::numbers::ln2;
}

EfficiencyResult area_spectral_efficiency(const NetworkParams& p, double se) {
    p.validate();
    if (!(se >= 0.0)) throw DomainError("area_spectral_efficiency: spectral efficiency must be >= 0");
    const double area = std::numbers::pi * p.r_m * p.r_m;
    const double mu = p.lambda_b * area;
    EfficiencyResult out;
    out.spectral_efficiency = se;
    out.ase_closed = p.lambda_b * se;
    // Sum n P[N = n] for n >= 1 until the remaining Poisson tail is below 1e-12.
    double cum = std::exp(-mu), mean_part = 0.0;
    int n = 0;
    while (n < 100000000) {
        ++n;
        const double pmf = std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
        cum += pmf;
        mean_part += n * pmf;
        if (n > mu && 1.0 - cum < 1e-12) break;
    }
    out.truncation_n = n;
    out.ase_truncated = mean_part * se / area;
    out.ase = std::max(out.ase_truncated, out.ase_closed);
    return out;
}

EfficiencyResult area_spectral_efficiency(const NetworkParams& p, const Scheme& s, const ChannelModel& c) {
    return area_spectral_efficiency(p, spectral_efficiency(p, s, c));
}

}  // namespace udnjt::sysperf
