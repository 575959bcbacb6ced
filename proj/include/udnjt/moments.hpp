#pragma once

#include <functional>

#include "udnjt/core_model.hpp"

namespace udnjt::moments {

struct PowerStats {
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    Scheme scheme;
    ChannelModel channel;
    AggregateKind kind = AggregateKind::Desired;
};

/// E[X] for the desired, interference or total aggregate (mW).
double mean_power(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind);

/// E[X^2] (mW^2).
double second_moment_power(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind);

/// V[X] = E[X^2] - E[X]^2, with tiny negative round-off clamped to zero.
double variance_power(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind);

PowerStats power_stats(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind);

/// Campbell mean of the aggregate over the annulus [a, c] (every SBS in it transmits).
double campbell_mean(const NetworkParams& p, const ChannelModel& ch, double a, double c);

/// Campbell variance term over [a, c]: 2 pi lambda E[h^2] K^2 P^2 int x^(1-2 alpha) dx.
double campbell_second(const NetworkParams& p, const ChannelModel& ch, double a, double c);

/// E_b[phi(b)] over the exact boundary law of the scheme on the annulus,
/// including the atom at r_m (phi is evaluated at r_m for it).
double boundary_expectation(const NetworkParams& p, const Scheme& s, const std::function<double(double)>& phi);

}  // namespace udnjt::moments
