#pragma once

#include "udnjt/core_model.hpp"

namespace udnjt::sysperf {

struct SinrStats {
    double mean_sinr = 0.0;      // E[P] / (E[I] + N0)
    double second_moment = 0.0;  // E[P^2] * int z M_I(z) e^{-z N0} dz
    Scheme scheme;
    ChannelModel channel;
};

struct EfficiencyResult {
    double spectral_efficiency = 0.0;  // bit/s/Hz
    double ase = 0.0;                  // bit/s/Hz/m^2, larger of the two paths below
    double ase_truncated = 0.0;        // Poisson sum over n >= 1
    double ase_closed = 0.0;           // lambda_b * S
    int truncation_n = 0;              // last n included in the Poisson sum
};

/// Ratio of means E[P] / (E[I] + N0).
double mean_sinr(const NetworkParams& p, const Scheme& s, const ChannelModel& c);

/// E[P^n] * int_0^inf z^{n-1}/Gamma(n) M_I(z) e^{-z N0} dz for n in {1, 2}.
double sinr_moment(const NetworkParams& p, const Scheme& s, const ChannelModel& c, int n);

SinrStats sinr_stats(const NetworkParams& p, const Scheme& s, const ChannelModel& c);

/// (1/ln 2) int_0^inf (M_I(z) - M_{P+I}(z)) e^{-z N0} / z dz.
double spectral_efficiency(const NetworkParams& p, const Scheme& s, const ChannelModel& c);

/// ASE from a given spectral efficiency (Poisson number of SBSs in the disk of radius r_m).
EfficiencyResult area_spectral_efficiency(const NetworkParams& p, double spectral_efficiency);

EfficiencyResult area_spectral_efficiency(const NetworkParams& p, const Scheme& s, const ChannelModel& c);

}  // namespace udnjt::sysperf
