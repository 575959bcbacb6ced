#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "udnjt/core_model.hpp"

namespace udnjt::montecarlo {

using Rng = std::mt19937_64;

/// One PPP draw on the annulus [r_l, r_m], sorted by distance.
struct Realization {
    std::vector<double> radii;
    std::vector<double> fades;  // power-domain fade of the SBS at the same index
    std::size_t count = 0;
};

struct TrialOutcome {
    Scheme scheme;
    double desired_power = 0.0;
    double interference_power = 0.0;
    double sinr = 0.0;  // desired / (interference + N0)
};

enum class Metric { Desired, Interference, Total, Sinr, SpectralEfficiency };
std::string to_string(Metric m);

struct Collectors {
    bool variance = false;
    std::vector<double> mgf_z;            // empirical E[exp(-z X)] for the power metrics
    std::vector<double> histogram_edges;  // ascending; applied to the power metrics
    bool sinr = false;                    // also collects log2(1 + SINR)
};

struct EmpiricalStats {
    std::size_t n_trials = 0;
    double mean = 0.0;
    double standard_error = 0.0;  // sample std / sqrt(n)
    double variance = 0.0;        // unbiased sample variance
    double variance_se = 0.0;     // jackknife standard error of the variance
    std::vector<double> mgf_at;   // one per Collectors::mgf_z
    std::vector<double> mgf_se;
    std::vector<double> histogram;  // bin mass; with below/above it sums to 1
    double histogram_below = 0.0;
    double histogram_above = 0.0;
};

struct SchemeStats {
    Scheme scheme;
    EmpiricalStats desired, interference, total, sinr, spectral_efficiency;
    const EmpiricalStats& get(Metric m) const;
};

struct ExperimentResult {
    ChannelModel channel;
    std::vector<SchemeStats> schemes;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
    std::size_t resampled = 0;  // realizations discarded for having too few points
};

/// Poisson count on the annulus, radii by the exact inverse CDF, fades from
/// the channel. Realizations with fewer than min_points SBSs are redrawn.
Realization sample_realization(const NetworkParams& p, const ChannelModel& c, Rng& rng, int min_points,
                               std::size_t* resampled = nullptr);

/// Splits each scheme's desired set off by its boundary (inclusive); the
/// same fades serve every scheme.
std::vector<TrialOutcome> evaluate_schemes(const Realization& r, const std::vector<Scheme>& schemes,
                                           const ChannelModel& c, const NetworkParams& p);

/// Trials are split into fixed shards of kShardSize with their own streams
/// seeded from (seed, shard), so the result does not depend on `workers`.
inline constexpr std::size_t kShardSize = 4096;
ExperimentResult run_experiment(const NetworkParams& p, const std::vector<Scheme>& schemes, const ChannelModel& c,
                                std::size_t n_trials, std::uint64_t seed, const Collectors& collectors = {},
                                int workers = 0);

/// Streaming moments up to order 4 (mergeable).
struct RunningMoments {
    double n = 0.0, mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    void add(double x);
    static RunningMoments merge(const RunningMoments& a, const RunningMoments& b);
    double variance() const;     // m2 / (n - 1)
    double variance_se() const;  // jackknife
};

}  // namespace udnjt::montecarlo
