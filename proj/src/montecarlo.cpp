#include "udnjt/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "udnjt/parallel.hpp"

namespace udnjt::montecarlo {

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Desired: return "desired";
        case Metric::Interference: return "interference";
        case Metric::Total: return "total";
        case Metric::Sinr: return "sinr";
        case Metric::SpectralEfficiency: return "se";
    }
    return "?";
}

const EmpiricalStats& SchemeStats::get(Metric m) const {
    switch (m) {
        case Metric::Desired: return desired;
        case Metric::Interference: return interference;
        case Metric::Total: return total;
        case Metric::Sinr: return sinr;
        case Metric::SpectralEfficiency: return spectral_efficiency;
    }
    return desired;
}

void RunningMoments::add(double x) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - mean;
    const double dn = delta / n;
    const double dn2 = dn * dn;
    const double t1 = delta * dn * n1;
    mean += dn;
    m4 += t1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += t1 * dn * (n - 2.0) - 3.0 * dn * m2;
    m2 += t1;
}

RunningMoments RunningMoments::merge(const RunningMoments& a, const RunningMoments& b) {
    if (a.n == 0.0) return b;
    if (b.n == 0.0) return a;
    RunningMoments r;
    r.n = a.n + b.n;
    const double d = b.mean - a.mean;
    const double d2 = d * d, d3 = d2 * d, d4 = d2 * d2;
    const double na = a.n, nb = b.n, n = r.n;
    r.mean = a.mean + d * nb / n;
    r.m2 = a.m2 + b.m2 + d2 * na * nb / n;
    r.m3 = a.m3 + b.m3 + d3 * na * nb * (na - nb) / (n * n) + 3.0 * d * (na * b.m2 - nb * a.m2) / n;
    r.m4 = a.m4 + b.m4 + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
           6.0 * d2 * (na * na * b.m2 + nb * nb * a.m2) / (n * n) + 4.0 * d * (na * b.m3 - nb * a.m3) / n;
    return r;
}

double RunningMoments::variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }

double RunningMoments::variance_se() const {
    if (n < 3.0) return 0.0;
    const double v = n * (m4 - m2 * m2 / n) / ((n - 1.0) * (n - 2.0) * (n - 2.0));
    return std::sqrt(std::max(0.0, v));
}

namespace {

double draw_fade(const ChannelModel& c, Rng& rng) {
    switch (c.index()) {
        case 0: return std::get<channel::Constant>(c).h;
        case 1: return std::exponential_distribution<double>(1.0)(rng);
        default: {
            const auto& n = std::get<channel::Nakagami>(c);
            return std::gamma_distribution<double>(n.m, n.omega / n.m)(rng);
        }
    }
}

double boundary(const Scheme& s, const Realization& r, const NetworkParams& p) {
    switch (s.index()) {
        case 0: return r.radii[0];
        case 1: return r.radii[1];
        case 2: return std::get<scheme::CD>(s).r_0;
        default: return std::min(r.radii[0] / eta_t(std::get<scheme::FPD>(s).eta_db, p.alpha_s), p.r_m);
    }
}

}  // namespace

Realization sample_realization(const NetworkParams& p, const ChannelModel& c, Rng& rng, int min_points,
                               std::size_t* resampled) {
    if (min_points < 0) throw DomainError("sample_realization: min_points must be >= 0");
    const double rl2 = p.r_l * p.r_l, span = p.r_m * p.r_m - rl2;
    const double mean_count = p.lambda_b * std::numbers::pi * span;
    std::poisson_distribution<long> count_dist(mean_count);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const auto count = static_cast<std::size_t>(count_dist(rng));
        if (count < static_cast<std::size_t>(min_points)) {
            if (resampled) ++*resampled;
            continue;
        }
        std::vector<std::pair<double, double>> pts(count);
        for (auto& pt : pts) {
            pt.first = std::sqrt(rl2 + unif(rng) * span);
            pt.second = draw_fade(c, rng);
        }
        std::sort(pts.begin(), pts.end());
        Realization r;
        r.count = count;
        r.radii.reserve(count);
        r.fades.reserve(count);
        for (const auto& pt : pts) {
            r.radii.push_back(pt.first);
            r.fades.push_back(pt.second);
        }
        return r;
    }
    throw NumericError(fmt::format("sample_realization: no realization with >= {} points in 1e6 attempts "
                                   "(expected count {:.3g})",
                                   min_points, mean_count),
                       mean_count, 0.0);
}

std::vector<TrialOutcome> evaluate_schemes(const Realization& r, const std::vector<Scheme>& schemes,
                                           const ChannelModel&, const NetworkParams& p) {
    const double kp = p.k_s * p.p_s;
    std::vector<double> power(r.count);
    for (std::size_t i = 0; i < r.count; ++i) power[i] = kp * r.fades[i] * std::pow(r.radii[i], -p.alpha_s);
    std::vector<TrialOutcome> out;
    out.reserve(schemes.size());
    for (const auto& s : schemes) {
        if (r.count < static_cast<std::size_t>(min_points(s)))
            throw DomainError(fmt::format("evaluate_schemes: {} needs {} points", udnjt::to_string(s), min_points(s)));
        const double b = boundary(s, r, p);
        const auto inside =
            static_cast<std::size_t>(std::upper_bound(r.radii.begin(), r.radii.end(), b) - r.radii.begin());
        TrialOutcome o;
        o.scheme = s;
        for (std::size_t i = 0; i < inside; ++i) o.desired_power += power[i];
        for (std::size_t i = inside; i < r.count; ++i) o.interference_power += power[i];
        o.sinr = o.desired_power / (o.interference_power + p.n_0);
        out.push_back(o);
    }
    return out;
}

namespace {

struct MetricAcc {
    RunningMoments moments;
    std::vector<RunningMoments> mgf;
    std::vector<std::uint64_t> bins;
    std::uint64_t below = 0, above = 0;

    void init(const Collectors& c, bool power) {
        if (!power) return;
        mgf.assign(c.mgf_z.size(), {});
        if (c.histogram_edges.size() >= 2) bins.assign(c.histogram_edges.size() - 1, 0);
    }
    void add(double x, const Collectors& c) {
        moments.add(x);
        for (std::size_t k = 0; k < mgf.size(); ++k) mgf[k].add(std::exp(-c.mgf_z[k] * x));
        if (!bins.empty()) {
            const auto& e = c.histogram_edges;
            if (x < e.front()) {
                ++below;
            } else if (x >= e.back()) {
                ++above;
            } else {
                const auto i = std::upper_bound(e.begin(), e.end(), x) - e.begin() - 1;
                ++bins[static_cast<std::size_t>(i)];
            }
        }
    }
    void merge(const MetricAcc& o) {
        moments = RunningMoments::merge(moments, o.moments);
        for (std::size_t k = 0; k < mgf.size(); ++k) mgf[k] = RunningMoments::merge(mgf[k], o.mgf[k]);
        for (std::size_t k = 0; k < bins.size(); ++k) bins[k] += o.bins[k];
        below += o.below;
        above += o.above;
    }
    EmpiricalStats finish(const Collectors& c) const {
        EmpiricalStats s;
        s.n_trials = static_cast<std::size_t>(moments.n);
        s.mean = moments.mean;
        s.variance = moments.variance();
        s.standard_error = std::sqrt(s.variance / moments.n);
        if (c.variance) s.variance_se = moments.variance_se();
        for (const auto& m : mgf) {
            s.mgf_at.push_back(m.mean);
            s.mgf_se.push_back(std::sqrt(m.variance() / m.n));
        }
        const double n = moments.n;
        for (auto b : bins) s.histogram.push_back(static_cast<double>(b) / n);
        s.histogram_below = static_cast<double>(below) / n;
        s.histogram_above = static_cast<double>(above) / n;
        return s;
    }
};

constexpr int kMetrics = 5;

struct ShardAcc {
    std::vector<std::array<MetricAcc, kMetrics>> per_scheme;
    std::size_t resampled = 0;

    ShardAcc(std::size_t schemes, const Collectors& c) : per_scheme(schemes) {
        for (auto& a : per_scheme)
            for (int m = 0; m < kMetrics; ++m) a[m].init(c, m < 3);
    }
    void merge(const ShardAcc& o) {
        for (std::size_t s = 0; s < per_scheme.size(); ++s)
            for (int m = 0; m < kMetrics; ++m) per_scheme[s][m].merge(o.per_scheme[s][m]);
        resampled += o.resampled;
    }
};

}  // namespace

ExperimentResult run_experiment(const NetworkParams& p, const std::vector<Scheme>& schemes, const ChannelModel& c,
                                std::size_t n_trials, std::uint64_t seed, const Collectors& collectors, int workers) {
    p.validate();
    validate(c);
    if (schemes.empty()) throw DomainError("run_experiment: empty scheme list");
    for (const auto& s : schemes) validate(s, p);
    if (n_trials < 100) throw DomainError("run_experiment: n_trials must be >= 100");
    if (!std::is_sorted(collectors.histogram_edges.begin(), collectors.histogram_edges.end()))
        throw DomainError("run_experiment: histogram edges must be ascending");
    int need = 0;
    for (const auto& s : schemes) need = std::max(need, min_points(s));

    const std::size_t shards = (n_trials + kShardSize - 1) / kShardSize;
    std::vector<ShardAcc> acc(shards, ShardAcc(schemes.size(), collectors));
    parallel_for(
        shards,
        [&](std::size_t shard) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
            Rng rng(seq);
            auto& a = acc[shard];
            const std::size_t begin = shard * kShardSize, end = std::min(n_trials, begin + kShardSize);
            for (std::size_t t = begin; t < end; ++t) {
                const auto r = sample_realization(p, c, rng, need, &a.resampled);
                const auto outcomes = evaluate_schemes(r, schemes, c, p);
                for (std::size_t s = 0; s < schemes.size(); ++s) {
                    const auto& o = outcomes[s];
                    auto& m = a.per_scheme[s];
                    m[0].add(o.desired_power, collectors);
                    m[1].add(o.interference_power, collectors);
                    m[2].add(o.desired_power + o.interference_power, collectors);
                    if (collectors.sinr) {
                        m[3].add(o.sinr, collectors);
                        m[4].add(std::log2(1.0 + o.sinr), collectors);
                    }
                }
            }
        },
        workers > 0 ? workers : worker_count());

    // Fixed pairwise tree over shard indices.
    for (std::size_t stride = 1; stride < shards; stride *= 2)
        for (std::size_t i = 0; i + stride < shards; i += 2 * stride) acc[i].merge(acc[i + stride]);

    ExperimentResult out;
    out.channel = c;
    out.n_trials = n_trials;
    out.seed = seed;
    out.resampled = acc[0].resampled;
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        const auto& m = acc[0].per_scheme[s];
        SchemeStats st;
        st.scheme = schemes[s];
        st.desired = m[0].finish(collectors);
        st.interference = m[1].finish(collectors);
        st.total = m[2].finish(collectors);
        if (collectors.sinr) {
            st.sinr = m[3].finish(collectors);
            st.spectral_efficiency = m[4].finish(collectors);
        }
        out.schemes.push_back(std::move(st));
    }
    return out;
}

}  // namespace udnjt::montecarlo
