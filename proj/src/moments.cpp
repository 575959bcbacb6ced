#include "udnjt/moments.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "udnjt/radii.hpp"
#include "udnjt/specfun.hpp"

namespace udnjt::moments {

namespace {

using specfun::inc_gamma;

// Everything is expressed in t = pi*lambda*r^2, in which the PPP has unit
// intensity and the path loss K P r^-alpha becomes B t^-beta.
struct Ctx {
    double pl, tl, tm;
    double alpha, beta;
    double B;
    double m1, m2;
    bool alpha2;  // |alpha - 2| < 1e-9
};

Ctx make_ctx(const NetworkParams& p, const ChannelModel& c) {
    p.validate();
    validate(c);
    Ctx x{};
    x.pl = std::numbers::pi * p.lambda_b;
    x.tl = x.pl * p.r_l * p.r_l;
    x.tm = x.pl * p.r_m * p.r_m;
    x.alpha = p.alpha_s;
    x.beta = 0.5 * p.alpha_s;
    x.B = p.k_s * p.p_s * std::pow(x.pl, x.beta);
    x.m1 = fade_mean(c);
    x.m2 = fade_second_moment(c);
    x.alpha2 = std::abs(p.alpha_s - 2.0) < 1e-9;
    return x;
}

// Integral of t^-k over [x, y].
double pw(double k, double x, double y, bool log_branch) {
    if (y <= x) return 0.0;
    if (log_branch) return std::log(y / x);
    return (std::pow(y, 1.0 - k) - std::pow(x, 1.0 - k)) / (1.0 - k);
}

double pw_beta(const Ctx& x, double a, double b) { return pw(x.beta, a, b, x.alpha2); }
double pw_alpha(const Ctx& x, double a, double b) { return pw(x.alpha, a, b, false); }

double g1_t(const Ctx& x, double ta, double tc) { return x.m1 * x.B * pw_beta(x, ta, tc); }
double g2_t(const Ctx& x, double ta, double tc) { return x.m2 * x.B * x.B * pw_alpha(x, ta, tc); }

double fpd_eta_t(const NetworkParams& p, const Scheme& s) {
    return eta_t(std::get<scheme::FPD>(s).eta_db, p.alpha_s);
}

double cd_t0(const Ctx& x, const NetworkParams& p, const Scheme& s) {
    const double r0 = std::min(std::get<scheme::CD>(s).r_0, p.r_m);
    return x.pl * r0 * r0;
}

// Breakpoints for integrals over [lo, hi] whose integrand varies on the scale of lo.
std::vector<double> graded_points(double lo, double hi) {
    std::vector<double> pts{lo};
    for (double d : {1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 1e3, 1e4}) {
        const double t = lo * (1.0 + d);
        if (t < hi && t > pts.back()) pts.push_back(t);
    }
    for (double d : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
        const double t = lo + d;
        if (t < hi && t > pts.back() * (1.0 + 1e-9)) pts.push_back(t);
    }
    std::sort(pts.begin(), pts.end());
    pts.push_back(hi);
    return pts;
}

constexpr specfun::QuadratureSpec kTight{1e-300, 1e-12, 2000};
constexpr double kTailCut = 80.0;  // e^-80 is far below double resolution of the results

// E[phi(b_t)] over the boundary law, b_t = pi*lambda*b^2; atom evaluated at t_m.
double boundary_t_expectation(const Ctx& x, const NetworkParams& p, const Scheme& s,
                              const std::function<double(double)>& phi) {
    const radii::RadiusDist dist{s, p};
    switch (s.index()) {
        case 2: return phi(cd_t0(x, p, s));
        case 0:
        case 1: {
            const double hi = std::min(x.tm, x.tl + kTailCut);
            const bool two = s.index() == 1;
            auto g = [&](double t) {
                const double w = std::exp(x.tl - t) * (two ? (t - x.tl) : 1.0);
                return w == 0.0 ? 0.0 : w * phi(t);
            };
            double v = specfun::integrate_adaptive<double>(g, graded_points(x.tl, hi), kTight).value;
            return v + radii::annulus_atom(dist) * phi(x.tm);
        }
        default: {
            const double et2 = std::pow(fpd_eta_t(p, s), 2);
            const double hi = std::min(et2 * x.tm, x.tl + kTailCut);
            double v = 0.0;
            if (hi > x.tl) {
                auto g = [&](double t1) { return std::exp(x.tl - t1) * phi(std::min(t1 / et2, x.tm)); };
                v = specfun::integrate_adaptive<double>(g, graded_points(x.tl, hi), kTight).value;
            }
            return v + radii::annulus_atom(dist) * phi(x.tm);
        }
    }
}

// E[b_t^k ; b < r_m] in closed form (NoJT, 2NS, FPD).
double boundary_power_moment(const Ctx& x, const NetworkParams& p, const Scheme& s, double k) {
    const double el = std::exp(x.tl);
    switch (s.index()) {
        case 0: return el * inc_gamma(1.0 + k, x.tl, x.tm);
        case 1: return el * (inc_gamma(2.0 + k, x.tl, x.tm) - x.tl * inc_gamma(1.0 + k, x.tl, x.tm));
        case 3: {
            const double et = fpd_eta_t(p, s);
            const double up = et * et * x.tm;
            if (up <= x.tl) return 0.0;
            return std::pow(et, -2.0 * k) * el * inc_gamma(1.0 + k, x.tl, up);
        }
        default: throw DomainError("boundary_power_moment: CD boundary is deterministic");
    }
}

double desired_mean(const Ctx& x, const NetworkParams& p, const Scheme& s) {
    const double el = std::exp(x.tl);
    const double ob = 1.0 - x.beta;
    switch (s.index()) {
        case 0: return x.m1 * x.B * el * inc_gamma(ob, x.tl, x.tm);
        case 1:
            return x.m1 * x.B * el * ((1.0 - x.tl) * inc_gamma(ob, x.tl, x.tm) + inc_gamma(ob + 1.0, x.tl, x.tm));
        case 2: return g1_t(x, x.tl, cd_t0(x, p, s));
        default: {
            const double et = fpd_eta_t(p, s);
            const double et2 = et * et;
            const double tau = x.tl / et2;  // beyond tau the hole no longer shields the FPD circle
            double v = pw_beta(x, x.tl, std::min(tau, x.tm));
            if (tau < x.tm) v += el * std::pow(et, 2.0 * x.beta - 2.0) * inc_gamma(ob, x.tl, et2 * x.tm);
            return x.m1 * x.B * v;
        }
    }
}

double interference_mean(const Ctx& x, const NetworkParams& p, const Scheme& s) {
    if (s.index() == 2) return g1_t(x, cd_t0(x, p, s), x.tm);
    if (x.alpha2) {
        return boundary_t_expectation(x, p, s, [&](double bt) { return g1_t(x, bt, x.tm); });
    }
    const double ob = 1.0 - x.beta;
    const double inside = 1.0 - radii::annulus_atom({s, p});
    return x.m1 * x.B * (std::pow(x.tm, ob) * inside - boundary_power_moment(x, p, s, ob)) / ob;
}

double desired_second(const Ctx& x, const NetworkParams& p, const Scheme& s) {
    const double el = std::exp(x.tl);
    const double oa = 1.0 - x.alpha;
    const double B2 = x.B * x.B;
    switch (s.index()) {
        case 0: return x.m2 * B2 * el * inc_gamma(oa, x.tl, x.tm);
        case 1: {
            // Sum of squares over the desired set (Mecke) plus the cross term 2 E[h]^2 f(r1) f(r2).
            const double squares =
                x.m2 * B2 * el * ((1.0 - x.tl) * inc_gamma(oa, x.tl, x.tm) + inc_gamma(oa + 1.0, x.tl, x.tm));
            double cross;
            if (x.alpha2) {
                auto g = [&](double t) { return std::exp(x.tl - t) / t * std::log(t / x.tl); };
                const double hi = std::min(x.tm, x.tl + kTailCut);
                cross = specfun::integrate_adaptive<double>(g, graded_points(x.tl, hi), kTight).value;
            } else {
                const double ob = 1.0 - x.beta;
                cross = el * (inc_gamma(oa + 1.0, x.tl, x.tm) - std::pow(x.tl, ob) * inc_gamma(ob, x.tl, x.tm)) / ob;
            }
            return squares + 2.0 * x.m1 * x.m1 * B2 * cross;
        }
        case 2: {
            const double t0 = cd_t0(x, p, s);
            const double g1 = g1_t(x, x.tl, t0);
            return g2_t(x, x.tl, t0) + g1 * g1;
        }
        default: {
            // Nearest SBS plus an independent PPP on (r_1, r_eta] given r_1.
            const double et2 = std::pow(fpd_eta_t(p, s), 2);
            auto g = [&](double t1) {
                const double teta = std::min(t1 / et2, x.tm);
                const double f = x.B * std::pow(t1, -x.beta);
                const double g1 = g1_t(x, t1, teta);
                const double v = x.m2 * f * f + 2.0 * x.m1 * f * g1 + g2_t(x, t1, teta) + g1 * g1;
                return std::exp(x.tl - t1) * v;
            };
            const double hi = std::min(x.tm, x.tl + kTailCut);
            return specfun::integrate_adaptive<double>(g, graded_points(x.tl, hi), kTight).value;
        }
    }
}

double interference_second(const Ctx& x, const NetworkParams& p, const Scheme& s) {
    if (s.index() == 2) {
        const double t0 = cd_t0(x, p, s);
        const double g1 = g1_t(x, t0, x.tm);
        return g2_t(x, t0, x.tm) + g1 * g1;
    }
    if (x.alpha2) {
        return boundary_t_expectation(x, p, s, [&](double bt) {
            const double g1 = g1_t(x, bt, x.tm);
            return g2_t(x, bt, x.tm) + g1 * g1;
        });
    }
    const double ob = 1.0 - x.beta;
    const double oa = 1.0 - x.alpha;
    const double inside = 1.0 - radii::annulus_atom({s, p});
    const double B2 = x.B * x.B;
    const double e_g2 = x.m2 * B2 * (std::pow(x.tm, oa) * inside - boundary_power_moment(x, p, s, oa)) / oa;
    const double tmb = std::pow(x.tm, ob);
    const double e_g1sq = x.m1 * x.m1 * B2 *
                          (tmb * tmb * inside - 2.0 * tmb * boundary_power_moment(x, p, s, ob) +
                           boundary_power_moment(x, p, s, 2.0 * ob)) /
                          (ob * ob);
    return e_g2 + e_g1sq;
}

}  // namespace

double campbell_mean(const NetworkParams& p, const ChannelModel& ch, double a, double c) {
    const Ctx x = make_ctx(p, ch);
    return g1_t(x, x.pl * a * a, x.pl * c * c);
}

double campbell_second(const NetworkParams& p, const ChannelModel& ch, double a, double c) {
    const Ctx x = make_ctx(p, ch);
    return g2_t(x, x.pl * a * a, x.pl * c * c);
}

double boundary_expectation(const NetworkParams& p, const Scheme& s, const std::function<double(double)>& phi) {
    p.validate();
    validate(s, p);
    const Ctx x = make_ctx(p, channel::Constant{1.0});
    return boundary_t_expectation(x, p, s, [&](double bt) { return phi(std::sqrt(bt / x.pl)); });
}

double mean_power(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind) {
    validate(s, p);
    const Ctx x = make_ctx(p, c);
    switch (kind) {
        case AggregateKind::Desired: return desired_mean(x, p, s);
        case AggregateKind::Interference: return interference_mean(x, p, s);
        case AggregateKind::Total: return g1_t(x, x.tl, x.tm);
    }
    return 0.0;
}

double second_moment_power(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind) {
    validate(s, p);
    const Ctx x = make_ctx(p, c);
    switch (kind) {
        case AggregateKind::Desired: return desired_second(x, p, s);
        case AggregateKind::Interference: return interference_second(x, p, s);
        case AggregateKind::Total: {
            const double g1 = g1_t(x, x.tl, x.tm);
            return g2_t(x, x.tl, x.tm) + g1 * g1;
        }
    }
    return 0.0;
}

double variance_power(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind) {
    const double m = mean_power(p, s, c, kind);
    const double m2 = second_moment_power(p, s, c, kind);
    const double v = m2 - m * m;
    if (v < 0.0) {
        if (v < -1e-9 * m2)
            throw NumericError(fmt::format("variance_power: negative variance {} for {} {} {}", v, to_string(s),
                                           to_string(c), to_string(kind)),
                               v, 0.0);
        return 0.0;
    }
    return v;
}

PowerStats power_stats(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind) {
    PowerStats st{};
    st.scheme = s;
    st.channel = c;
    st.kind = kind;
    st.mean = mean_power(p, s, c, kind);
    st.second_moment = second_moment_power(p, s, c, kind);
    st.variance = variance_power(p, s, c, kind);
    return st;
}

}  // namespace udnjt::moments
