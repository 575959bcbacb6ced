#include "udnjt/core_model.hpp"

#include <cmath>
#include <fmt/format.h>

namespace udnjt {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

void NetworkParams::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(lambda_b) || lambda_b <= 0.0)
        throw DomainError(fmt::format("lambda_b must be > 0 (got {})", lambda_b));
    if (!finite(r_l) || r_l <= 0.0)
        throw DomainError(fmt::format("r_l must be > 0 (got {})", r_l));
    if (!finite(r_m) || r_m <= r_l)
        throw DomainError(fmt::format("r_m must exceed r_l (got r_l={}, r_m={})", r_l, r_m));
    if (!finite(k_s) || k_s <= 0.0)
        throw DomainError(fmt::format("k_s must be > 0 (got {})", k_s));
    if (!finite(alpha_s) || alpha_s < 2.0)
        throw DomainError(fmt::format("alpha_s must be >= 2 (got {})", alpha_s));
    if (!finite(p_s) || p_s <= 0.0)
        throw DomainError(fmt::format("p_s must be > 0 (got {})", p_s));
    if (!finite(n_0) || n_0 < 0.0)
        throw DomainError(fmt::format("n_0 must be >= 0 (got {})", n_0));
}

double dbm_to_mw(double dbm) {
    if (!std::isfinite(dbm)) throw DomainError("dbm_to_mw: non-finite input");
    return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw) {
    if (!std::isfinite(mw) || mw <= 0.0) throw DomainError("mw_to_dbm: input must be finite and > 0");
    return 10.0 * std::log10(mw);
}

double eta_t(double eta_db, double alpha_s) {
    if (!(eta_db >= 0.0) || !std::isfinite(eta_db)) throw DomainError("eta_t: eta must be >= 0");
    if (!(alpha_s >= 2.0) || !std::isfinite(alpha_s)) throw DomainError("eta_t: alpha_s must be >= 2");
    return std::pow(10.0, -eta_db / (10.0 * alpha_s));
}

void validate(const Scheme& s, const NetworkParams& p) {
    std::visit(overloaded{
                   [](const scheme::NoJT&) {},
                   [](const scheme::TwoNS&) {},
                   [&](const scheme::CD& cd) {
                       // r_0 >= r_m is allowed: every SBS cooperates.
                       if (!(cd.r_0 > p.r_l) || !std::isfinite(cd.r_0))
                           throw DomainError(fmt::format("CD radius must satisfy r_0 > r_l (got {})", cd.r_0));
                   },
                   [](const scheme::FPD& f) {
                       if (!(f.eta_db >= 0.0) || !std::isfinite(f.eta_db))
                           throw DomainError(fmt::format("FPD eta must be >= 0 dB (got {})", f.eta_db));
                   },
               },
               s);
}

void validate(const ChannelModel& c) {
    std::visit(overloaded{
                   [](const channel::Constant& k) {
                       if (!(k.h > 0.0) || !std::isfinite(k.h))
                           throw DomainError(fmt::format("constant fade h must be > 0 (got {})", k.h));
                   },
                   [](const channel::Rayleigh&) {},
                   [](const channel::Nakagami& n) {
                       if (!(n.m >= 0.5) || !std::isfinite(n.m))
                           throw DomainError(fmt::format("Nakagami m must be >= 0.5 (got {})", n.m));
                       if (!(n.omega > 0.0) || !std::isfinite(n.omega))
                           throw DomainError(fmt::format("Nakagami omega must be > 0 (got {})", n.omega));
                   },
               },
               c);
}

double fade_mean(const ChannelModel& c) {
    return std::visit(overloaded{
                          [](const channel::Constant& k) { return k.h; },
                          [](const channel::Rayleigh&) { return 1.0; },
                          [](const channel::Nakagami& n) { return n.omega; },
                      },
                      c);
}

double fade_second_moment(const ChannelModel& c) {
    return std::visit(overloaded{
                          [](const channel::Constant& k) { return k.h * k.h; },
                          [](const channel::Rayleigh&) { return 2.0; },
                          [](const channel::Nakagami& n) { return (n.m + 1.0) * n.omega * n.omega / n.m; },
                      },
                      c);
}

int min_points(const Scheme& s) { return std::holds_alternative<scheme::TwoNS>(s) ? 2 : 1; }

std::string to_string(const Scheme& s) {
    return std::visit(overloaded{
                          [](const scheme::NoJT&) { return std::string("NoJT"); },
                          [](const scheme::TwoNS&) { return std::string("2NS"); },
                          [](const scheme::CD& cd) { return fmt::format("CD(r0={})", cd.r_0); },
                          [](const scheme::FPD& f) { return fmt::format("FPD(eta={}dB)", f.eta_db); },
                      },
                      s);
}

std::string to_string(const ChannelModel& c) {
    return std::visit(overloaded{
                          [](const channel::Constant& k) { return fmt::format("Constant(h={})", k.h); },
                          [](const channel::Rayleigh&) { return std::string("Rayleigh"); },
                          [](const channel::Nakagami& n) { return fmt::format("Nakagami(m={},omega={})", n.m, n.omega); },
                      },
                      c);
}

std::string to_string(AggregateKind k) {
    switch (k) {
        case AggregateKind::Desired: return "desired";
        case AggregateKind::Interference: return "interference";
        case AggregateKind::Total: return "total";
    }
    return "?";
}

std::string scheme_tag(const Scheme& s) {
    static const char* tags[] = {"nojt", "2ns", "cd", "fpd"};
    return tags[s.index()];
}

std::string channel_tag(const ChannelModel& c) {
    static const char* tags[] = {"const", "rayleigh", "nakagami"};
    return tags[c.index()];
}

}  // namespace udnjt
