#include "udnjt/radii.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace udnjt::radii {

namespace {

double fpd_eta_t(const RadiusDist& d) {
    return eta_t(std::get<scheme::FPD>(d.scheme).eta_db, d.params.alpha_s);
}

void reject_cd(const RadiusDist& d, const char* op) {
    if (std::holds_alternative<scheme::CD>(d.scheme))
        throw DomainError(fmt::format("radii::{}: CD boundary is a point mass", op));
}

}  // namespace

double pdf(const RadiusDist& d, double r) {
    reject_cd(d, "pdf");
    if (!(r > 0.0)) throw DomainError(fmt::format("radii::pdf: r must be > 0 (got {})", r));
    const double pl = std::numbers::pi * d.params.lambda_b;
    switch (d.scheme.index()) {
        case 0: return 2.0 * pl * r * std::exp(-pl * r * r);
        case 1: return 2.0 * pl * pl * r * r * r * std::exp(-pl * r * r);
        default: {
            const double et = fpd_eta_t(d);
            return 2.0 * pl * et * et * r * std::exp(-pl * et * et * r * r);
        }
    }
}

double cdf(const RadiusDist& d, double r) {
    reject_cd(d, "cdf");
    if (r <= 0.0) return 0.0;
    const double pl = std::numbers::pi * d.params.lambda_b;
    switch (d.scheme.index()) {
        case 0: return -std::expm1(-pl * r * r);
        case 1: {
            const double x = pl * r * r;
            return -std::expm1(-x) - x * std::exp(-x);
        }
        default: {
            const double et = fpd_eta_t(d);
            return -std::expm1(-pl * et * et * r * r);
        }
    }
}

double sample(const RadiusDist& d, Rng& rng) {
    const double pl = std::numbers::pi * d.params.lambda_b;
    std::exponential_distribution<double> e1(1.0);
    switch (d.scheme.index()) {
        case 0: return std::sqrt(e1(rng) / pl);
        case 1: {
            const double a = e1(rng);
            const double b = e1(rng);
            return std::sqrt((a + b) / pl);
        }
        case 2: return std::get<scheme::CD>(d.scheme).r_0;
        default: return std::sqrt(e1(rng) / pl) / fpd_eta_t(d);
    }
}

double boundary_from_order_stats(const RadiusDist& d, double r1, double r2) {
    switch (d.scheme.index()) {
        case 0: return r1;
        case 1: return r2;
        case 2: return std::get<scheme::CD>(d.scheme).r_0;
        default: return std::min(r1 / fpd_eta_t(d), d.params.r_m);
    }
}

double annulus_mu(const NetworkParams& p, double r) {
    return std::numbers::pi * p.lambda_b * (r - p.r_l) * (r + p.r_l);
}

double annulus_radius(const NetworkParams& p, double mu) {
    return std::sqrt(p.r_l * p.r_l + mu / (std::numbers::pi * p.lambda_b));
}

double annulus_pdf(const RadiusDist& d, double r) {
    reject_cd(d, "annulus_pdf");
    const auto& p = d.params;
    const double two_pl = 2.0 * std::numbers::pi * p.lambda_b;
    switch (d.scheme.index()) {
        case 0: {
            if (r < p.r_l || r >= p.r_m) return 0.0;
            return two_pl * r * std::exp(-annulus_mu(p, r));
        }
        case 1: {
            if (r < p.r_l || r >= p.r_m) return 0.0;
            const double mu = annulus_mu(p, r);
            return two_pl * r * mu * std::exp(-mu);
        }
        default: {
            const double et = fpd_eta_t(d);
            const double r1 = et * r;
            if (r1 < p.r_l || r >= p.r_m) return 0.0;
            return et * two_pl * r1 * std::exp(-annulus_mu(p, r1));
        }
    }
}

double annulus_atom(const RadiusDist& d) {
    const auto& p = d.params;
    switch (d.scheme.index()) {
        case 0: return std::exp(-annulus_mu(p, p.r_m));
        case 1: {
            const double mu = annulus_mu(p, p.r_m);
            return std::exp(-mu) * (1.0 + mu);
        }
        case 2: return std::get<scheme::CD>(d.scheme).r_0 >= p.r_m ? 1.0 : 0.0;
        default: {
            const double r1 = fpd_eta_t(d) * p.r_m;
            return r1 <= p.r_l ? 1.0 : std::exp(-annulus_mu(p, r1));
        }
    }
}

double annulus_support_lo(const RadiusDist& d) {
    switch (d.scheme.index()) {
        case 2: return std::get<scheme::CD>(d.scheme).r_0;
        case 3: return d.params.r_l / fpd_eta_t(d);
        default: return d.params.r_l;
    }
}

}  // namespace udnjt::radii
