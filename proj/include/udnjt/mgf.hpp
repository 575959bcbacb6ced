#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "udnjt/core_model.hpp"

namespace udnjt::mgf {

/// How the annulus exponent 2*pi*lambda * int (1 - L_h(z f(x))) x dx is computed.
enum class InnerMethod {
    Auto,        // closed form where one exists (constant h; Rayleigh alpha=2/4; Nakagami m=2, alpha=2)
    Quadrature,  // always adaptive quadrature
};

/// z -> E[exp(-z X)] for one aggregate, with its metadata. Immutable; eval is
/// safe to call concurrently (per-z caches live on the call stack).
class MgfFn {
public:
    using RealFn = std::function<double(double)>;
    using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

    MgfFn(NetworkParams params, Scheme scheme, ChannelModel channel, AggregateKind kind, RealFn real,
          ComplexFn complex);

    /// Real evaluation; z >= 0, small negative z is accepted for derivatives at 0.
    double eval(double z) const;
    double operator()(double z) const { return eval(z); }

    /// Analytic continuation for Re(z) >= 0 (used by numerical Laplace inversion).
    std::complex<double> eval(std::complex<double> z) const;
    bool has_complex() const { return static_cast<bool>(complex_); }

    const NetworkParams& params() const { return params_; }
    const Scheme& scheme() const { return scheme_; }
    const ChannelModel& channel() const { return channel_; }
    AggregateKind kind() const { return kind_; }

private:
    NetworkParams params_;
    Scheme scheme_;
    ChannelModel channel_;
    AggregateKind kind_;
    RealFn real_;
    ComplexFn complex_;
};

MgfFn mgf(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind,
          InnerMethod method = InnerMethod::Auto);

/// MGF of the total received power over the whole annulus (scheme independent).
MgfFn mgf_total(const NetworkParams& p, const ChannelModel& c, InnerMethod method = InnerMethod::Auto);

/// Annulus exponent 2*pi*lambda*int_a^c (1 - L_h(z K P x^-alpha)) x dx.
/// a may be 0 and c may be +inf (when alpha > 2).
double annulus_exponent(const NetworkParams& p, const ChannelModel& c, double a, double cc, double z,
                        InnerMethod method = InnerMethod::Auto);
std::complex<double> annulus_exponent(const NetworkParams& p, const ChannelModel& c, double a, double cc,
                                      std::complex<double> z);

/// -M'(0) by the 5-point central stencil with step 1e-6/mean_scale, capped so
/// that 2*step*K*P*r_l^-alpha*E[h] <= 0.2 (the MGF of an unbounded fade has a
/// pole at negative z).
double finite_difference_mean(const MgfFn& m, double mean_scale);

enum class ClosedFormCase {
    ConstantIncGamma,           // constant h, any alpha > 2 or = 2
    RayleighAlpha2,             // ((R2^2 + s)/(R1^2 + s))^(-pi lambda s)
    RayleighAlpha4,             // arctan form
    RayleighOuterInfinite,      // R2 -> inf, 2F1 form
    RayleighInnerZero,          // R1 -> 0, 2F1 form
    NakagamiM2Alpha2,           // m = 2, alpha = 2
    NoJTDesiredRayleighAlpha2,  // exponential-integral form of the nearest-SBS desired power
};

std::string to_string(ClosedFormCase c);

/// Closed-form MGF. The annulus cases use [r1, r2] (RayleighOuterInfinite ignores
/// r2, RayleighInnerZero ignores r1); NoJTDesiredRayleighAlpha2 uses the scheme law.
/// Nakagami omega and constant h are taken from `channel`.
MgfFn mgf_closed_form(const NetworkParams& p, ClosedFormCase tag, double r1, double r2,
                      const ChannelModel& channel = channel::Rayleigh{});

}  // namespace udnjt::mgf
