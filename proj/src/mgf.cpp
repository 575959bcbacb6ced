#include "udnjt/mgf.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <type_traits>
#include <vector>

#include <fmt/format.h>

#include "udnjt/radii.hpp"
#include "udnjt/specfun.hpp"

namespace udnjt::mgf {

MgfFn::MgfFn(NetworkParams params, Scheme scheme, ChannelModel channel, AggregateKind kind, RealFn real,
             ComplexFn complex)
    : params_(params), scheme_(scheme), channel_(channel), kind_(kind), real_(std::move(real)),
      complex_(std::move(complex)) {}

double MgfFn::eval(double z) const {
    if (z == 0.0) return 1.0;
    if (std::isnan(z)) throw DomainError("mgf: z is NaN");
    return real_(z);
}

std::complex<double> MgfFn::eval(std::complex<double> z) const {
    if (z == std::complex<double>(0.0, 0.0)) return 1.0;
    if (!complex_) throw DomainError("mgf: no complex evaluator for this MGF");
    if (z.real() < 0.0) throw DomainError("mgf: complex evaluation needs Re(z) >= 0");
    return complex_(z);
}

std::string to_string(ClosedFormCase c) {
    switch (c) {
        case ClosedFormCase::ConstantIncGamma: return "constant-inc-gamma";
        case ClosedFormCase::RayleighAlpha2: return "rayleigh-alpha2";
        case ClosedFormCase::RayleighAlpha4: return "rayleigh-alpha4";
        case ClosedFormCase::RayleighOuterInfinite: return "rayleigh-outer-infinite";
        case ClosedFormCase::RayleighInnerZero: return "rayleigh-inner-zero";
        case ClosedFormCase::NakagamiM2Alpha2: return "nakagami-m2-alpha2";
        case ClosedFormCase::NoJTDesiredRayleighAlpha2: return "nojt-desired-rayleigh-alpha2";
    }
    return "?";
}

namespace {

using cplx = std::complex<double>;

template <class T>
T one_minus_exp_neg(T w) {
    if (std::abs(w) < 1e-5) return w * (1.0 - w * (0.5 - w * (1.0 / 6.0 - w / 24.0)));
    if constexpr (std::is_same_v<T, double>)
        return -std::expm1(-w);
    else
        return 1.0 - std::exp(-w);
}

template <class T>
T log1p_t(T v) {
    if constexpr (std::is_same_v<T, double>) {
        return std::log1p(v);
    } else {
        if (std::abs(v) < 1e-5) return v * (1.0 - v * (0.5 - v * (1.0 / 3.0 - v / 4.0)));
        return std::log(1.0 + v);
    }
}

bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

struct Model {
    NetworkParams p;
    ChannelModel ch;
    double pl = 0, two_pl = 0, kp = 0, alpha = 0;

    Model(const NetworkParams& params, const ChannelModel& channel) : p(params), ch(channel) {
        p.validate();
        validate(ch);
        pl = std::numbers::pi * p.lambda_b;
        two_pl = 2.0 * pl;
        kp = p.k_s * p.p_s;
        alpha = p.alpha_s;
    }

    double path(double x) const { return kp * std::pow(x, -alpha); }

    // L_h(w) = E[exp(-w h)] and 1 - L_h(w).
    template <class T>
    T laplace(T w) const {
        switch (ch.index()) {
            case 0: return std::exp(-w * std::get<channel::Constant>(ch).h);
            case 1: return 1.0 / (1.0 + w);
            default: {
                const auto& n = std::get<channel::Nakagami>(ch);
                return std::exp(-n.m * log1p_t<T>(w * (n.omega / n.m)));
            }
        }
    }
    template <class T>
    T one_minus_laplace(T w) const {
        switch (ch.index()) {
            case 0: return one_minus_exp_neg<T>(w * std::get<channel::Constant>(ch).h);
            case 1: return w / (1.0 + w);
            default: {
                const auto& n = std::get<channel::Nakagami>(ch);
                return one_minus_exp_neg<T>(n.m * log1p_t<T>(w * (n.omega / n.m)));
            }
        }
    }

    // Which closed form (if any) the Auto method uses for the annulus exponent.
    enum class Closed { None, Constant, Rayleigh2, Rayleigh4, Nakagami2 };
    Closed closed_kind() const {
        switch (ch.index()) {
            case 0: return Closed::Constant;
            case 1:
                if (near(alpha, 2.0)) return Closed::Rayleigh2;
                if (near(alpha, 4.0)) return Closed::Rayleigh4;
                return Closed::None;
            default: {
                const auto& n = std::get<channel::Nakagami>(ch);
                return (n.m == 2.0 && near(alpha, 2.0)) ? Closed::Nakagami2 : Closed::None;
            }
        }
    }

    // Closed-form annulus exponent over [a, c] for real z > 0.
    double closed_exponent(Closed k, double z, double a, double c) const {
        if (c <= a) return 0.0;
        switch (k) {
            case Closed::Constant: {
                const double s = z * std::get<channel::Constant>(ch).h * kp;
                const double ua = s * std::pow(a, -alpha);
                const double uc = s * std::pow(c, -alpha);
                // Integration by parts of the negative-order form keeps the
                // incomplete gamma at order 1 - 2/alpha >= 0 and avoids cancellation.
                const double order = 1.0 - 2.0 / alpha;
                double g = 0.0;
                if (ua > uc) {
                    g = (order > 1e-12) ? specfun::inc_gamma(order, uc, ua)
                                        : specfun::expint_e1(uc) - specfun::expint_e1(ua);
                    g *= std::pow(s, 2.0 / alpha);
                }
                return pl * (c * c * -std::expm1(-uc) - a * a * -std::expm1(-ua) + g);
            }
            case Closed::Rayleigh2: {
                const double s = z * kp;
                return pl * s * std::log1p((c * c - a * a) / (a * a + s));
            }
            case Closed::Rayleigh4: {
                const double s = z * kp;
                const double rs = std::sqrt(s);
                return pl * rs * std::atan(rs * (c * c - a * a) / (s + a * a * c * c));
            }
            case Closed::Nakagami2: {
                const auto& n = std::get<channel::Nakagami>(ch);
                const double g = n.omega * z * kp / n.m;
                return pl * (2.0 * g * std::log1p((c * c - a * a) / (a * a + g)) -
                             g * g * (c * c - a * a) / ((a * a + g) * (c * c + g)));
            }
            case Closed::None: break;
        }
        throw DomainError("mgf: no closed form for this channel");
    }
};

template <class T>
struct Tol;
template <>
struct Tol<double> {
    static constexpr specfun::QuadratureSpec inner{1e-15, 1e-12, 1000};
    static constexpr specfun::QuadratureSpec outer{1e-14, 1e-12, 2000};
};
template <>
struct Tol<cplx> {
    static constexpr specfun::QuadratureSpec inner{1e-13, 1e-10, 1000};
    static constexpr specfun::QuadratureSpec outer{1e-12, 1e-9, 2000};
};

// C(x) = annulus exponent over [r_l, x] for a fixed z, with a table of
// cumulative values at log-spaced knots so each lookup costs one short integral.
template <class T>
class Cumulative {
public:
    Cumulative(const Model& m, T z, bool quadrature) : m_(m), z_(z) {
        if constexpr (std::is_same_v<T, double>) {
            closed_ = (!quadrature && z > 0.0) ? m.closed_kind() : Model::Closed::None;
        }
        if (closed_ != Model::Closed::None) return;
        v0_ = std::log(m.p.r_l);
        const double span = std::log(m.p.r_m) - v0_;
        const int k = std::max(8, static_cast<int>(std::ceil(span / 0.15)));
        dv_ = span / k;
        table_.assign(k + 1, T{});
        for (int i = 0; i < k; ++i) table_[i + 1] = table_[i] + piece(v0_ + i * dv_, v0_ + (i + 1) * dv_);
        total_ = table_.back();
    }

    T operator()(double x) const {
        if (x <= m_.p.r_l) return T{};
        if (closed_ != Model::Closed::None) {
            if constexpr (std::is_same_v<T, double>) return m_.closed_exponent(closed_, z_, m_.p.r_l, std::min(x, m_.p.r_m));
        }
        if (x >= m_.p.r_m) return total_;
        const double v = std::log(x);
        const int n = static_cast<int>(table_.size()) - 1;
        const int i = std::clamp(static_cast<int>(std::floor((v - v0_) / dv_)), 0, n - 1);
        const double vi = v0_ + i * dv_;
        if (v <= vi) return table_[i];
        return table_[i] + piece(vi, v);
    }

    T total() const {
        if (closed_ != Model::Closed::None) return (*this)(m_.p.r_m);
        return total_;
    }

private:
    T piece(double va, double vb) const {
        auto g = [this](double v) -> T {
            const double x = std::exp(v);
            return m_.two_pl * x * x * m_.template one_minus_laplace<T>(z_ * m_.path(x));
        };
        return specfun::integrate_adaptive<T>(g, std::vector<double>{va, vb}, Tol<T>::inner).value;
    }

    const Model& m_;
    T z_;
    Model::Closed closed_ = Model::Closed::None;
    double v0_ = 0, dv_ = 0;
    std::vector<T> table_;
    T total_{};
};

// Breakpoints in mu = t - t_l for the outer expectation; the radius grows on the
// scale t_l near the hole and on the scale 1 afterwards.
std::vector<double> outer_points(double tl, double hi) {
    std::vector<double> pts{0.0};
    for (double d : {1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 1e3, 1e4}) {
        const double t = tl * d;
        if (t < hi && t > pts.back()) pts.push_back(t);
    }
    for (double d : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
        if (d < hi && d > pts.back() * (1.0 + 1e-9)) pts.push_back(d);
    }
    std::sort(pts.begin(), pts.end());
    pts.push_back(hi);
    return pts;
}

constexpr double kTailCut = 80.0;

template <class T>
T evaluate(const Model& m, const Scheme& s, AggregateKind kind, T z, bool quadrature) {
    const auto& p = m.p;
    const Cumulative<T> C(m, z, quadrature);
    const T total = C.total();
    if (kind == AggregateKind::Total) return std::exp(-total);

    if (const auto* cd = std::get_if<scheme::CD>(&s)) {
        const T inner = C(std::min(cd->r_0, p.r_m));
        return kind == AggregateKind::Desired ? std::exp(-inner) : std::exp(-(total - inner));
    }

    const double mu_total = radii::annulus_mu(p, p.r_m);
    const double tl = m.pl * p.r_l * p.r_l;
    const double hi = std::min(mu_total, kTailCut);
    const double e_total = std::exp(-mu_total);
    const bool desired = kind == AggregateKind::Desired;
    const auto radius = [&p](double mu) { return radii::annulus_radius(p, mu); };
    const auto L = [&](double r) { return m.template laplace<T>(z * m.path(r)); };

    std::function<T(double)> g;
    T atom{};
    switch (s.index()) {
        case 0:  // NoJT
            if (desired)
                g = [&](double mu) { return L(radius(mu)) * std::exp(-mu); };
            else
                g = [&](double mu) { return std::exp(-(total - C(radius(mu))) - mu); };
            atom = T(e_total);
            break;
        case 1:  // 2NS: the inner integral over r_1 < r_2 equals mu - C(r_2)
            if (desired) {
                g = [&](double mu) {
                    const double r = radius(mu);
                    return L(r) * (mu - C(r)) * std::exp(-mu);
                };
                atom = e_total * (mu_total - total) + e_total;
            } else {
                g = [&](double mu) { return std::exp(-(total - C(radius(mu))) - mu) * mu; };
                atom = T(e_total * (1.0 + mu_total));
            }
            break;
        default: {  // FPD: nearest SBS plus a PPP on (r_1, r_eta]
            const double et = eta_t(std::get<scheme::FPD>(s).eta_db, p.alpha_s);
            if (desired) {
                g = [&, et](double mu) {
                    const double r = radius(mu);
                    const double reta = std::min(r / et, p.r_m);
                    return L(r) * std::exp(-(C(reta) - C(r)) - mu);
                };
            } else {
                g = [&, et](double mu) {
                    const double reta = std::min(radius(mu) / et, p.r_m);
                    return std::exp(-(total - C(reta)) - mu);
                };
            }
            atom = T(e_total);
            break;
        }
    }
    const T body = specfun::integrate_adaptive<T>(g, outer_points(tl, hi), Tol<T>::outer).value;
    return body + atom;
}

struct Context {
    Model model;
    Scheme scheme;
    AggregateKind kind;
    bool quadrature;
};

MgfFn make(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind, InnerMethod method) {
    auto ctx = std::make_shared<const Context>(Context{Model(p, c), s, kind, method == InnerMethod::Quadrature});
    auto real = [ctx](double z) {
        // Closed forms assume z > 0; negative z (derivatives at 0) goes through quadrature.
        return evaluate<double>(ctx->model, ctx->scheme, ctx->kind, z, ctx->quadrature || z < 0.0);
    };
    auto complex = [ctx](cplx z) { return evaluate<cplx>(ctx->model, ctx->scheme, ctx->kind, z, true); };
    return MgfFn(p, s, c, kind, real, complex);
}

}  // namespace

MgfFn mgf(const NetworkParams& p, const Scheme& s, const ChannelModel& c, AggregateKind kind, InnerMethod method) {
    validate(s, p);
    return make(p, s, c, kind, method);
}

MgfFn mgf_total(const NetworkParams& p, const ChannelModel& c, InnerMethod method) {
    return make(p, scheme::NoJT{}, c, AggregateKind::Total, method);
}

double finite_difference_mean(const MgfFn& m, double mean_scale) {
    if (!(mean_scale > 0.0)) throw DomainError("finite_difference_mean: mean_scale must be positive");
    const auto& p = m.params();
    const double f_max = p.k_s * p.p_s * std::pow(p.r_l, -p.alpha_s) * fade_mean(m.channel());
    const double h = std::min(1e-6 / mean_scale, 0.1 / f_max);
    return -(-m(2.0 * h) + 8.0 * m(h) - 8.0 * m(-h) + m(-2.0 * h)) / (12.0 * h);
}

namespace {

template <class T>
T annulus_exponent_quadrature(const Model& m, double a, double c, T z) {
    if (c <= a) return T{};
    auto in_log = [&](double v) -> T {
        const double x = std::exp(v);
        return m.two_pl * x * x * m.template one_minus_laplace<T>(z * m.path(x));
    };
    T value{};
    double lo = a;
    if (a == 0.0) {
        // Near the origin the integrand saturates at 2*pi*lambda*x.
        const double head = std::min(c, 1e-8 * std::max(1.0, std::isinf(c) ? 1.0 : c));
        value += T(m.pl * head * head);
        lo = head;
    }
    const double hi_finite = std::isinf(c) ? std::max(lo * 2.0, 1e3 * std::max(1.0, lo)) : c;
    const double vlo = std::log(lo), vhi = std::log(hi_finite);
    const int k = std::max(4, static_cast<int>(std::ceil((vhi - vlo) / 0.5)));
    std::vector<double> pts;
    for (int i = 0; i <= k; ++i) pts.push_back(vlo + (vhi - vlo) * i / k);
    value += specfun::integrate_adaptive<T>(in_log, pts, {1e-300, 1e-13, 4000}).value;
    if (std::isinf(c)) {
        if (!(m.alpha > 2.0)) throw DomainError("annulus_exponent: infinite outer radius needs alpha > 2");
        // x = hi * u^(-q) with q = 1/(alpha - 2) turns the x^(1-alpha) tail into a
        // bounded integrand on (0, 1].
        const double q = 1.0 / (m.alpha - 2.0);
        auto in_u = [&](double u) -> T {
            const double x = hi_finite * std::pow(u, -q);
            return m.two_pl * x * m.template one_minus_laplace<T>(z * m.path(x)) * (q * x / u);
        };
        value += specfun::integrate_adaptive<T>(in_u, std::vector<double>{0.0, 1.0}, {1e-300, 1e-13, 4000}).value;
    }
    return value;
}

}  // namespace

double annulus_exponent(const NetworkParams& p, const ChannelModel& c, double a, double cc, double z,
                        InnerMethod method) {
    if (!(a >= 0.0) || !(cc >= a)) throw DomainError("annulus_exponent: need 0 <= a <= c");
    const Model m(p, c);
    if (z == 0.0) return 0.0;
    const auto k = m.closed_kind();
    if (method == InnerMethod::Auto && z > 0.0 && k != Model::Closed::None && a > 0.0 && std::isfinite(cc))
        return m.closed_exponent(k, z, a, cc);
    return annulus_exponent_quadrature<double>(m, a, cc, z);
}

std::complex<double> annulus_exponent(const NetworkParams& p, const ChannelModel& c, double a, double cc,
                                      std::complex<double> z) {
    if (!(a >= 0.0) || !(cc >= a)) throw DomainError("annulus_exponent: need 0 <= a <= c");
    const Model m(p, c);
    return annulus_exponent_quadrature<cplx>(m, a, cc, z);
}

namespace {

// e^x E1(x) without overflow.
double scaled_e1(double x) {
    if (x < 600.0) return std::exp(x) * specfun::expint_e1(x);
    const double ix = 1.0 / x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 12; ++k) {
        term *= -k * ix;
        sum += term;
    }
    return sum * ix;
}

}  // namespace

MgfFn mgf_closed_form(const NetworkParams& p, ClosedFormCase tag, double r1, double r2, const ChannelModel& channel) {
    p.validate();
    validate(channel);
    const double pl = std::numbers::pi * p.lambda_b;
    const double kp = p.k_s * p.p_s;
    const double alpha = p.alpha_s;
    auto require = [&](bool ok, const char* what) {
        if (!ok) throw DomainError(fmt::format("mgf_closed_form({}): {}", to_string(tag), what));
    };
    auto annulus_ok = [&] { require(r1 > 0.0 && r2 > r1, "needs 0 < r1 < r2"); };

    std::function<double(double)> f;
    Scheme sch = scheme::CD{r2};
    AggregateKind kind = AggregateKind::Desired;
    switch (tag) {
        case ClosedFormCase::ConstantIncGamma: {
            annulus_ok();
            require(channel.index() == 0, "needs a constant channel");
            const Model m(p, channel);
            f = [m, r1, r2](double z) { return std::exp(-m.closed_exponent(Model::Closed::Constant, z, r1, r2)); };
            break;
        }
        case ClosedFormCase::RayleighAlpha2:
            annulus_ok();
            require(near(alpha, 2.0), "needs alpha = 2");
            f = [=](double z) {
                const double s = z * kp;
                return std::pow((r2 * r2 + s) / (r1 * r1 + s), -pl * s);
            };
            break;
        case ClosedFormCase::RayleighAlpha4:
            annulus_ok();
            require(near(alpha, 4.0), "needs alpha = 4");
            f = [=](double z) {
                const double s = z * kp;
                return std::exp(-pl * std::sqrt(s) * std::atan(std::sqrt(s) * (r2 * r2 - r1 * r1) / (s + r1 * r1 * r2 * r2)));
            };
            break;
        case ClosedFormCase::RayleighOuterInfinite:
            require(r1 > 0.0, "needs r1 > 0");
            require(alpha > 2.0, "needs alpha > 2");
            f = [=](double z) {
                const double s = z * kp;
                return std::exp(-2.0 * pl * s * std::pow(r1, 2.0 - alpha) / (alpha - 2.0) *
                                specfun::hyp2f1(1.0, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha, -s / std::pow(r1, alpha)));
            };
            break;
        case ClosedFormCase::RayleighInnerZero:
            require(r2 > 0.0, "needs r2 > 0");
            f = [=](double z) {
                const double s = z * kp;
                return std::exp(-pl * r2 * r2 *
                                specfun::hyp2f1(1.0, 2.0 / alpha, 1.0 + 2.0 / alpha, -std::pow(r2, alpha) / s));
            };
            break;
        case ClosedFormCase::NakagamiM2Alpha2: {
            annulus_ok();
            require(near(alpha, 2.0), "needs alpha = 2");
            const auto* n = std::get_if<channel::Nakagami>(&channel);
            require(n != nullptr && n->m == 2.0, "needs a Nakagami channel with m = 2");
            const double omega = n->omega;
            f = [=](double z) {
                const double g = omega * z * kp / 2.0;
                const double a2 = r1 * r1, c2 = r2 * r2;
                return std::exp(pl * (g * g * (c2 - a2) / ((g + a2) * (g + c2)) - 2.0 * g * std::log((g + c2) / (g + a2))));
            };
            break;
        }
        case ClosedFormCase::NoJTDesiredRayleighAlpha2: {
            require(near(alpha, 2.0), "needs alpha = 2");
            sch = scheme::NoJT{};
            const double rl2 = p.r_l * p.r_l, rm2 = p.r_m * p.r_m;
            f = [=](double z) {
                const double b = z * kp, c = pl;
                const double xl = c * (rl2 + b), xm = c * (rm2 + b);
                // 1 - bc e^{xl} [E1(xl) - E1(xm)], with both exponentials kept scaled.
                return 1.0 - b * c * (scaled_e1(xl) - std::exp(xl - xm) * scaled_e1(xm));
            };
            break;
        }
    }
    auto real = [f](double z) { return f(z); };
    return MgfFn(p, sch, channel, kind, real, {});
}

}  // namespace udnjt::mgf
