#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include <fmt/format.h>

#include "udnjt/core_model.hpp"

namespace udnjt::specfun {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 200;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

// 21-point Gauss-Kronrod rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980202825, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T resk = fc * kWgk[10];
    T resg{};
    double resabs = magnitude(fc) * kWgk[10];
    std::array<T, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += (f1[j] + f2[j]) * kWgk[j];
        resabs += (magnitude(f1[j]) + magnitude(f2[j])) * kWgk[j];
        if (j % 2 == 1) resg += (f1[j] + f2[j]) * kWg[j / 2];
    }
    const T mean = resk * 0.5;
    double resasc = magnitude(fc - mean) * kWgk[10];
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (magnitude(f1[j] - mean) + magnitude(f2[j] - mean));
    const double ah = std::abs(h);
    resasc *= ah;
    resabs *= ah;
    double err = magnitude((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk * h, err};
}

}  // namespace detail

/// Adaptive 21-point Gauss-Kronrod quadrature over [points.front(), points.back()],
/// starting from the partition given by `points`. Works for real and complex
/// integrands. Throws NumericError (carrying the best estimate) when the
/// tolerance is not met within spec.max_subdivisions bisections.
template <class T, class F>
QuadResult<T> integrate_adaptive(F&& f, const std::vector<double>& points, const QuadratureSpec& spec) {
    if (points.size() < 2) throw DomainError("integrate: need at least two partition points");
    std::priority_queue<detail::Panel<T>> heap;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] >= points[i])) throw DomainError("integrate: partition must be ascending");
        if (points[i + 1] == points[i]) continue;
        heap.push(detail::gk21<T>(f, points[i], points[i + 1]));
        evals += 21;
    }
    if (heap.empty()) return {};
    auto totals = [&heap]() {
        // Re-summing from the heap keeps the total free of accumulated drift.
        auto copy = heap;
        T v{};
        double e = 0.0;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair<T, double>{v, e};
    };
    auto [value, error] = totals();
    int subdivisions = 0;
    while (error > std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(value))) {
        if (subdivisions >= spec.max_subdivisions) {
            throw NumericError(fmt::format("integrate: tolerance not met after {} subdivisions on [{}, {}] "
                                           "(estimate {}, error {})",
                                           subdivisions, points.front(), points.back(), detail::magnitude(value), error),
                               detail::magnitude(value), error);
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            throw NumericError(fmt::format("integrate: interval [{}, {}] cannot be bisected further", worst.a, worst.b),
                               detail::magnitude(value), error);
        }
        auto left = detail::gk21<T>(f, worst.a, mid);
        auto right = detail::gk21<T>(f, mid, worst.b);
        evals += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        if (subdivisions % 64 == 0) std::tie(value, error) = totals();
    }
    std::tie(value, error) = totals();
    return {value, error, evals};
}

/// Convenience overload for a single interval. An infinite upper limit is
/// mapped to [0, 1) through x = lo + t/(1-t).
template <class T, class F>
QuadResult<T> integrate_adaptive(F&& f, double lo, double hi, const QuadratureSpec& spec) {
    if (std::isinf(hi) && hi > 0) {
        auto g = [&f, lo](double t) -> T {
            if (t >= 1.0) return T{};
            const double u = 1.0 - t;
            const T v = f(lo + t / u);
            return v * (1.0 / (u * u));
        };
        return integrate_adaptive<T>(g, std::vector<double>{0.0, 1.0}, spec);
    }
    return integrate_adaptive<T>(f, std::vector<double>{lo, hi}, spec);
}

/// Integral over [lo, hi]; reversed limits flip the sign, infinite limits are mapped.
double integrate(const std::function<double(double)>& f, double lo, double hi, const QuadratureSpec& spec = {});

/// Generalized incomplete gamma: integral of t^(s-1) e^(-t) over [a, b] with a <= b; b may be kInf.
double inc_gamma(double s, double a, double b);

/// Lower incomplete gamma gamma(s, x); x may be kInf.
double lower_inc_gamma(double s, double x);

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.
double hyp2f1(double a, double b, double c, double z);

/// Exponential integral Ei(x) (principal value), x != 0.
double expint_ei(double x);

/// E1(x) = -Ei(-x) for x > 0.
double expint_e1(double x);

}  // namespace udnjt::specfun
