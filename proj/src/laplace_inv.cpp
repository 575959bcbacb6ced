#include "udnjt/laplace_inv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "udnjt/parallel.hpp"

namespace udnjt::laplace_inv {

std::vector<double> default_grid(double mean, int points) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("default_grid: mean must be positive and finite");
    if (points < 2) throw DomainError("default_grid: need at least 2 points");
    std::vector<double> g(points);
    const double lo = std::log(1e-4 * mean), hi = std::log(20.0 * mean);
    for (int i = 0; i < points; ++i) g[i] = std::exp(lo + (hi - lo) * i / (points - 1));
    return g;
}

PointEstimate invert_point(const Transform& f, double t, const EulerParams& e) {
    if (!(t > 0.0)) throw DomainError("invert_point: t must be positive");
    if (e.n < 1 || e.m < 0) throw DomainError("invert_point: need n >= 1 and m >= 0");
    const int terms = e.n + e.m;
    std::vector<double> partial(terms + 1);
    double sum = 0.0;
    for (int k = 0; k <= terms; ++k) {
        const std::complex<double> s((e.a) / (2.0 * t), std::numbers::pi * k / t);
        const double term = f(s).real();
        sum += (k == 0) ? 0.5 * term : ((k % 2) ? -term : term);
        partial[k] = sum;
    }
    // Binomial weights C(m, j) / 2^m, built by recurrence.
    std::vector<double> w(e.m + 1);
    w[0] = std::ldexp(1.0, -e.m);
    for (int j = 1; j <= e.m; ++j) w[j] = w[j - 1] * (e.m - j + 1) / j;
    double now = 0.0, before = 0.0;
    for (int j = 0; j <= e.m; ++j) {
        now += w[j] * partial[e.n + j];
        before += w[j] * partial[e.n - 1 + j];
    }
    const double scale = std::exp(e.a / 2.0) / t;
    return {scale * now, scale * before};
}

namespace {

std::vector<PointEstimate> evaluate_points(const Transform& f, const std::vector<double>& grid, const EulerParams& e) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
            throw DomainError("inverse Laplace: grid must be positive and strictly ascending");
    }
    std::vector<PointEstimate> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { out[i] = invert_point(f, grid[i], e); });
    return out;
}

PdfCurve finalize(const std::vector<double>& grid, const std::vector<PointEstimate>& est) {
    double peak = 0.0;
    for (const auto& p : est) peak = std::max(peak, std::abs(p.value));
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double gap = std::abs(est[i].value - est[i].previous);
        if (!std::isfinite(est[i].value) || gap > 1e-3 * (peak + std::abs(est[i].value))) {
            throw NumericError(fmt::format("inverse Laplace: Euler partial sums not contracting at x = {:.6g} "
                                           "(estimate {:.6g}, last change {:.3g})",
                                           grid[i], est[i].value, gap),
                               est[i].value, gap);
        }
    }
    PdfCurve c;
    c.grid = grid;
    c.density.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        c.min_raw = std::min(c.min_raw, est[i].value);
        c.density[i] = std::max(0.0, est[i].value);
    }
    c.mass_check = grid.front() * c.density.front();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dx = grid[i] - grid[i - 1];
        c.mass_check += 0.5 * dx * (c.density[i] + c.density[i - 1]);
        c.mean_check += 0.5 * dx * (grid[i] * c.density[i] + grid[i - 1] * c.density[i - 1]);
    }
    return c;
}

Transform transform_of(const mgf::MgfFn& m) {
    if (!m.has_complex()) throw DomainError("inverse Laplace: this MGF has no complex evaluator");
    return [&m](std::complex<double> s) { return m.eval(s); };
}

}  // namespace

PdfCurve invert_transform(const Transform& f, const std::vector<double>& grid, const EulerParams& e) {
    if (grid.empty()) throw DomainError("inverse Laplace: empty grid");
    return finalize(grid, evaluate_points(f, grid, e));
}

PdfCurve invert(const mgf::MgfFn& m, const std::vector<double>& grid, const EulerParams& e) {
    return invert_transform(transform_of(m), grid, e);
}

PdfCurve invert_auto(const mgf::MgfFn& m, double mean, const EulerParams& e) {
    const auto f = transform_of(m);
    auto grid = default_grid(mean);
    auto est = evaluate_points(f, grid, e);
    for (int round = 0; round < 8; ++round) {
        double peak = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) peak = std::max(peak, grid[i] * est[i].value);
        if (grid.back() * std::abs(est.back().value) < 1e-4 * peak) break;
        std::vector<double> more(40);
        const double x0 = grid.back();
        for (int i = 0; i < 40; ++i) more[i] = x0 * std::exp2((i + 1) / 40.0);
        const auto extra = evaluate_points(f, more, e);
        grid.insert(grid.end(), more.begin(), more.end());
        est.insert(est.end(), extra.begin(), extra.end());
    }
    return finalize(grid, est);
}

std::vector<double> bin_masses(const PdfCurve& c, const std::vector<double>& edges) {
    std::vector<double> out(edges.size() > 1 ? edges.size() - 1 : 0, 0.0);
    const auto& x = c.grid;
    const auto& y = c.density;
    auto interp = [&](std::size_t i, double t) { return y[i] + (y[i + 1] - y[i]) * (t - x[i]) / (x[i + 1] - x[i]); };
    for (std::size_t b = 0; b < out.size(); ++b) {
        const double lo = std::max(edges[b], x.front()), hi = std::min(edges[b + 1], x.back());
        if (!(hi > lo)) continue;
        double mass = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double a = std::max(lo, x[i]), d = std::min(hi, x[i + 1]);
            if (d > a) mass += 0.5 * (d - a) * (interp(i, a) + interp(i, d));
        }
        out[b] = mass;
    }
    return out;
}

}  // namespace udnjt::laplace_inv
