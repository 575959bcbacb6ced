#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "udnjt/mgf.hpp"

namespace udnjt::laplace_inv {

using Transform = std::function<std::complex<double>(std::complex<double>)>;

/// Abate-Whitt Euler algorithm: partial sums S_n..S_{n+m} of the Bromwich
/// trapezoid series are binomially averaged; n + m + 1 transform evaluations.
struct EulerParams {
    double a = 18.4;
    int n = 32;
    int m = 32;
};

struct PdfCurve {
    std::vector<double> grid;     // mW
    std::vector<double> density;  // 1/mW
    double mass_check = 0.0;      // trapezoid mass plus the head [0, grid[0]]
    double mean_check = 0.0;      // trapezoid first moment
    double min_raw = 0.0;         // most negative value before clamping
};

/// 200 log-spaced points on [1e-4, 20] * mean.
std::vector<double> default_grid(double mean, int points = 200);

/// Inverse transform at one t > 0, plus the Euler estimate one partial sum
/// earlier (their gap is the convergence diagnostic).
struct PointEstimate {
    double value = 0.0;
    double previous = 0.0;
};
PointEstimate invert_point(const Transform& f, double t, const EulerParams& e = {});

/// Inverts an arbitrary transform on a grid; throws NumericError naming the
/// first grid point whose Euler partial sums are not contracting.
PdfCurve invert_transform(const Transform& f, const std::vector<double>& grid, const EulerParams& e = {});

/// PDF of the aggregate whose MGF is `m` (needs complex evaluation).
PdfCurve invert(const mgf::MgfFn& m, const std::vector<double>& grid, const EulerParams& e = {});

/// As invert, on the default grid extended upward (factors of 2) until the
/// tail x f(x) at the last point is below 1e-4 of the peak of x f(x).
PdfCurve invert_auto(const mgf::MgfFn& m, double mean, const EulerParams& e = {});

/// Mass of the piecewise-linear interpolant of the curve inside each bin
/// [edges[i], edges[i+1]] (zero outside the grid).
std::vector<double> bin_masses(const PdfCurve& c, const std::vector<double>& edges);

}  // namespace udnjt::laplace_inv
