#pragma once

#include <random>

#include "udnjt/core_model.hpp"

namespace udnjt::radii {

using Rng = std::mt19937_64;

struct RadiusDist {
    Scheme scheme;
    NetworkParams params;
};

/// Boundary-radius density on (0, inf) for NoJT / 2NS / FPD, ignoring the
/// network's inner hole and outer edge. CD is a point mass and is rejected.
double pdf(const RadiusDist& dist, double r);

/// CDF matching pdf().
double cdf(const RadiusDist& dist, double r);

/// Standalone inverse-CDF draw from the untruncated law (CD returns r_0).
double sample(const RadiusDist& dist, Rng& rng);

/// Boundary radius from the sorted two smallest distances of a realization.
/// For FPD the boundary is r_1/eta_t clipped to r_m; r2 is ignored unless 2NS.
double boundary_from_order_stats(const RadiusDist& dist, double r1, double r2);

// Exact law of the boundary for a PPP restricted to the annulus [r_l, r_m].
// With mu(r) = pi*lambda*(r^2 - r_l^2) the nearest-point law is
// P(r_1 > r) = e^{-mu(r)}; boundaries at or beyond r_m (including "fewer than
// k points") are collected in an atom at r_m.

/// pi*lambda*(r^2 - r_l^2).
double annulus_mu(const NetworkParams& p, double r);

/// Inverse of annulus_mu.
double annulus_radius(const NetworkParams& p, double mu);

/// Continuous part of the boundary density on [r_l, r_m) (CD rejected).
double annulus_pdf(const RadiusDist& dist, double r);

/// Mass of the atom at r_m.
double annulus_atom(const RadiusDist& dist);

/// Lower end of the boundary's support (r_l, or r_l/eta_t for FPD).
double annulus_support_lo(const RadiusDist& dist);

}  // namespace udnjt::radii
