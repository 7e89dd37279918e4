#pragma once

#include "vqi/common.hpp"
#include "vqi/earth_kinematics.hpp"

namespace vqi {

// One fiber path from the source to a detector.
struct FiberPath {
  double length_m = 0.0;              // >= 0
  double group_index = 1.468;         // > 1; 1.468 makes 1 cm correspond to 49 ps
  double length_uncertainty_m = 0.0;  // >= 0
};

// Chromatic-dispersion contribution to the detection-time uncertainty.
struct DispersionSpec {
  double coefficient_ps_per_nm_km = 0.0;  // >= 0
  double spectral_half_width_nm = 0.0;    // >= 0
  double fiber_length_one_side_km = 0.0;  // >= 0
};

// Combined detection-time alignment budget and the resulting rho_bar.
struct AlignmentBudget {
  double length_term_s = 0.0;
  double dispersion_term_s = 0.0;
  double t_ab_total_s = 0.0;  // >= max(length_term, dispersion_term)
  double rho_bar = 0.0;       // c * t_ab_total / r_ab
};

// Geodetic site on a spherical Earth.
struct SiteCoordinates {
  double latitude_deg = 0.0;   // |lat| <= 90
  double longitude_deg = 0.0;  // |lon| <= 180
  double altitude_m = 0.0;
};

// Time equivalent of the fiber-length mismatch:
// (|L_a - L_b| + u_a + u_b) * n / c, with the larger group index of the two.
double length_mismatch_time(const FiberPath& a, const FiberPath& b);

// coefficient * half-width * 2 * one-side length; the factor 2 encodes the
// two photons' opposite wavelength detunings always adding up.
double dispersion_time(const DispersionSpec& spec);

// Quadrature combination t_AB = sqrt(length^2 + dispersion^2) and
// rho_bar = c * t_AB / r_AB.
AlignmentBudget total_alignment(double length_term_s, double dispersion_term_s, double r_ab_m);

// Chord distance and equatorial-plane angle from two sites on a spherical
// Earth (radius 6371 km + altitude): r_ab = |delta|, alpha = asin(|dz|/r_ab).
// rho_bar of the result is left 0 for the caller to fill in.
// Throws std::invalid_argument for coincident sites.
BaselineGeometry baseline_from_sites(const SiteCoordinates& a, const SiteCoordinates& b);

}  // namespace vqi
