#pragma once

#include "vqi/common.hpp"

namespace vqi {

// An event in the Earth-centered inertial frame.
struct SpacetimeEvent {
  Vec3 position_m;  // meters
  double time_s = 0.0;
};

// Velocity of the Earth frame relative to a candidate frame, as a fraction of c.
struct FrameVelocity {
  Vec3 beta;  // |beta| < 1
};

// A hypothetical privileged frame: Earth's relative speed and the zenith angle
// of the relative velocity against Earth's rotation axis.
struct PrivilegedFrame {
  double beta = 0.0;     // 0 <= beta < 1
  double chi_deg = 0.0;  // 0 <= chi_deg <= 180
};

// Alignment of the two detection events: rho = c * t_AB / r_AB.
// is_bound marks an experimental upper bound rather than an exact value.
struct AlignmentRho {
  double rho = 0.0;  // |rho| < 1 for space-like separation
  bool is_bound = false;
};

// Influence speed implied by an event pair seen from the frame moving at v:
// boost both events (r'_par = gamma (r_par + v t), t' = gamma (t + v.r / c^2),
// perpendicular part unchanged) and return |r'_B - r'_A| / (c |t'_B - t'_A|).
// Returns kUnbounded when the transformed time separation is exactly zero.
// Throws std::invalid_argument for |v| >= 1 or non-space-like separation.
double vqi_from_events(const SpacetimeEvent& a, const SpacetimeEvent& b, const FrameVelocity& v);

// Closed form for the same quantity: sqrt(1 + (1-beta^2)(1-rho^2)/(rho+beta_par)^2).
// beta = 1 is accepted as a limit input here (the event route rejects it).
// Returns kUnbounded when rho + beta_par == 0.
double vqi_bound_exact(const AlignmentRho& rho, double beta, double beta_parallel);

// Worst case over |rho| <= rho_bar and |beta_par| <= beta_parallel_abs_bound:
// sqrt(1 + (1-beta^2)(1-rho_bar^2)/(rho_bar+|beta_par|)^2).
double vqi_bound_worstcase(double rho_bar, double beta, double beta_parallel_abs_bound);

}  // namespace vqi
