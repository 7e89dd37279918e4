#pragma once

#include <cstdint>
#include <vector>

#include "vqi/common.hpp"
#include "vqi/relativity.hpp"

namespace vqi {

// The detector baseline: direct A-B distance, its angle to the equatorial
// plane, and the alignment bound rho_bar = c * t_AB / r_AB.
struct BaselineGeometry {
  double r_ab_m = 0.0;     // > 0
  double alpha_deg = 0.0;  // -90 < alpha_deg < 90
  double rho_bar = 0.0;    // 0 <= rho_bar < 1
};

// Earth rotation rate and the integration time T needed to observe one
// inequality-violating fringe.
struct RotationClock {
  double omega_rad_per_s = kEarthOmega;  // > 0
  double window_T_s = 360.0;             // > 0, omega * T < 2 pi
};

// Frame classification: `crossing` frames (case i) can become perpendicular
// to the baseline during the day, `polar` frames (case ii) cannot.
enum class CaseTag { crossing, polar };

// Per-window bound on |beta_par| and the phase omega*t at which the optimal
// length-T window is centered.
struct WindowBound {
  CaseTag case_tag = CaseTag::polar;
  double beta_parallel_abs_bound = 0.0;  // >= 0
  double window_center_phase_rad = 0.0;
};

// beta_par(t) = beta (cos chi sin alpha + sin chi cos alpha cos omega t).
double beta_parallel_at(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                        const RotationClock& clock, double t_s);

// Case (i) when cos^2(omega T / 4) |tan chi| > |tan alpha|, else case (ii).
// Evaluated in cross-multiplied form so chi = 90 deg needs no special path.
CaseTag classify_case(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                      const RotationClock& clock);

// Analytic window bound on |beta_par| over the best length-T interval:
//   (i)  beta sqrt(sin^2 chi cos^2 alpha - cos^2 chi sin^2 alpha) * omega T / 2,
//        window centered on a zero crossing (cos omega t0 = -tan alpha / tan chi);
//   (ii) max(0, beta (|cos chi sin alpha| - |sin chi cos alpha| cos(omega T / 2))),
//        window centered on the extremum opposing the constant term.
WindowBound bound_beta_parallel(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                                const RotationClock& clock);

// Independent oracle for the analytic bound: sample beta_par over one full
// rotation and minimize, over all window placements, the maximum of |beta_par|
// restricted to the samples every placement in one step-bracket shares
// (floor(T/dt) samples). That makes the result a certified lower bound on the
// continuum optimum, hence always <= the analytic bound. samples_per_period
// must be >= 1e4.
double brute_force_window_bound(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                                const RotationClock& clock, std::int64_t samples_per_period);

// Batch variant sharing the cosine table and the per-window-width sliding
// extrema across cases; Exec::parallel distributes cases over threads and is
// bit-identical to Exec::serial.
struct WindowOracleCase {
  PrivilegedFrame frame;
  BaselineGeometry geom;
  RotationClock clock;
};

std::vector<double> brute_force_window_bounds(const std::vector<WindowOracleCase>& cases,
                                              std::int64_t samples_per_period,
                                              Exec exec = Exec::parallel);

}  // namespace vqi
