#pragma once

#include <cstddef>
#include <vector>

#include "vqi/common.hpp"
#include "vqi/earth_kinematics.hpp"
#include "vqi/fringe_analysis.hpp"

namespace vqi {

// Sweep over the frame direction chi at a fixed speed beta (curve 5a style).
struct ChiSweep {
  double chi_min_deg = 0.0;
  double chi_max_deg = 180.0;
  int points = 1801;  // 0.1 deg grid by default, >= 2
  double beta = 1e-3;
};

// Log-spaced sweep over the frame speed beta at a fixed direction (5b style).
struct BetaSweep {
  double beta_min = 1e-6;  // > 0 (log spacing)
  double beta_max = 1.0 - 1e-6;
  int points = 241;  // >= 2
  double chi_deg = 90.0;
};

// Optional refinement: when the exact signed alignment rho is known (not just
// the bound rho_bar), evaluate the pointwise formula with the window's worst
// beta_par instead of the fully pessimistic rho_bar form. Off by default.
struct BoundOptions {
  bool use_exact_rho = false;
  double exact_rho = 0.0;  // |exact_rho| < 1
};

struct CurvePoint {
  double sweep_value = 0.0;  // chi in degrees, or beta
  CaseTag case_tag = CaseTag::polar;
  double beta_parallel_bound = 0.0;
  double vqi_over_c = 0.0;  // >= 1
};

struct BoundCurve {
  std::vector<CurvePoint> points;
  double min_vqi_over_c = 0.0;
  double min_sweep_value = 0.0;
  std::size_t min_index = 0;
};

// Audit record for the least favourable frame direction at a fixed speed.
struct WorstCaseReport {
  double min_vqi_over_c = 0.0;
  double chi_deg = 0.0;  // achieving direction
  CaseTag case_tag = CaseTag::polar;
  double window_center_phase_rad = 0.0;
  double beta_parallel_bound = 0.0;
  // Inputs echoed for audit.
  double beta = 0.0;
  int chi_points = 0;
  BaselineGeometry geometry;
  RotationClock clock;
  BoundOptions options;
};

// Each curve point is the plain composition
//   bound_beta_parallel(frame, geom, clock)  ->  vqi_bound_worstcase(...)
// (or the exact-rho variant); the scan adds no arithmetic of its own.
// Points are independent, so Exec::parallel distributes them over threads;
// output ordering and bytes are identical to Exec::serial.
BoundCurve run_chi_scan(const ChiSweep& sweep, const BaselineGeometry& geom,
                        const RotationClock& clock, const BoundOptions& options = {},
                        Exec exec = Exec::parallel);

BoundCurve run_beta_scan(const BetaSweep& sweep, const BaselineGeometry& geom,
                         const RotationClock& clock, const BoundOptions& options = {},
                         Exec exec = Exec::parallel);

// Full-range chi scan at the given resolution plus the audit fields for the
// global minimum.
WorstCaseReport worst_case_report(int chi_points, double beta, const BaselineGeometry& geom,
                                  const RotationClock& clock, const BoundOptions& options = {},
                                  Exec exec = Exec::parallel);

// Gate for bound claims: a bound is only meaningful once the inequality
// violation is certified around the full day. Passing nullptr means no
// evidence was supplied. Throws prerequisite_error unless the report verdict
// is true or the caller explicitly waived the check.
void ensure_violation(const CoverageReport* coverage, bool waived);

}  // namespace vqi
