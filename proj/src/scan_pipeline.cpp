#include "vqi/scan_pipeline.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vqi/relativity.hpp"

namespace vqi {
namespace {

CurvePoint evaluate_point(double sweep_value, double chi_deg, double beta,
                          const BaselineGeometry& geom, const RotationClock& clock,
                          const BoundOptions& options) {
  const PrivilegedFrame frame{beta, chi_deg};
  const WindowBound wb = bound_beta_parallel(frame, geom, clock);

  double vqi = 0.0;
  if (options.use_exact_rho) {
    // The weakest pointwise bound across the window is at the beta_par that
    // stretches the denominator, i.e. the window extreme signed like rho.
    const AlignmentRho rho{options.exact_rho, false};
    const double sign = options.exact_rho < 0.0 ? -1.0 : 1.0;
    vqi = vqi_bound_exact(rho, beta, sign * wb.beta_parallel_abs_bound);
  } else {
    vqi = vqi_bound_worstcase(geom.rho_bar, beta, wb.beta_parallel_abs_bound);
  }
  return CurvePoint{sweep_value, wb.case_tag, wb.beta_parallel_abs_bound, vqi};
}

void validate_options(const BoundOptions& options) {
  if (options.use_exact_rho && !(std::abs(options.exact_rho) < 1.0)) {
    throw std::invalid_argument("exact_rho must satisfy |rho| < 1");
  }
}

// Evaluates points[i] = evaluate_point(value(i), ...) for i in [0, n) and
// fills the curve summary. Slots are pre-sized and disjoint, so the parallel
// path is bit-identical to the serial one.
template <typename ValueFn, typename PointFn>
BoundCurve run_scan(int n, ValueFn value, PointFn point, Exec exec) {
  BoundCurve curve;
  curve.points.resize(static_cast<std::size_t>(n));

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      curve.points[static_cast<std::size_t>(i)] = point(value(i));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      curve.points[static_cast<std::size_t>(i)] = point(value(i));
    }
  }

  curve.min_index = 0;
  curve.min_vqi_over_c = curve.points[0].vqi_over_c;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].vqi_over_c < curve.min_vqi_over_c) {
      curve.min_vqi_over_c = curve.points[i].vqi_over_c;
      curve.min_index = i;
    }
  }
  curve.min_sweep_value = curve.points[curve.min_index].sweep_value;
  return curve;
}

}  // namespace

BoundCurve run_chi_scan(const ChiSweep& sweep, const BaselineGeometry& geom,
                        const RotationClock& clock, const BoundOptions& options, Exec exec) {
  if (sweep.points < 2) throw std::invalid_argument("chi sweep needs at least 2 points");
  if (!(sweep.chi_min_deg >= 0.0 && sweep.chi_max_deg <= 180.0 &&
        sweep.chi_min_deg < sweep.chi_max_deg)) {
    throw std::invalid_argument("chi sweep range must satisfy 0 <= min < max <= 180");
  }
  if (!(sweep.beta >= 0.0 && sweep.beta < 1.0)) {
    throw std::invalid_argument("chi sweep beta must be in [0, 1)");
  }
  validate_options(options);

  const double lo = sweep.chi_min_deg;
  const double hi = sweep.chi_max_deg;
  const int last = sweep.points - 1;
  const auto value = [&](int i) {
    if (i == 0) return lo;
    if (i == last) return hi;  // exact endpoints
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(last);
  };
  const auto point = [&](double chi_deg) {
    return evaluate_point(chi_deg, chi_deg, sweep.beta, geom, clock, options);
  };
  return run_scan(sweep.points, value, point, exec);
}

BoundCurve run_beta_scan(const BetaSweep& sweep, const BaselineGeometry& geom,
                         const RotationClock& clock, const BoundOptions& options, Exec exec) {
  if (sweep.points < 2) throw std::invalid_argument("beta sweep needs at least 2 points");
  if (!(sweep.beta_min > 0.0 && sweep.beta_min < sweep.beta_max && sweep.beta_max < 1.0)) {
    throw std::invalid_argument("beta sweep range must satisfy 0 < min < max < 1");
  }
  if (!(sweep.chi_deg >= 0.0 && sweep.chi_deg <= 180.0)) {
    throw std::invalid_argument("beta sweep chi must be in [0, 180] degrees");
  }
  validate_options(options);

  const double log_lo = std::log(sweep.beta_min);
  const double log_hi = std::log(sweep.beta_max);
  const int last = sweep.points - 1;
  const auto value = [&](int i) {
    if (i == 0) return sweep.beta_min;
    if (i == last) return sweep.beta_max;  // exact endpoints
    return std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                 static_cast<double>(last));
  };
  const auto point = [&](double beta) {
    return evaluate_point(beta, sweep.chi_deg, beta, geom, clock, options);
  };
  return run_scan(sweep.points, value, point, exec);
}

WorstCaseReport worst_case_report(int chi_points, double beta, const BaselineGeometry& geom,
                                  const RotationClock& clock, const BoundOptions& options,
                                  Exec exec) {
  ChiSweep sweep;
  sweep.points = chi_points;
  sweep.beta = beta;
  const BoundCurve curve = run_chi_scan(sweep, geom, clock, options, exec);

  const CurvePoint& best = curve.points[curve.min_index];
  const WindowBound wb =
      bound_beta_parallel(PrivilegedFrame{beta, best.sweep_value}, geom, clock);

  WorstCaseReport report;
  report.min_vqi_over_c = best.vqi_over_c;
  report.chi_deg = best.sweep_value;
  report.case_tag = best.case_tag;
  report.window_center_phase_rad = wb.window_center_phase_rad;
  report.beta_parallel_bound = best.beta_parallel_bound;
  report.beta = beta;
  report.chi_points = chi_points;
  report.geometry = geom;
  report.clock = clock;
  report.options = options;
  return report;
}

void ensure_violation(const CoverageReport* coverage, bool waived) {
  if (waived) return;
  if (coverage == nullptr) {
    throw prerequisite_error(
        "bound requires a full-day inequality-violation record; none supplied "
        "(pass a coverage report or waive explicitly)");
  }
  if (coverage->verdict) return;

  std::ostringstream msg;
  msg << "coverage verdict is false: min multiplicity " << coverage->min_multiplicity;
  if (coverage->first_empty_cell >= 0) {
    msg << ", first empty cell " << coverage->first_empty_cell << " of "
        << coverage->cells.size();
  }
  if (coverage->windows_below_threshold > 0) {
    msg << ", " << coverage->windows_below_threshold
        << " window(s) below threshold (min visibility " << coverage->min_visibility << ")";
  }
  throw prerequisite_error(msg.str());
}

}  // namespace vqi
