#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vqi/common.hpp"
#include "vqi/photon_sim.hpp"

namespace vqi {

// Weighted least-squares fit of m + a cos(2 pi u / T + phi) to binned counts,
// where u is accumulated active scan time.
struct SinusoidFit {
  double mean = 0.0;       // counts per bin
  double amplitude = 0.0;  // counts per bin, >= 0
  double phase_rad = 0.0;
  double period_s = 0.0;   // fixed input or fitted value
  double visibility = 0.0; // amplitude / mean
  double visibility_sigma = 0.0;
  double window_start_s = 0.0;
  double window_end_s = 0.0;
  int active_bins = 0;
  bool converged = false;
  std::string diagnostic;  // set when converged is false
};

struct TracePoint {
  double window_center_s = 0.0;
  double sidereal_phase_rad = 0.0;
  SinusoidFit fit;
  bool above_threshold = false;  // point-estimate visibility > threshold
};

struct VisibilityTrace {
  std::vector<TracePoint> points;
};

// Fit of the scan-active bins whose extent lies inside [start, end). Counts
// are weighted by the inverse Poisson variance, seeded with 1/max(count, 1)
// and refined with 1/max(fitted mean, 1) over a few reweighting passes.
// With fixed_period_s absent, the period is fitted by a 1-D search.
// Failure modes (too few bins, window < 1.5 periods when the period is fixed,
// singular system, nonpositive mean) return converged = false with a
// diagnostic instead of throwing.
SinusoidFit fit_window(const CoincidenceSeries& series, double window_start_s,
                       double window_end_s, std::optional<double> fixed_period_s);

// Visibility after accidental subtraction: amplitude / (mean - accidentals).
// Throws std::invalid_argument when accidentals_per_bin >= fit.mean.
double net_visibility(const SinusoidFit& fit, double accidentals_per_bin);

// fit_window applied at every step along the series. Windows whose inactive
// time exceeds 10% of the window are dropped; otherwise the active bins are
// fitted (the phase is frozen in gaps, so they stay mutually consistent).
// Failed fits leave gaps in the trace. Exec::parallel fits windows on
// multiple threads with bit-identical, order-deterministic output.
VisibilityTrace sliding_scan(const CoincidenceSeries& series, double window_length_s,
                             double step_s, std::optional<double> fixed_period_s,
                             double threshold = kBellThreshold, Exec exec = Exec::parallel);

// Sidereal-day coverage of a set of traces, by equal-phase cells.
struct CoverageCell {
  int multiplicity = 0;          // distinct traces with a window center in the cell
  double min_visibility = 0.0;   // meaningful when multiplicity > 0
};

struct CoverageReport {
  double cell_width_s = 300.0;
  std::vector<CoverageCell> cells;
  bool verdict = false;  // every cell covered and every fit above threshold
  int min_multiplicity = 0;
  int first_empty_cell = -1;
  int windows_below_threshold = 0;
  double first_below_phase_rad = -1.0;
  double min_visibility = 0.0;  // over all windows of all traces
};

CoverageReport coverage_report(const std::vector<VisibilityTrace>& traces,
                               double cell_width_s = 300.0);

}  // namespace vqi
