#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vqi/common.hpp"

namespace vqi {

// Source and background rates. The accidental rate is a constant floor; the
// true-pair rate is interference-modulated with contrast source_visibility.
struct SourceModel {
  double true_coincidence_rate_per_min = 30.5;
  double accidental_rate_per_min = 2.5;
  double source_visibility = 0.948;  // in [0, 1]
  double singles_rate_a_per_min = 1e4;
  double singles_rate_b_per_min = 1e4;
  double singles_drift_per_hour = 0.0;  // optional relative linear drift of the singles rates
};

// Linear phase ramp: the two-photon phase advances by 2 pi per fringe_period
// of *active* scan time and is frozen between ramp segments.
struct PhaseScan {
  double fringe_period_s = 360.0;  // > 0
  double initial_phase_rad = 0.0;
  std::vector<std::pair<double, double>> ramp_segments;  // disjoint, ordered [start, end)
};

// Time-binned observable record of one measurement run.
struct CoincidenceSeries {
  double bin_width_s = 60.0;
  std::int64_t anchor_unix_s = 0;  // wall clock of t = 0 (UTC seconds)
  double anchor_frac_s = 0.0;      // sub-second remainder, normally 0

  struct Bin {
    double start_s = 0.0;  // since run start
    double singles_a = 0.0;
    double singles_b = 0.0;
    double coincidences = 0.0;
    bool scan_active = true;
  };
  std::vector<Bin> bins;
};

// Scan time accumulated inside ramp segments up to t (phase freezes in gaps).
double active_time_before(const PhaseScan& scan, double t_s);

// Whether t lies inside a ramp segment.
bool scan_active_at(const PhaseScan& scan, double t_s);

// Two-photon phase at t: initial_phase + 2 pi * active_time(t) / fringe_period.
double scan_phase_at(const PhaseScan& scan, double t_s);

// Expected coincidence rate R_c (1 + V cos phi(t)) + R_acc, counts per minute.
double coincidence_rate_at(const SourceModel& model, const PhaseScan& scan, double t_s);

// Stochastic realization: per bin, independent Poisson draws of singles and
// coincidences with mean = rate(bin midpoint) * bin_width. Identical
// (seed, inputs) give a bit-identical series. duration must be a whole number
// of bins.
CoincidenceSeries simulate_series(const SourceModel& model, const PhaseScan& scan,
                                  double duration_s, double bin_width_s, std::uint64_t seed,
                                  std::int64_t anchor_unix_s);

// One scheduled run of a multi-run campaign.
struct RunSpec {
  std::int64_t start_unix_s = 0;
  double duration_s = 0.0;
  PhaseScan scan;
};

// Which fraction of the sidereal day the runs cover, per equal-phase cell,
// counting how many distinct runs hit each cell.
struct PhaseCoverage {
  double cell_width_s = 300.0;
  std::vector<int> multiplicity;
  bool full = false;            // every cell hit by at least one run
  int first_empty_cell = -1;
  int min_multiplicity = 0;
};

struct ComposedDay {
  std::vector<CoincidenceSeries> series;
  PhaseCoverage coverage;
};

// Simulate the whole schedule; run i draws from the sub-stream
// derive_stream(master_seed, i), so output does not depend on generation
// order. An incomplete-coverage schedule is flagged, not rejected.
ComposedDay compose_day(const std::vector<RunSpec>& runs, const SourceModel& model,
                        double bin_width_s, std::uint64_t master_seed);

// Coverage of the sidereal day by a set of already-simulated runs.
PhaseCoverage time_coverage(const std::vector<CoincidenceSeries>& series,
                            double cell_width_s = 300.0);

// Sidereal rotation phase in [0, 2 pi) of an absolute wall-clock time.
double sidereal_phase(double unix_s);

}  // namespace vqi
