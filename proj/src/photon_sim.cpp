#include "vqi/photon_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqi/rng.hpp"

namespace vqi {

namespace {

void validate(const SourceModel& model) {
  if (!(model.true_coincidence_rate_per_min >= 0.0) || !(model.accidental_rate_per_min >= 0.0) ||
      !(model.singles_rate_a_per_min >= 0.0) || !(model.singles_rate_b_per_min >= 0.0)) {
    throw std::invalid_argument("source rates must be >= 0");
  }
  if (!(model.source_visibility >= 0.0) || !(model.source_visibility <= 1.0)) {
    throw std::invalid_argument("source_visibility must be in [0, 1]");
  }
}

void validate(const PhaseScan& scan) {
  if (!(scan.fringe_period_s > 0.0)) throw std::invalid_argument("fringe_period_s must be > 0");
  double prev_end = -kUnbounded;
  for (const auto& [s, e] : scan.ramp_segments) {
    if (!(e > s)) throw std::invalid_argument("ramp segment must have end > start");
    if (!(s >= prev_end)) throw std::invalid_argument("ramp segments must be disjoint and ordered");
    prev_end = e;
  }
}

double singles_mean(double rate_per_min, double drift_per_hour, double t_s, double bin_width_s) {
  const double rate = rate_per_min * (1.0 + drift_per_hour * t_s / 3600.0);
  return std::max(0.0, rate) * bin_width_s / 60.0;
}

}  // namespace

double active_time_before(const PhaseScan& scan, double t_s) {
  validate(scan);
  double active = 0.0;
  for (const auto& [s, e] : scan.ramp_segments) {
    if (t_s <= s) break;
    active += std::min(t_s, e) - s;
  }
  return active;
}

bool scan_active_at(const PhaseScan& scan, double t_s) {
  for (const auto& [s, e] : scan.ramp_segments) {
    if (t_s >= s && t_s < e) return true;
  }
  return false;
}

double scan_phase_at(const PhaseScan& scan, double t_s) {
  return scan.initial_phase_rad +
         2.0 * std::numbers::pi * active_time_before(scan, t_s) / scan.fringe_period_s;
}

double coincidence_rate_at(const SourceModel& model, const PhaseScan& scan, double t_s) {
  validate(model);
  return model.true_coincidence_rate_per_min *
             (1.0 + model.source_visibility * std::cos(scan_phase_at(scan, t_s))) +
         model.accidental_rate_per_min;
}

CoincidenceSeries simulate_series(const SourceModel& model, const PhaseScan& scan,
                                  double duration_s, double bin_width_s, std::uint64_t seed,
                                  std::int64_t anchor_unix_s) {
  validate(model);
  validate(scan);
  if (!(duration_s >= 0.0)) throw std::invalid_argument("duration must be >= 0");
  if (!(bin_width_s > 0.0)) throw std::invalid_argument("bin width must be > 0");
  const auto n_bins = static_cast<std::int64_t>(std::llround(duration_s / bin_width_s));
  if (std::abs(n_bins * bin_width_s - duration_s) > 1e-6) {
    throw std::invalid_argument("duration must be a whole number of bins");
  }

  CoincidenceSeries series;
  series.bin_width_s = bin_width_s;
  series.anchor_unix_s = anchor_unix_s;
  series.bins.reserve(n_bins);

  Rng rng(seed);
  for (std::int64_t k = 0; k < n_bins; ++k) {
    CoincidenceSeries::Bin bin;
    bin.start_s = static_cast<double>(k) * bin_width_s;
    const double mid = bin.start_s + bin_width_s / 2.0;
    bin.scan_active = scan_active_at(scan, mid);
    bin.singles_a = static_cast<double>(rng.poisson(
        singles_mean(model.singles_rate_a_per_min, model.singles_drift_per_hour, mid, bin_width_s)));
    bin.singles_b = static_cast<double>(rng.poisson(
        singles_mean(model.singles_rate_b_per_min, model.singles_drift_per_hour, mid, bin_width_s)));
    bin.coincidences = static_cast<double>(
        rng.poisson(coincidence_rate_at(model, scan, mid) * bin_width_s / 60.0));
    series.bins.push_back(bin);
  }
  return series;
}

ComposedDay compose_day(const std::vector<RunSpec>& runs, const SourceModel& model,
                        double bin_width_s, std::uint64_t master_seed) {
  ComposedDay day;
  day.series.reserve(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    day.series.push_back(simulate_series(model, runs[i].scan, runs[i].duration_s, bin_width_s,
                                         Rng::derive_stream(master_seed, i),
                                         runs[i].start_unix_s));
  }
  day.coverage = time_coverage(day.series);
  return day;
}

PhaseCoverage time_coverage(const std::vector<CoincidenceSeries>& series, double cell_width_s) {
  if (!(cell_width_s > 0.0) || !(cell_width_s <= kSiderealDayS)) {
    throw std::invalid_argument("coverage cell width must be in (0, sidereal day]");
  }
  const int n_cells = static_cast<int>(std::ceil(kSiderealDayS / cell_width_s));

  PhaseCoverage cov;
  cov.cell_width_s = cell_width_s;
  cov.multiplicity.assign(n_cells, 0);
  for (const auto& run : series) {
    std::vector<char> hit(n_cells, 0);
    for (const auto& bin : run.bins) {
      const double t = static_cast<double>(run.anchor_unix_s) + run.anchor_frac_s + bin.start_s +
                       run.bin_width_s / 2.0;
      const double phase = sidereal_phase(t);
      const int cell = std::min(n_cells - 1, static_cast<int>(phase / (2.0 * std::numbers::pi) *
                                                              static_cast<double>(n_cells)));
      hit[cell] = 1;
    }
    for (int c = 0; c < n_cells; ++c) cov.multiplicity[c] += hit[c];
  }

  cov.min_multiplicity = n_cells > 0 ? *std::min_element(cov.multiplicity.begin(),
                                                         cov.multiplicity.end())
                                     : 0;
  cov.full = cov.min_multiplicity >= 1;
  for (int c = 0; c < n_cells; ++c) {
    if (cov.multiplicity[c] == 0) {
      cov.first_empty_cell = c;
      break;
    }
  }
  return cov;
}

double sidereal_phase(double unix_s) {
  const double days = (unix_s - static_cast<double>(kSiderealEpochUnixS)) / kSiderealDayS;
  double frac = days - std::floor(days);
  if (frac < 0.0) frac += 1.0;  // guard against -0 rounding
  double phase = 2.0 * std::numbers::pi * frac;
  if (phase >= 2.0 * std::numbers::pi) phase = 0.0;
  return phase;
}

}  // namespace vqi
