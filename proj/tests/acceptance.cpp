// Acceptance gate: exercises the nine headline behaviours end to end and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.
// Tolerances are pinned here on purpose; loosening them is a design change,
// not a test fix.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vqi/earth_kinematics.hpp"
#include "vqi/fringe_analysis.hpp"
#include "vqi/io.hpp"
#include "vqi/metrology.hpp"
#include "vqi/photon_sim.hpp"
#include "vqi/relativity.hpp"
#include "vqi/rng.hpp"
#include "vqi/scan_pipeline.hpp"

namespace fs = std::filesystem;
using namespace vqi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string strf(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double value, double target, double rel_tol) {
  return std::abs(value - target) <= rel_tol * std::abs(target);
}

const BaselineGeometry kGeometry{18000.0, 5.8, 5.4e-6};
const RotationClock kClock{kEarthOmega, 360.0};

// --- 1. Direction scan reports the headline bound at the 90 degree frame. ---
Outcome direction_scan_headline() {
  const auto t0 = std::chrono::steady_clock::now();
  const BoundCurve curve = run_chi_scan(ChiSweep{}, kGeometry, kClock);
  const double elapsed = seconds_since(t0);

  const CurvePoint& mid = curve.points.at(900);
  const bool grid_ok = curve.points.size() == 1801 && std::abs(mid.sweep_value - 90.0) < 1e-9;
  const bool value_ok = within(mid.vqi_over_c, 54000.0, 0.03);
  const bool time_ok = elapsed < 1.0;
  return {grid_ok && value_ok && time_ok,
          strf("V/c = %.1f at 90.0 deg (target 54000 +/- 3%%), %d points in %.3f s",
               mid.vqi_over_c, static_cast<int>(curve.points.size()), elapsed)};
}

// --- 2. Speed sweep limits: 1/rho_bar as beta -> 0, < 2 as beta -> 1. ---
Outcome speed_sweep_limits() {
  const BetaSweep sweep{1e-9, 0.999999, 241, 90.0};
  const BoundCurve curve = run_beta_scan(sweep, kGeometry, kClock);
  const CurvePoint& slow = curve.points.front();
  const CurvePoint& fast = curve.points.back();
  const double limit = 1.0 / kGeometry.rho_bar;  // 1.852e5
  const bool slow_ok = slow.sweep_value == 1e-9 && within(slow.vqi_over_c, limit, 1e-3);
  const bool fast_ok = fast.sweep_value == 0.999999 && fast.vqi_over_c < 2.0;
  return {slow_ok && fast_ok,
          strf("V/c = %.1f at beta = 1e-9 (target %.1f +/- 0.1%%), %.4f at beta = 0.999999 (< 2)",
               slow.vqi_over_c, limit, fast.vqi_over_c)};
}

// --- 3. Least favourable direction: value, location, and order of magnitude. ---
Outcome least_favourable_direction() {
  const WorstCaseReport report = worst_case_report(1801, 1e-3, kGeometry, kClock);
  const double predicted =
      1.0 / (kGeometry.rho_bar + 1e-3 * std::sin(deg_to_rad(kGeometry.alpha_deg)));
  const bool value_ok = within(report.min_vqi_over_c, predicted, 0.01);
  const bool location_ok = report.chi_deg <= 1.0 || report.chi_deg >= 179.0;
  const bool magnitude_ok =
      report.min_vqi_over_c > 1e4 / 3.0 && report.min_vqi_over_c < 3e4;
  return {value_ok && location_ok && magnitude_ok,
          strf("min V/c = %.1f at chi = %.1f deg (predicted %.1f +/- 1%%, quoted >1e4 to "
               "within a factor 3)",
               report.min_vqi_over_c, report.chi_deg, predicted)};
}

// --- 4. Closed form agrees with the boosted-event route on random draws. ---
Outcome closed_form_vs_boosts() {
  std::mt19937_64 gen(0xC4u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto random_direction = [&]() -> Vec3 {
    const double z = 2.0 * unit(gen) - 1.0;
    const double phi = 2.0 * std::numbers::pi * unit(gen);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
  };

  int compared = 0;
  double worst = 0.0;
  while (compared < 1000) {
    const double beta = 0.99 * unit(gen);
    const Vec3 v_dir = random_direction();
    const Vec3 baseline = random_direction();
    const double rho = -0.9 + 1.8 * unit(gen);
    const double beta_parallel = beta * dot(v_dir, baseline);
    if (std::abs(rho + beta_parallel) < 1e-12) continue;  // unbounded corner, resample

    const SpacetimeEvent a{{0.0, 0.0, 0.0}, 0.0};
    const SpacetimeEvent b{18000.0 * baseline, rho * 18000.0 / kSpeedOfLight};
    const double via_events = vqi_from_events(a, b, FrameVelocity{beta * v_dir});
    const double via_formula = vqi_bound_exact(AlignmentRho{rho, false}, beta, beta_parallel);
    worst = std::max(worst, std::abs(via_events - via_formula) / via_formula);
    ++compared;
  }
  return {compared == 1000 && worst < 1e-9,
          strf("1000 random frames, worst relative gap %.2e (< 1e-9)", worst)};
}

// --- 5. Analytic window bound upper-bounds the dense sampling oracle. ---
Outcome window_bound_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const double betas[] = {1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.99};

  std::vector<WindowOracleCase> cases;
  std::vector<double> analytic;
  std::size_t headline_index = 0;
  for (int chi = 0; chi <= 180; ++chi) {
    for (const double beta : betas) {
      const PrivilegedFrame frame{beta, static_cast<double>(chi)};
      if (chi == 90 && beta == 1e-3) headline_index = cases.size();
      cases.push_back({frame, kGeometry, kClock});
      analytic.push_back(bound_beta_parallel(frame, kGeometry, kClock).beta_parallel_abs_bound);
    }
  }

  const std::vector<double> brute = brute_force_window_bounds(cases, 1'000'000);

  int violations = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (brute[i] > analytic[i] + std::max(1e-15 * analytic[i], 1e-25)) ++violations;
  }
  const double gap = (analytic[headline_index] - brute[headline_index]) /
                     analytic[headline_index];
  const double elapsed = seconds_since(t0);
  return {violations == 0 && gap >= 0.0 && gap <= 0.05 && elapsed < 30.0,
          strf("%d/%d grid cases upper-bounded, headline-case gap %.3f%% (<= 5%%) in %.1f s",
               static_cast<int>(cases.size()) - violations, static_cast<int>(cases.size()),
               100.0 * gap, elapsed)};
}

// --- 6. Timing alignment chain from raw metrology inputs. ---
Outcome alignment_chain() {
  const double mismatch = length_mismatch_time(FiberPath{17500.0, 1.468, 0.0},
                                               FiberPath{17500.01, 1.468, 0.0});
  const double dispersion = dispersion_time(DispersionSpec{18.2, 0.5, 17.55});
  const AlignmentBudget budget = total_alignment(mismatch, dispersion, 18000.0);
  const bool ok = within(mismatch, 49e-12, 0.01) && within(dispersion, 319e-12, 0.01) &&
                  within(budget.t_ab_total_s, 323e-12, 0.01) &&
                  within(budget.rho_bar, 5.4e-6, 0.01);
  return {ok, strf("1 cm -> %.1f ps, dispersion %.1f ps, total %.1f ps, rho_bar %.3e "
                   "(targets 49 / 319 / 323 ps, 5.4e-6, +/- 1%%)",
                   mismatch * 1e12, dispersion * 1e12, budget.t_ab_total_s * 1e12,
                   budget.rho_bar)};
}

// --- 7. Fringe visibility recovery across 100 simulated four-hour runs. ---
Outcome visibility_recovery() {
  const SourceModel model;  // 30.5 + 2.5 counts/min, source visibility 0.948
  PhaseScan scan;
  scan.fringe_period_s = 900.0;
  scan.ramp_segments = {{0.0, 14400.0}};
  const double rate_sum =
      model.true_coincidence_rate_per_min + model.accidental_rate_per_min;
  const double v_raw = model.source_visibility * model.true_coincidence_rate_per_min / rate_sum;
  const double accidentals_per_bin = model.accidental_rate_per_min;  // 60 s bins

  int converged = 0;
  int covered = 0;
  bool sigma_ok = true;
  bool identity_ok = true;
  double sigma_sum = 0.0;
  double net_sum = 0.0;
  for (int s = 0; s < 100; ++s) {
    const CoincidenceSeries series = simulate_series(
        model, scan, 14400.0, 60.0, Rng::derive_stream(0xACC7u, s), kSiderealEpochUnixS);
    const SinusoidFit fit = fit_window(series, 0.0, 14400.0, 900.0);
    if (!fit.converged) continue;
    ++converged;
    if (std::abs(fit.visibility - v_raw) < 2.0 * fit.visibility_sigma) ++covered;
    sigma_ok = sigma_ok && fit.visibility_sigma >= 0.005 && fit.visibility_sigma <= 0.03;
    sigma_sum += fit.visibility_sigma;

    const double net = net_visibility(fit, accidentals_per_bin);
    const double restated = fit.visibility * fit.mean / (fit.mean - accidentals_per_bin);
    identity_ok = identity_ok && std::abs(net - restated) <= 1e-12 * restated;
    net_sum += net;
  }
  const double net_mean = converged > 0 ? net_sum / converged : 0.0;
  const bool ok = converged == 100 && covered >= 90 && sigma_ok && identity_ok &&
                  std::abs(net_mean - 0.941) <= 0.015;
  return {ok, strf("%d/100 fits within 2 sigma of %.4f (need >= 90), mean sigma %.4f in "
                   "[0.005, 0.03], net identity exact, mean net %.4f (0.941 +/- 0.015)",
                   covered, v_raw, converged > 0 ? sigma_sum / converged : 0.0, net_mean)};
}

// --- 8. Full-day coverage verdict and its deterministic flip. ---
std::vector<RunSpec> staggered_schedule(double duration_s) {
  std::vector<RunSpec> runs;
  for (int i = 0; i < 4; ++i) {
    RunSpec run;
    run.start_unix_s = kSiderealEpochUnixS + 21541 * i;
    run.duration_s = duration_s;
    run.scan.fringe_period_s = 360.0;
    run.scan.ramp_segments = {{0.0, duration_s}};
    runs.push_back(run);
  }
  return runs;
}

Outcome coverage_verdict() {
  // Brighter source than the reference values: a 540 s window then holds
  // ~4700 coincidences and sits ~12 sigma above threshold, so the verdict is
  // statistics-proof and only the schedule topology decides it.
  SourceModel model;
  model.true_coincidence_rate_per_min *= 16.0;  // 488 per minute
  model.accidental_rate_per_min *= 16.0;        // 40 per minute

  const auto scan_runs = [&](const ComposedDay& day) {
    std::vector<VisibilityTrace> traces;
    for (const CoincidenceSeries& series : day.series) {
      traces.push_back(sliding_scan(series, 540.0, 60.0, 360.0));
    }
    return traces;
  };

  int verdicts = 0;
  for (int s = 0; s < 20; ++s) {
    const ComposedDay day =
        compose_day(staggered_schedule(46800.0), model, 60.0, Rng::derive_stream(0xACC8u, s));
    const CoverageReport report = coverage_report(scan_runs(day));
    if (report.verdict && report.min_multiplicity >= 2) ++verdicts;
  }

  // Single-coverage schedule: all four runs just close the day; removing one
  // tears a fixed hole regardless of the noise realization.
  const ComposedDay single =
      compose_day(staggered_schedule(23100.0), model, 60.0, Rng::derive_stream(0xACC8u, 0));
  const std::vector<VisibilityTrace> all_traces = scan_runs(single);
  const CoverageReport full = coverage_report(all_traces);
  const std::vector<VisibilityTrace> holed = {all_traces[0], all_traces[1], all_traces[3]};
  const CoverageReport dropped = coverage_report(holed);
  const CoverageReport dropped_again = coverage_report(holed);
  const bool flip_ok = full.verdict && !dropped.verdict && dropped.first_empty_cell >= 0 &&
                       dropped.first_empty_cell == dropped_again.first_empty_cell &&
                       dropped.min_multiplicity == dropped_again.min_multiplicity;

  return {verdicts >= 19 && flip_ok,
          strf("%d/20 seeds true with multiplicity >= 2 (need >= 19); dropping one run flips "
               "the verdict (first empty cell %d)",
               verdicts, dropped.first_empty_cell)};
}

// --- 9. simulate -> fit -> scan reruns byte-identically. ---
int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

Outcome pipeline_determinism(const std::string& vqi_path) {
  const auto t0 = std::chrono::steady_clock::now();
  // Same staggered double-coverage schedule and bright source as criterion 8,
  // driven through the binary, with the scan gated on the fitted coverage.
  const std::string config = R"({
  "seed": 911,
  "source": {"true_coincidence_rate_per_min": 488.0, "accidental_rate_per_min": 40.0},
  "scan": {
    "fringe_period_s": 360.0,
    "runs": [
      {"start_unix_s": 946684800, "duration_s": 46800},
      {"start_unix_s": 946706341, "duration_s": 46800},
      {"start_unix_s": 946727882, "duration_s": 46800},
      {"start_unix_s": 946749423, "duration_s": 46800}
    ]
  },
  "inputs": {"series_dir": "sim", "coverage": "fit/coverage.json"}
}
)";

  fs::remove_all("acceptance_tmp");
  for (const char* leg : {"acceptance_tmp/a", "acceptance_tmp/b"}) {
    const std::string dir(leg);
    fs::create_directories(dir);
    write_file_atomic(dir + "/config.json", config);
    for (const char* step : {"simulate", "fit", "scan"}) {
      const std::string out = dir + "/" + (std::string(step) == "simulate" ? "sim"
                                           : std::string(step) == "fit"    ? "fit"
                                                                           : "scan");
      const int rc = run_command(vqi_path + " " + step + " --config " + dir +
                                 "/config.json --out " + out);
      if (rc != 0) {
        return {false, strf("%s leg %s exited with %d", step, dir.c_str(), rc)};
      }
    }
  }

  const char* kArtifacts[] = {
      "sim/run_000.csv", "sim/run_001.csv", "sim/run_002.csv",  "sim/run_003.csv",
      "sim/manifest.json", "fit/trace_000.csv", "fit/trace_001.csv", "fit/trace_002.csv",
      "fit/trace_003.csv", "fit/coverage.json", "fit/fits.json", "fit/manifest.json",
      "scan/curve.csv", "scan/summary.json", "scan/manifest.json"};
  int identical = 0;
  for (const char* name : kArtifacts) {
    const std::string a = read_file(std::string("acceptance_tmp/a/") + name);
    const std::string b = read_file(std::string("acceptance_tmp/b/") + name);
    if (!a.empty() && a == b) ++identical;
  }
  const std::string summary = read_file("acceptance_tmp/a/scan/summary.json");
  const bool gate_ok =
      summary.find("\"violation_evidence\": \"verified\"") != std::string::npos;
  const double elapsed = seconds_since(t0);
  const int total = static_cast<int>(std::size(kArtifacts));
  return {identical == total && gate_ok && elapsed < 60.0,
          strf("%d/%d artifacts byte-identical across reruns, scan gated on verified "
               "coverage, %.1f s (< 60 s)",
               identical, total, elapsed)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-vqi>\n");
    return 64;
  }
  const std::string vqi_path = argv[1];

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"direction-scan bound at the 90 deg frame", direction_scan_headline},
      {"speed-sweep limits", speed_sweep_limits},
      {"least favourable direction", least_favourable_direction},
      {"closed form vs boosted event pairs", closed_form_vs_boosts},
      {"window bound vs dense-sampling oracle", window_bound_oracle},
      {"timing alignment chain", alignment_chain},
      {"fringe visibility recovery", visibility_recovery},
      {"full-day coverage verdict", coverage_verdict},
      {"pipeline determinism", [&] { return pipeline_determinism(vqi_path); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, strf("unexpected exception: %s", e.what())};
    }
    if (!outcome.pass) ++failures;
    std::printf("criterion %zu [%s] %s: %s\n", i + 1, outcome.pass ? "PASS" : "FAIL",
                criteria[i].first, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu of %zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures;
}
