// Wall-clock comparison of the serial reference kernels against their OpenMP
// counterparts. The parallel paths must be bit-identical to the serial ones;
// this harness verifies that on realistic workloads and reports the timings.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "vqi/earth_kinematics.hpp"
#include "vqi/fringe_analysis.hpp"
#include "vqi/photon_sim.hpp"
#include "vqi/rng.hpp"
#include "vqi/scan_pipeline.hpp"

using namespace vqi;

namespace {

template <typename F>
double time_ms(F&& work) {
  const auto t0 = std::chrono::steady_clock::now();
  work();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-32s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n", name,
              serial_ms, parallel_ms, parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0,
              identical ? "bit-identical" : "MISMATCH");
}

bool same_curve(const BoundCurve& a, const BoundCurve& b) {
  if (a.points.size() != b.points.size() || a.min_index != b.min_index) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].sweep_value != b.points[i].sweep_value ||
        a.points[i].beta_parallel_bound != b.points[i].beta_parallel_bound ||
        a.points[i].vqi_over_c != b.points[i].vqi_over_c ||
        a.points[i].case_tag != b.points[i].case_tag) {
      return false;
    }
  }
  return a.min_vqi_over_c == b.min_vqi_over_c && a.min_sweep_value == b.min_sweep_value;
}

bool same_trace(const VisibilityTrace& a, const VisibilityTrace& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const TracePoint& p = a.points[i];
    const TracePoint& q = b.points[i];
    if (p.window_center_s != q.window_center_s ||
        p.sidereal_phase_rad != q.sidereal_phase_rad ||
        p.fit.visibility != q.fit.visibility ||
        p.fit.visibility_sigma != q.fit.visibility_sigma || p.fit.mean != q.fit.mean ||
        p.fit.amplitude != q.fit.amplitude || p.fit.phase_rad != q.fit.phase_rad ||
        p.above_threshold != q.above_threshold) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  const BaselineGeometry geometry{18000.0, 5.8, 5.4e-6};
  const RotationClock clock{kEarthOmega, 360.0};
  int mismatches = 0;

  // Dense-sampling window-bound oracle over a 1 degree direction grid.
  {
    std::vector<WindowOracleCase> cases;
    for (int chi = 0; chi <= 180; ++chi) {
      cases.push_back({PrivilegedFrame{1e-3, static_cast<double>(chi)}, geometry, clock});
    }
    std::vector<double> serial_out, parallel_out;
    const double serial_ms =
        time_ms([&] { serial_out = brute_force_window_bounds(cases, 200000, Exec::serial); });
    const double parallel_ms = time_ms(
        [&] { parallel_out = brute_force_window_bounds(cases, 200000, Exec::parallel); });
    const bool identical = serial_out == parallel_out;
    mismatches += !identical;
    report("window oracle (181 x 2e5)", serial_ms, parallel_ms, identical);
  }

  // Sliding-window visibility scan over a 13 h run.
  {
    PhaseScan scan;
    scan.fringe_period_s = 360.0;
    scan.ramp_segments = {{0.0, 46800.0}};
    const CoincidenceSeries series =
        simulate_series(SourceModel{}, scan, 46800.0, 60.0, Rng::derive_stream(0xBE7C0u, 0),
                        kSiderealEpochUnixS);
    VisibilityTrace serial_out, parallel_out;
    const double serial_ms = time_ms(
        [&] { serial_out = sliding_scan(series, 540.0, 60.0, 360.0, kBellThreshold,
                                        Exec::serial); });
    const double parallel_ms = time_ms(
        [&] { parallel_out = sliding_scan(series, 540.0, 60.0, 360.0, kBellThreshold,
                                          Exec::parallel); });
    const bool identical = same_trace(serial_out, parallel_out);
    mismatches += !identical;
    report("sliding scan (13 h, 540 s win)", serial_ms, parallel_ms, identical);
  }

  // Direction scan on a 0.01 degree grid.
  {
    const ChiSweep sweep{0.0, 180.0, 18001, 1e-3};
    BoundCurve serial_out, parallel_out;
    const double serial_ms =
        time_ms([&] { serial_out = run_chi_scan(sweep, geometry, clock, {}, Exec::serial); });
    const double parallel_ms = time_ms(
        [&] { parallel_out = run_chi_scan(sweep, geometry, clock, {}, Exec::parallel); });
    const bool identical = same_curve(serial_out, parallel_out);
    mismatches += !identical;
    report("direction scan (18001 points)", serial_ms, parallel_ms, identical);
  }

  if (mismatches != 0) {
    std::fprintf(stderr, "error: %d kernel(s) diverged between serial and parallel\n",
                 mismatches);
    return 1;
  }
  return 0;
}
