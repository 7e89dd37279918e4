#include "vqi/earth_kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace vqi {

namespace {

void validate(const PrivilegedFrame& frame, const BaselineGeometry& geom,
              const RotationClock& clock) {
  if (!(frame.beta >= 0.0) || !(frame.beta < 1.0)) {
    throw std::invalid_argument("frame.beta must be in [0, 1)");
  }
  if (!(frame.chi_deg >= 0.0) || !(frame.chi_deg <= 180.0)) {
    throw std::invalid_argument("frame.chi_deg must be in [0, 180]");
  }
  if (!(geom.r_ab_m > 0.0)) throw std::invalid_argument("geometry.r_ab_m must be > 0");
  if (!(geom.alpha_deg > -90.0) || !(geom.alpha_deg < 90.0)) {
    throw std::invalid_argument("geometry.alpha_deg must be in (-90, 90)");
  }
  if (!(geom.rho_bar >= 0.0) || !(geom.rho_bar < 1.0)) {
    throw std::invalid_argument("geometry.rho_bar must be in [0, 1)");
  }
  if (!(clock.omega_rad_per_s > 0.0)) throw std::invalid_argument("clock.omega must be > 0");
  if (!(clock.window_T_s > 0.0)) throw std::invalid_argument("clock.window_T_s must be > 0");
  if (!(clock.omega_rad_per_s * clock.window_T_s < 2.0 * std::numbers::pi)) {
    throw std::invalid_argument("clock: window must be shorter than one revolution");
  }
}

// Decomposition beta_par(t) = K + M cos(omega t) with M >= 0 for chi in [0, 180].
struct Harmonics {
  double K;  // beta cos chi sin alpha
  double M;  // beta sin chi cos alpha, >= 0
};

Harmonics harmonics(const PrivilegedFrame& frame, const BaselineGeometry& geom) {
  const double chi = deg_to_rad(frame.chi_deg);
  const double alpha = deg_to_rad(geom.alpha_deg);
  return {frame.beta * std::cos(chi) * std::sin(alpha),
          frame.beta * std::sin(chi) * std::cos(alpha)};
}

// Max and min over windows of `width` consecutive samples starting at each
// index of the circular array, via monotone deques.
void sliding_extrema(const std::vector<double>& values, std::int64_t width,
                     std::vector<double>& wmax, std::vector<double>& wmin) {
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  wmax.assign(n, 0.0);
  wmin.assign(n, 0.0);
  std::vector<std::int64_t> qmax(n + width), qmin(n + width);
  std::int64_t maxlo = 0, maxhi = 0, minlo = 0, minhi = 0;  // half-open [lo, hi)
  for (std::int64_t i = 0; i < n + width - 1; ++i) {
    const double v = values[i % n];
    while (maxhi > maxlo && values[qmax[maxhi - 1] % n] <= v) --maxhi;
    qmax[maxhi++] = i;
    while (minhi > minlo && values[qmin[minhi - 1] % n] >= v) --minhi;
    qmin[minhi++] = i;
    const std::int64_t j = i - width + 1;
    if (j >= 0) {
      while (qmax[maxlo] < j) ++maxlo;
      while (qmin[minlo] < j) ++minlo;
      wmax[j] = values[qmax[maxlo] % n];
      wmin[j] = values[qmin[minlo] % n];
    }
  }
}

std::int64_t certified_window_samples(const RotationClock& clock, std::int64_t n) {
  const double period = 2.0 * std::numbers::pi / clock.omega_rad_per_s;
  const auto w = static_cast<std::int64_t>(std::floor(clock.window_T_s / period * n));
  return std::clamp<std::int64_t>(w, 1, n);
}

double min_over_windows(double K, double M, const std::vector<double>& cmax,
                        const std::vector<double>& cmin) {
  // max |K + M c| over a window equals the larger endpoint value since the
  // map is affine in c with M >= 0 and |.| is convex.
  double best = kUnbounded;
  const std::size_t n = cmax.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double hi = std::abs(K + M * cmax[j]);
    const double lo = std::abs(K + M * cmin[j]);
    best = std::min(best, std::max(hi, lo));
  }
  return best;
}

}  // namespace

double beta_parallel_at(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                        const RotationClock& clock, double t_s) {
  validate(frame, geom, clock);
  const Harmonics h = harmonics(frame, geom);
  return h.K + h.M * std::cos(clock.omega_rad_per_s * t_s);
}

CaseTag classify_case(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                      const RotationClock& clock) {
  validate(frame, geom, clock);
  const double chi = deg_to_rad(frame.chi_deg);
  const double alpha = deg_to_rad(geom.alpha_deg);
  const double ct = std::cos(clock.omega_rad_per_s * clock.window_T_s / 4.0);
  // C_T |tan chi| > |tan alpha|, cross-multiplied by the positive cos factors.
  const double lhs = ct * ct * std::abs(std::sin(chi)) * std::abs(std::cos(alpha));
  const double rhs = std::abs(std::cos(chi)) * std::abs(std::sin(alpha));
  return lhs > rhs ? CaseTag::crossing : CaseTag::polar;
}

WindowBound bound_beta_parallel(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                                const RotationClock& clock) {
  const CaseTag tag = classify_case(frame, geom, clock);
  const double chi = deg_to_rad(frame.chi_deg);
  const double alpha = deg_to_rad(geom.alpha_deg);
  const double half_wt = clock.omega_rad_per_s * clock.window_T_s / 2.0;
  const Harmonics h = harmonics(frame, geom);

  if (tag == CaseTag::crossing) {
    const double sc = std::sin(chi) * std::cos(alpha);
    const double cs = std::cos(chi) * std::sin(alpha);
    const double bound = frame.beta * std::sqrt(std::max(0.0, sc * sc - cs * cs)) * half_wt;
    // Zero crossing of beta_par: cos omega t0 = -K / M = -tan alpha / tan chi.
    const double c0 = std::clamp(h.M > 0.0 ? -h.K / h.M : 0.0, -1.0, 1.0);
    return {tag, bound, std::acos(c0)};
  }

  const double bound = std::max(0.0, std::abs(h.K) - h.M * std::cos(half_wt));
  // Extremum opposing the constant term: cos omega t = -sign(K).
  const double center = h.K >= 0.0 ? std::numbers::pi : 0.0;
  return {tag, bound, center};
}

double brute_force_window_bound(const PrivilegedFrame& frame, const BaselineGeometry& geom,
                                const RotationClock& clock, std::int64_t samples_per_period) {
  return brute_force_window_bounds({{frame, geom, clock}}, samples_per_period, Exec::serial)[0];
}

std::vector<double> brute_force_window_bounds(const std::vector<WindowOracleCase>& cases,
                                              std::int64_t samples_per_period, Exec exec) {
  if (samples_per_period < 10000) {
    throw std::invalid_argument("brute_force_window_bound: need >= 1e4 samples per period");
  }
  for (const auto& c : cases) validate(c.frame, c.geom, c.clock);

  const std::int64_t n = samples_per_period;
  std::vector<double> table(n);
  for (std::int64_t i = 0; i < n; ++i) {
    table[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }

  // Sliding extrema of the cosine table are shared by all cases with the same
  // certified window width.
  std::map<std::int64_t, std::pair<std::vector<double>, std::vector<double>>> extrema;
  std::vector<std::int64_t> widths(cases.size());
  for (std::size_t k = 0; k < cases.size(); ++k) {
    widths[k] = certified_window_samples(cases[k].clock, n);
    auto [it, inserted] = extrema.try_emplace(widths[k]);
    if (inserted) sliding_extrema(table, widths[k], it->second.first, it->second.second);
  }

  std::vector<double> result(cases.size());
  const auto count = static_cast<std::int64_t>(cases.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < count; ++k) {
      const Harmonics h = harmonics(cases[k].frame, cases[k].geom);
      const auto& [cmax, cmin] = extrema.at(widths[k]);
      result[k] = min_over_windows(h.K, h.M, cmax, cmin);
    }
  } else {
    for (std::int64_t k = 0; k < count; ++k) {
      const Harmonics h = harmonics(cases[k].frame, cases[k].geom);
      const auto& [cmax, cmin] = extrema.at(widths[k]);
      result[k] = min_over_windows(h.K, h.M, cmax, cmin);
    }
  }
  return result;
}

}  // namespace vqi
