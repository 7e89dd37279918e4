#include "vqi/fringe_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vqi {

namespace {

constexpr int kIrlsPasses = 3;
constexpr int kMinActiveBins = 8;

// Abscissa and counts of the scan-active bins inside [start, end), plus the
// total bin count inside the window. The abscissa is active scan time at the
// bin midpoint, reconstructed from the scan_active flags.
struct WindowData {
  std::vector<double> u;
  std::vector<double> y;
  int bins_in_window = 0;
  double bin_width_s = 0.0;
};

std::vector<double> active_prefix(const CoincidenceSeries& series) {
  std::vector<double> prefix(series.bins.size() + 1, 0.0);
  for (std::size_t i = 0; i < series.bins.size(); ++i) {
    prefix[i + 1] = prefix[i] + (series.bins[i].scan_active ? series.bin_width_s : 0.0);
  }
  return prefix;
}

WindowData collect_window(const CoincidenceSeries& series, const std::vector<double>& prefix,
                          double start_s, double end_s) {
  WindowData data;
  data.bin_width_s = series.bin_width_s;
  const double dt = series.bin_width_s;
  for (std::size_t i = 0; i < series.bins.size(); ++i) {
    const double s = series.bins[i].start_s;
    if (s < start_s - 1e-9 || s + dt > end_s + 1e-9) continue;
    ++data.bins_in_window;
    if (!series.bins[i].scan_active) continue;
    data.u.push_back(prefix[i] + dt / 2.0);
    data.y.push_back(series.bins[i].coincidences);
  }
  return data;
}

bool solve3(const double a_in[3][3], const double b_in[3], double x[3]) {
  double a[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a[r][c] = a_in[r][c];
    a[r][3] = b_in[r];
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) return false;
    for (int c = 0; c < 4; ++c) std::swap(a[col][c], a[pivot][c]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (int r = 0; r < 3; ++r) x[r] = a[r][3] / a[r][r];
  return true;
}

bool invert3(const double a[3][3], double inv[3][3]) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  if (std::abs(det) < 1e-300) return false;
  inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  return true;
}

struct LinearFit {
  double m = 0.0, p = 0.0, q = 0.0;  // y ~ m + p cos(w u) + q sin(w u)
  double cov[3][3] = {};
  double weighted_ssr = 0.0;
  bool ok = false;
};

// Weighted linear solve in (m, p, q) at fixed period, with irls_passes
// refinements of the Poisson weights from the fitted means.
LinearFit linear_fit(const std::vector<double>& u, const std::vector<double>& y, double period,
                     int irls_passes) {
  const std::size_t n = u.size();
  const double omega = 2.0 * std::numbers::pi / period;
  std::vector<double> cosw(n), sinw(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    cosw[i] = std::cos(omega * u[i]);
    sinw[i] = std::sin(omega * u[i]);
    w[i] = 1.0 / std::max(y[i], 1.0);
  }

  LinearFit fit;
  double coef[3] = {};
  double a[3][3];
  double b[3];
  for (int pass = 0; pass <= irls_passes; ++pass) {
    for (auto& row : a) row[0] = row[1] = row[2] = 0.0;
    b[0] = b[1] = b[2] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x[3] = {1.0, cosw[i], sinw[i]};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) a[r][c] += w[i] * x[r] * x[c];
        b[r] += w[i] * x[r] * y[i];
      }
    }
    if (!solve3(a, b, coef)) return fit;
    if (pass < irls_passes) {
      for (std::size_t i = 0; i < n; ++i) {
        const double yhat = coef[0] + coef[1] * cosw[i] + coef[2] * sinw[i];
        w[i] = 1.0 / std::max(yhat, 1.0);
      }
    }
  }
  if (!invert3(a, fit.cov)) return fit;

  fit.m = coef[0];
  fit.p = coef[1];
  fit.q = coef[2];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (coef[0] + coef[1] * cosw[i] + coef[2] * sinw[i]);
    fit.weighted_ssr += w[i] * r * r;
  }
  fit.ok = true;
  return fit;
}

double search_ssr(const std::vector<double>& u, const std::vector<double>& y, double period) {
  const LinearFit f = linear_fit(u, y, period, 0);
  return f.ok ? f.weighted_ssr : kUnbounded;
}

// 1-D period search: coarse log grid, then golden-section refinement around
// the best grid point. Deterministic for identical inputs.
double fit_period(const std::vector<double>& u, const std::vector<double>& y, double bin_width_s) {
  const auto [umin, umax] = std::minmax_element(u.begin(), u.end());
  const double span = *umax - *umin + bin_width_s;
  const double t_lo = std::max(4.0 * bin_width_s, span / 64.0);
  const double t_hi = span;

  constexpr int kGridPoints = 257;
  double best_t = t_lo;
  double best_ssr = kUnbounded;
  std::vector<double> grid(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    const double f = static_cast<double>(i) / (kGridPoints - 1);
    grid[i] = t_lo * std::exp(f * std::log(t_hi / t_lo));
    const double ssr = search_ssr(u, y, grid[i]);
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best_t = grid[i];
    }
  }

  const auto idx = static_cast<int>(std::lower_bound(grid.begin(), grid.end(), best_t) -
                                    grid.begin());
  double lo = grid[std::max(0, idx - 1)];
  double hi = grid[std::min(kGridPoints - 1, idx + 1)];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = search_ssr(u, y, x1);
  double f2 = search_ssr(u, y, x2);
  for (int it = 0; it < 64; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = search_ssr(u, y, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = search_ssr(u, y, x2);
    }
  }
  return (lo + hi) / 2.0;
}

SinusoidFit fail(double start_s, double end_s, int active, std::string why) {
  SinusoidFit fit;
  fit.window_start_s = start_s;
  fit.window_end_s = end_s;
  fit.active_bins = active;
  fit.diagnostic = std::move(why);
  return fit;
}

SinusoidFit fit_collected(const WindowData& data, double start_s, double end_s,
                          std::optional<double> fixed_period_s) {
  const int active = static_cast<int>(data.u.size());
  if (active < kMinActiveBins) {
    return fail(start_s, end_s, active, "insufficient scan-active bins");
  }
  if (fixed_period_s && end_s - start_s < 1.5 * *fixed_period_s * (1.0 - 1e-9)) {
    return fail(start_s, end_s, active, "window shorter than 1.5 periods");
  }

  const double period =
      fixed_period_s ? *fixed_period_s : fit_period(data.u, data.y, data.bin_width_s);
  const LinearFit lin = linear_fit(data.u, data.y, period, kIrlsPasses);
  if (!lin.ok) return fail(start_s, end_s, active, "singular normal equations");
  if (!(lin.m > 0.0)) return fail(start_s, end_s, active, "nonpositive fitted mean");

  SinusoidFit fit;
  fit.window_start_s = start_s;
  fit.window_end_s = end_s;
  fit.active_bins = active;
  fit.period_s = period;
  fit.mean = lin.m;
  fit.amplitude = std::hypot(lin.p, lin.q);
  fit.phase_rad = fit.amplitude > 0.0 ? std::atan2(-lin.q, lin.p) : 0.0;
  fit.visibility = fit.amplitude / fit.mean;

  // Delta-method uncertainty of V = sqrt(p^2 + q^2) / m from the final
  // model-based covariance (weights are already the inverse Poisson variance).
  double g[3];
  if (fit.amplitude > 0.0) {
    g[0] = -fit.amplitude / (lin.m * lin.m);
    g[1] = lin.p / (fit.amplitude * lin.m);
    g[2] = lin.q / (fit.amplitude * lin.m);
  } else {
    g[0] = 0.0;
    g[1] = 1.0 / lin.m;
    g[2] = 0.0;
  }
  double var = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) var += g[r] * lin.cov[r][c] * g[c];
  }
  fit.visibility_sigma = std::sqrt(std::max(0.0, var));
  fit.converged = true;
  return fit;
}

}  // namespace

SinusoidFit fit_window(const CoincidenceSeries& series, double window_start_s,
                       double window_end_s, std::optional<double> fixed_period_s) {
  const std::vector<double> prefix = active_prefix(series);
  const WindowData data = collect_window(series, prefix, window_start_s, window_end_s);
  return fit_collected(data, window_start_s, window_end_s, fixed_period_s);
}

double net_visibility(const SinusoidFit& fit, double accidentals_per_bin) {
  if (!(accidentals_per_bin >= 0.0)) {
    throw std::invalid_argument("net_visibility: accidental rate must be >= 0");
  }
  if (!(accidentals_per_bin < fit.mean)) {
    throw std::invalid_argument("net_visibility: accidental rate must be below the fitted mean");
  }
  return fit.amplitude / (fit.mean - accidentals_per_bin);
}

VisibilityTrace sliding_scan(const CoincidenceSeries& series, double window_length_s,
                             double step_s, std::optional<double> fixed_period_s,
                             double threshold, Exec exec) {
  if (!(window_length_s > 0.0) || !(step_s > 0.0)) {
    throw std::invalid_argument("sliding_scan: window and step must be > 0");
  }
  VisibilityTrace trace;
  if (series.bins.empty()) return trace;

  const double series_start = series.bins.front().start_s;
  const double series_end = series.bins.back().start_s + series.bin_width_s;
  if (series_end - series_start < window_length_s - 1e-9) return trace;

  const auto n_windows = static_cast<std::int64_t>(
      std::floor((series_end - series_start - window_length_s) / step_s + 1e-9)) + 1;
  const std::vector<double> prefix = active_prefix(series);

  std::vector<TracePoint> points(n_windows);
  std::vector<char> keep(n_windows, 0);

  auto fit_one = [&](std::int64_t j) {
    const double ws = series_start + static_cast<double>(j) * step_s;
    const double we = ws + window_length_s;
    const WindowData data = collect_window(series, prefix, ws, we);
    // Drop the window when more than 10% of it is outside active scan time.
    const double active_time = static_cast<double>(data.u.size()) * series.bin_width_s;
    if (window_length_s - active_time > 0.10 * window_length_s + 1e-12) return;
    const SinusoidFit fit = fit_collected(data, ws, we, fixed_period_s);
    if (!fit.converged) return;
    TracePoint point;
    point.window_center_s = ws + window_length_s / 2.0;
    point.sidereal_phase_rad = sidereal_phase(static_cast<double>(series.anchor_unix_s) +
                                              series.anchor_frac_s + point.window_center_s);
    point.fit = fit;
    point.above_threshold = fit.visibility > threshold;
    points[j] = point;
    keep[j] = 1;
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t j = 0; j < n_windows; ++j) fit_one(j);
  } else {
    for (std::int64_t j = 0; j < n_windows; ++j) fit_one(j);
  }

  for (std::int64_t j = 0; j < n_windows; ++j) {
    if (keep[j]) trace.points.push_back(points[j]);
  }
  return trace;
}

CoverageReport coverage_report(const std::vector<VisibilityTrace>& traces, double cell_width_s) {
  if (!(cell_width_s > 0.0) || !(cell_width_s <= kSiderealDayS)) {
    throw std::invalid_argument("coverage cell width must be in (0, sidereal day]");
  }
  const int n_cells = static_cast<int>(std::ceil(kSiderealDayS / cell_width_s));

  CoverageReport report;
  report.cell_width_s = cell_width_s;
  report.cells.assign(n_cells, CoverageCell{0, kUnbounded});
  report.min_visibility = kUnbounded;

  for (const auto& trace : traces) {
    std::vector<char> hit(n_cells, 0);
    for (const auto& point : trace.points) {
      const int cell = std::min(
          n_cells - 1, static_cast<int>(point.sidereal_phase_rad / (2.0 * std::numbers::pi) *
                                        static_cast<double>(n_cells)));
      hit[cell] = 1;
      report.cells[cell].min_visibility =
          std::min(report.cells[cell].min_visibility, point.fit.visibility);
      report.min_visibility = std::min(report.min_visibility, point.fit.visibility);
      if (!point.above_threshold) {
        ++report.windows_below_threshold;
        if (report.first_below_phase_rad < 0.0) {
          report.first_below_phase_rad = point.sidereal_phase_rad;
        }
      }
    }
    for (int c = 0; c < n_cells; ++c) report.cells[c].multiplicity += hit[c];
  }

  report.min_multiplicity = n_cells;
  for (int c = 0; c < n_cells; ++c) {
    report.min_multiplicity = std::min(report.min_multiplicity, report.cells[c].multiplicity);
    if (report.cells[c].multiplicity == 0 && report.first_empty_cell < 0) {
      report.first_empty_cell = c;
    }
  }
  report.verdict = report.min_multiplicity >= 1 && report.windows_below_threshold == 0;
  return report;
}

}  // namespace vqi
