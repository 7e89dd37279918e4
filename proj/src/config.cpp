#include "vqi/config.hpp"

#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "vqi/io.hpp"

namespace vqi {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw config_error(where + ": " + msg);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, "unknown key '" + it.key() + "'");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& where, const char* key, double fallback) {
  const json* value = find(obj, key);
  if (value == nullptr) return fallback;
  if (!value->is_number()) fail(where, std::string("'") + key + "' must be a number");
  return value->get<double>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
  const json* value = find(obj, key);
  if (value == nullptr) return fallback;
  if (!value->is_boolean()) fail(where, std::string("'") + key + "' must be a boolean");
  return value->get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
  const json* value = find(obj, key);
  if (value == nullptr) return fallback;
  if (!value->is_string()) fail(where, std::string("'") + key + "' must be a string");
  return value->get<std::string>();
}

const json& get_object(const json& obj, const std::string& where, const char* key) {
  const json* value = find(obj, key);
  if (value == nullptr || !value->is_object()) {
    fail(where, std::string("'") + key + "' must be an object");
  }
  return *value;
}

FiberPath parse_fiber(const json& obj, const std::string& where) {
  check_keys(obj, where, {"length_m", "group_index", "length_uncertainty_m"});
  FiberPath fiber;
  fiber.length_m = get_number(obj, where, "length_m", fiber.length_m);
  fiber.group_index = get_number(obj, where, "group_index", fiber.group_index);
  fiber.length_uncertainty_m =
      get_number(obj, where, "length_uncertainty_m", fiber.length_uncertainty_m);
  if (fiber.length_m < 0.0) fail(where, "length_m must be >= 0");
  if (fiber.group_index <= 1.0) fail(where, "group_index must be > 1");
  if (fiber.length_uncertainty_m < 0.0) fail(where, "length_uncertainty_m must be >= 0");
  return fiber;
}

SiteCoordinates parse_site(const json& obj, const std::string& where) {
  check_keys(obj, where, {"latitude_deg", "longitude_deg", "altitude_m"});
  SiteCoordinates site;
  site.latitude_deg = get_number(obj, where, "latitude_deg", site.latitude_deg);
  site.longitude_deg = get_number(obj, where, "longitude_deg", site.longitude_deg);
  site.altitude_m = get_number(obj, where, "altitude_m", site.altitude_m);
  if (std::abs(site.latitude_deg) > 90.0) fail(where, "latitude_deg must be in [-90, 90]");
  if (std::abs(site.longitude_deg) > 180.0) fail(where, "longitude_deg must be in [-180, 180]");
  return site;
}

bool is_bin_aligned(double t_s, double bin_width_s) {
  const double bins = t_s / bin_width_s;
  return std::abs(bins - std::round(bins)) <= 1e-9 * std::max(1.0, std::abs(bins));
}

std::vector<std::pair<double, double>> parse_segments(const json& arr, const std::string& where,
                                                      double duration_s, double bin_width_s) {
  if (!arr.is_array()) fail(where, "'ramp_segments' must be an array of [start, end] pairs");
  std::vector<std::pair<double, double>> segments;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& seg = arr[i];
    const std::string seg_where = where + "[" + std::to_string(i) + "]";
    if (!seg.is_array() || seg.size() != 2 || !seg[0].is_number() || !seg[1].is_number()) {
      fail(seg_where, "segment must be a [start_s, end_s] number pair");
    }
    const double start = seg[0].get<double>();
    const double end = seg[1].get<double>();
    if (!(start >= 0.0 && start < end && end <= duration_s + 1e-9)) {
      fail(seg_where, "segment must satisfy 0 <= start < end <= run duration");
    }
    if (!is_bin_aligned(start, bin_width_s) || !is_bin_aligned(end, bin_width_s)) {
      fail(seg_where, "segment boundaries must fall on bin boundaries");
    }
    if (!segments.empty() && start < segments.back().second - 1e-9) {
      fail(seg_where, "segments must be ordered and disjoint");
    }
    segments.emplace_back(start, end);
  }
  return segments;
}

void parse_geometry(const json& obj, RunConfig& config) {
  const std::string where = "geometry";
  check_keys(obj, where, {"r_ab_m", "alpha_deg", "rho_bar"});
  config.geometry.r_ab_m = get_number(obj, where, "r_ab_m", config.geometry.r_ab_m);
  config.geometry.alpha_deg = get_number(obj, where, "alpha_deg", config.geometry.alpha_deg);
  config.geometry.rho_bar = get_number(obj, where, "rho_bar", config.geometry.rho_bar);
}

void parse_metrology(const json& obj, RunConfig& config) {
  const std::string where = "metrology";
  check_keys(obj, where, {"fiber_a", "fiber_b", "dispersion", "site_a", "site_b"});

  const FiberPath fiber_a = parse_fiber(get_object(obj, where, "fiber_a"), where + ".fiber_a");
  const FiberPath fiber_b = parse_fiber(get_object(obj, where, "fiber_b"), where + ".fiber_b");

  const json& disp_obj = get_object(obj, where, "dispersion");
  const std::string disp_where = where + ".dispersion";
  check_keys(disp_obj, disp_where,
             {"coefficient_ps_per_nm_km", "spectral_half_width_nm", "fiber_length_one_side_km"});
  DispersionSpec dispersion;
  dispersion.coefficient_ps_per_nm_km =
      get_number(disp_obj, disp_where, "coefficient_ps_per_nm_km", 0.0);
  dispersion.spectral_half_width_nm =
      get_number(disp_obj, disp_where, "spectral_half_width_nm", 0.0);
  dispersion.fiber_length_one_side_km =
      get_number(disp_obj, disp_where, "fiber_length_one_side_km", 0.0);
  if (dispersion.coefficient_ps_per_nm_km < 0.0 || dispersion.spectral_half_width_nm < 0.0 ||
      dispersion.fiber_length_one_side_km < 0.0) {
    fail(disp_where, "dispersion terms must be >= 0");
  }

  const bool has_a = find(obj, "site_a") != nullptr;
  const bool has_b = find(obj, "site_b") != nullptr;
  if (has_a != has_b) fail(where, "site_a and site_b must be given together");
  if (has_a) {
    const SiteCoordinates site_a = parse_site(get_object(obj, where, "site_a"), where + ".site_a");
    const SiteCoordinates site_b = parse_site(get_object(obj, where, "site_b"), where + ".site_b");
    try {
      const BaselineGeometry derived = baseline_from_sites(site_a, site_b);
      config.geometry.r_ab_m = derived.r_ab_m;
      config.geometry.alpha_deg = derived.alpha_deg;
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }

  config.budget = total_alignment(length_mismatch_time(fiber_a, fiber_b),
                                  dispersion_time(dispersion), config.geometry.r_ab_m);
  config.geometry.rho_bar = config.budget.rho_bar;
  config.geometry_from_metrology = true;
}

void parse_source(const json& obj, RunConfig& config) {
  const std::string where = "source";
  check_keys(obj, where,
             {"true_coincidence_rate_per_min", "accidental_rate_per_min", "source_visibility",
              "singles_rate_a_per_min", "singles_rate_b_per_min", "singles_drift_per_hour"});
  SourceModel& s = config.source;
  s.true_coincidence_rate_per_min =
      get_number(obj, where, "true_coincidence_rate_per_min", s.true_coincidence_rate_per_min);
  s.accidental_rate_per_min =
      get_number(obj, where, "accidental_rate_per_min", s.accidental_rate_per_min);
  s.source_visibility = get_number(obj, where, "source_visibility", s.source_visibility);
  s.singles_rate_a_per_min =
      get_number(obj, where, "singles_rate_a_per_min", s.singles_rate_a_per_min);
  s.singles_rate_b_per_min =
      get_number(obj, where, "singles_rate_b_per_min", s.singles_rate_b_per_min);
  s.singles_drift_per_hour =
      get_number(obj, where, "singles_drift_per_hour", s.singles_drift_per_hour);
  if (s.true_coincidence_rate_per_min < 0.0 || s.accidental_rate_per_min < 0.0 ||
      s.singles_rate_a_per_min < 0.0 || s.singles_rate_b_per_min < 0.0) {
    fail(where, "rates must be >= 0");
  }
  if (!(s.source_visibility >= 0.0 && s.source_visibility <= 1.0)) {
    fail(where, "source_visibility must be in [0, 1]");
  }
}

void parse_scan(const json& obj, RunConfig& config) {
  const std::string where = "scan";
  check_keys(obj, where, {"fringe_period_s", "bin_width_s", "initial_phase_rad", "runs"});
  config.fringe_period_s = get_number(obj, where, "fringe_period_s", config.fringe_period_s);
  config.bin_width_s = get_number(obj, where, "bin_width_s", config.bin_width_s);
  config.initial_phase_rad = get_number(obj, where, "initial_phase_rad", config.initial_phase_rad);
  if (!(config.fringe_period_s > 0.0)) fail(where, "fringe_period_s must be > 0");
  if (!(config.bin_width_s > 0.0)) fail(where, "bin_width_s must be > 0");

  const json* runs = find(obj, "runs");
  if (runs == nullptr) return;
  if (!runs->is_array() || runs->empty()) fail(where, "'runs' must be a non-empty array");

  config.runs.clear();
  for (std::size_t i = 0; i < runs->size(); ++i) {
    const json& run_obj = (*runs)[i];
    const std::string run_where = "scan.runs[" + std::to_string(i) + "]";
    if (!run_obj.is_object()) fail(run_where, "run must be an object");
    check_keys(run_obj, run_where, {"start_unix_s", "duration_s", "ramp_segments"});

    RunSpec run;
    const json* start = find(run_obj, "start_unix_s");
    if (start != nullptr) {
      if (!start->is_number_integer()) fail(run_where, "'start_unix_s' must be an integer");
      run.start_unix_s = start->get<std::int64_t>();
    } else {
      run.start_unix_s = kSiderealEpochUnixS;
    }
    run.duration_s = get_number(run_obj, run_where, "duration_s", 14400.0);
    if (!(run.duration_s > 0.0)) fail(run_where, "duration_s must be > 0");
    const double bins = run.duration_s / config.bin_width_s;
    if (std::abs(bins - std::round(bins)) > 1e-6) {
      fail(run_where, "duration_s must be a whole number of bins");
    }

    run.scan.fringe_period_s = config.fringe_period_s;
    run.scan.initial_phase_rad = config.initial_phase_rad;
    const json* segments = find(run_obj, "ramp_segments");
    if (segments != nullptr) {
      run.scan.ramp_segments = parse_segments(*segments, run_where + ".ramp_segments",
                                              run.duration_s, config.bin_width_s);
    } else {
      run.scan.ramp_segments = {{0.0, run.duration_s}};
    }
    config.runs.push_back(run);
  }
}

void parse_analysis(const json& obj, RunConfig& config) {
  const std::string where = "analysis";
  check_keys(obj, where,
             {"window_length_s", "step_s", "threshold", "coverage_cell_s", "fit_period"});
  AnalysisConfig& a = config.analysis;
  a.window_length_s = get_number(obj, where, "window_length_s", a.window_length_s);
  a.step_s = get_number(obj, where, "step_s", a.step_s);
  a.threshold = get_number(obj, where, "threshold", a.threshold);
  a.coverage_cell_s = get_number(obj, where, "coverage_cell_s", a.coverage_cell_s);
  const std::string mode = get_string(obj, where, "fit_period", "fixed");
  if (mode == "fixed") {
    a.fit_period_free = false;
  } else if (mode == "free") {
    a.fit_period_free = true;
  } else {
    fail(where, "'fit_period' must be \"fixed\" or \"free\"");
  }
  if (!(a.threshold >= 0.0 && a.threshold < 1.0)) fail(where, "threshold must be in [0, 1)");
  if (!(a.coverage_cell_s > 0.0)) fail(where, "coverage_cell_s must be > 0");
}

void parse_sweep(const json& obj, RunConfig& config) {
  const std::string where = "sweep";
  check_keys(obj, where, {"kind", "points", "beta", "chi_deg", "min", "max", "window_T_s",
                          "use_exact_rho", "exact_rho"});
  SweepConfig& s = config.sweep;
  const std::string kind = get_string(obj, where, "kind", "chi");
  if (kind == "chi") {
    s.kind = SweepConfig::Kind::chi;
  } else if (kind == "beta") {
    s.kind = SweepConfig::Kind::beta;
  } else {
    fail(where, "'kind' must be \"chi\" or \"beta\"");
  }
  const json* points = find(obj, "points");
  if (points != nullptr) {
    if (!points->is_number_integer()) fail(where, "'points' must be an integer");
    const std::int64_t n = points->get<std::int64_t>();
    if (n < 2) fail(where, "'points' must be >= 2");
    s.points = static_cast<int>(n);
  }
  s.beta = get_number(obj, where, "beta", s.beta);
  s.chi_deg = get_number(obj, where, "chi_deg", s.chi_deg);
  s.min = get_number(obj, where, "min", s.min);
  s.max = get_number(obj, where, "max", s.max);
  s.window_T_s = get_number(obj, where, "window_T_s", s.window_T_s);
  s.use_exact_rho = get_bool(obj, where, "use_exact_rho", s.use_exact_rho);
  s.exact_rho = get_number(obj, where, "exact_rho", s.exact_rho);
  if (s.use_exact_rho && !(std::abs(s.exact_rho) < 1.0)) {
    fail(where, "'exact_rho' must satisfy |rho| < 1");
  }
}

void parse_inputs(const json& obj, RunConfig& config) {
  const std::string where = "inputs";
  check_keys(obj, where, {"series", "series_dir", "coverage"});
  const json* series = find(obj, "series");
  if (series != nullptr) {
    if (!series->is_array()) fail(where, "'series' must be an array of paths");
    for (std::size_t i = 0; i < series->size(); ++i) {
      if (!(*series)[i].is_string()) fail(where, "'series' entries must be strings");
      config.inputs.series.push_back((*series)[i].get<std::string>());
    }
  }
  config.inputs.series_dir = get_string(obj, where, "series_dir", "");
  config.inputs.coverage = get_string(obj, where, "coverage", "");
}

// Fills every sentinel default with its concrete value and runs the
// cross-field checks that need the final numbers.
void finalize(RunConfig& config, const std::string& source_name) {
  if (config.runs.empty()) {
    RunSpec run;
    run.start_unix_s = kSiderealEpochUnixS;
    run.duration_s = 14400.0;
    run.scan.fringe_period_s = config.fringe_period_s;
    run.scan.initial_phase_rad = config.initial_phase_rad;
    run.scan.ramp_segments = {{0.0, run.duration_s}};
    config.runs.push_back(run);
  }

  AnalysisConfig& a = config.analysis;
  if (a.window_length_s == 0.0) a.window_length_s = 1.5 * config.fringe_period_s;
  if (a.step_s == 0.0) a.step_s = config.bin_width_s;
  if (!(a.window_length_s > 0.0)) fail(source_name, "analysis.window_length_s must be > 0");
  if (!(a.step_s > 0.0)) fail(source_name, "analysis.step_s must be > 0");

  SweepConfig& s = config.sweep;
  const bool chi = s.kind == SweepConfig::Kind::chi;
  if (s.points == 0) s.points = chi ? 1801 : 241;
  if (s.min < 0.0) s.min = chi ? 0.0 : 1e-6;
  if (s.max < 0.0) s.max = chi ? 180.0 : 1.0 - 1e-6;
  if (s.window_T_s == 0.0) s.window_T_s = config.fringe_period_s;
  if (!(s.window_T_s > 0.0)) fail(source_name, "sweep.window_T_s must be > 0");
  if (chi) {
    if (!(s.min >= 0.0 && s.min < s.max && s.max <= 180.0)) {
      fail(source_name, "sweep range must satisfy 0 <= min < max <= 180 for a chi sweep");
    }
    if (!(s.beta >= 0.0 && s.beta < 1.0)) fail(source_name, "sweep.beta must be in [0, 1)");
  } else {
    if (!(s.min > 0.0 && s.min < s.max && s.max < 1.0)) {
      fail(source_name, "sweep range must satisfy 0 < min < max < 1 for a beta sweep");
    }
    if (!(s.chi_deg >= 0.0 && s.chi_deg <= 180.0)) {
      fail(source_name, "sweep.chi_deg must be in [0, 180]");
    }
  }

  const BaselineGeometry& g = config.geometry;
  if (!(g.r_ab_m > 0.0)) fail(source_name, "geometry.r_ab_m must be > 0");
  if (!(std::abs(g.alpha_deg) < 90.0)) fail(source_name, "geometry.alpha_deg must be in (-90, 90)");
  if (!(g.rho_bar >= 0.0 && g.rho_bar < 1.0)) {
    fail(source_name, "geometry.rho_bar must be in [0, 1)");
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& base_dir,
                       const std::string& source_name) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(source_name + ": " + e.what());
  }
  if (!root.is_object()) throw config_error(source_name + ": top level must be an object");
  check_keys(root, source_name,
             {"seed", "geometry", "metrology", "source", "scan", "analysis", "sweep", "inputs"});

  RunConfig config;
  config.raw_bytes = json_text;
  config.config_hash = fnv1a64(json_text);
  config.base_dir = base_dir;

  const json* seed = find(root, "seed");
  if (seed != nullptr) {
    if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<std::int64_t>() >= 0)) {
      throw config_error(source_name + ": 'seed' must be a non-negative integer");
    }
    config.seed = seed->get<std::uint64_t>();
  }

  // geometry first, so metrology (which may override it) sees r_ab.
  if (const json* obj = find(root, "geometry")) {
    if (!obj->is_object()) throw config_error(source_name + ": 'geometry' must be an object");
    parse_geometry(*obj, config);
  }
  if (const json* obj = find(root, "metrology")) {
    if (!obj->is_object()) throw config_error(source_name + ": 'metrology' must be an object");
    parse_metrology(*obj, config);
  }
  if (const json* obj = find(root, "source")) {
    if (!obj->is_object()) throw config_error(source_name + ": 'source' must be an object");
    parse_source(*obj, config);
  }
  if (const json* obj = find(root, "scan")) {
    if (!obj->is_object()) throw config_error(source_name + ": 'scan' must be an object");
    parse_scan(*obj, config);
  }
  if (const json* obj = find(root, "analysis")) {
    if (!obj->is_object()) throw config_error(source_name + ": 'analysis' must be an object");
    parse_analysis(*obj, config);
  }
  if (const json* obj = find(root, "sweep")) {
    if (!obj->is_object()) throw config_error(source_name + ": 'sweep' must be an object");
    parse_sweep(*obj, config);
  }
  if (const json* obj = find(root, "inputs")) {
    if (!obj->is_object()) throw config_error(source_name + ": 'inputs' must be an object");
    parse_inputs(*obj, config);
  }

  finalize(config, source_name);
  return config;
}

RunConfig load_config(const std::string& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec) || ec) throw config_error("config not found: " + path);
  const std::string text = read_file(path);
  return parse_config(text, fs::path(path).parent_path().string(), path);
}

std::string resolve_input_path(const RunConfig& config, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || config.base_dir.empty()) return path;
  return (std::filesystem::path(config.base_dir) / p).lexically_normal().string();
}

}  // namespace vqi
