#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vqi/common.hpp"
#include "vqi/earth_kinematics.hpp"
#include "vqi/metrology.hpp"
#include "vqi/photon_sim.hpp"

namespace vqi {

struct AnalysisConfig {
  double window_length_s = 0.0;  // resolved default: 1.5 fringe periods
  double step_s = 0.0;           // resolved default: one bin
  double threshold = kBellThreshold;
  double coverage_cell_s = 300.0;
  bool fit_period_free = false;
};

struct SweepConfig {
  enum class Kind { chi, beta };
  Kind kind = Kind::chi;
  int points = 0;           // resolved default: 1801 (chi) / 241 (beta)
  double beta = 1e-3;       // frame speed used by chi sweeps
  double chi_deg = 90.0;    // frame direction used by beta sweeps
  double min = -1.0;        // resolved default: 0 deg / 1e-6
  double max = -1.0;        // resolved default: 180 deg / 1 - 1e-6
  double window_T_s = 0.0;  // resolved default: the fringe period
  bool use_exact_rho = false;
  double exact_rho = 0.0;
};

// File inputs for the fit and scan commands. Relative paths are resolved
// against the directory containing the config file.
struct InputsConfig {
  std::vector<std::string> series;  // explicit series CSV paths
  std::string series_dir;           // or: directory scanned for *.csv
  std::string coverage;             // coverage report JSON (scan gate)
};

struct RunConfig {
  std::uint64_t seed = 42;
  BaselineGeometry geometry{18000.0, 5.8, 5.4e-6};
  // When raw metrology inputs are given they override rho_bar (and, with
  // sites, also r_ab and alpha); the derived budget is kept for reporting.
  bool geometry_from_metrology = false;
  AlignmentBudget budget;
  SourceModel source;
  double fringe_period_s = 360.0;
  double bin_width_s = 60.0;
  double initial_phase_rad = 0.0;
  std::vector<RunSpec> runs;  // default: one 4 h full-ramp run at the epoch
  AnalysisConfig analysis;
  SweepConfig sweep;
  InputsConfig inputs;

  // Provenance of the parsed bytes, echoed into manifests.
  std::string raw_bytes;
  std::uint64_t config_hash = 0;
  std::string base_dir;

  RotationClock rotation_clock() const {
    return RotationClock{kEarthOmega, sweep.window_T_s};
  }
};

// Parse + validate a strict-schema JSON config: unknown keys anywhere are
// rejected, all fields default to the reference experiment's values, and
// every resolved field is concrete (no sentinel defaults remain).
// Throws config_error with "<source_name>: ..." diagnostics.
RunConfig parse_config(const std::string& json_text, const std::string& base_dir,
                       const std::string& source_name);

// Reads and parses a config file; missing file → config_error "config not
// found: <path>".
RunConfig load_config(const std::string& path);

// Resolves a possibly relative path against the config's directory.
std::string resolve_input_path(const RunConfig& config, const std::string& path);

}  // namespace vqi
