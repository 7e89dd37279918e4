// Command-line driver: simulate coincidence runs, fit fringe visibilities,
// and produce influence-speed bound curves, all as reproducible file-based
// pipelines. Every command is a pure function of (config bytes, input file
// bytes, seed); reruns are byte-identical.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vqi/config.hpp"
#include "vqi/fringe_analysis.hpp"
#include "vqi/io.hpp"
#include "vqi/photon_sim.hpp"
#include "vqi/scan_pipeline.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct CommandArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool assume_violation = false;
};

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string run_file_name(std::size_t index, const char* prefix) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03zu.csv", prefix, index);
  return buf;
}

// Manifests must stay byte-identical across reruns in different directories,
// so they carry hashes and bare file names but never absolute paths.
ojson manifest_base(const char* command, const vqi::RunConfig& config) {
  ojson manifest;
  manifest["command"] = command;
  manifest["seed"] = config.seed;
  manifest["config_fnv1a64"] = hash_hex(config.config_hash);
  manifest["sidereal_day_s"] = vqi::kSiderealDayS;
  manifest["sidereal_epoch_unix_s"] = vqi::kSiderealEpochUnixS;
  return manifest;
}

void write_json(const std::string& path, const ojson& j) {
  vqi::write_file_atomic(path, j.dump(2) + "\n");
}

ojson geometry_json(const vqi::BaselineGeometry& geom) {
  ojson j;
  j["r_ab_m"] = geom.r_ab_m;
  j["alpha_deg"] = geom.alpha_deg;
  j["rho_bar"] = geom.rho_bar;
  return j;
}

int cmd_simulate(const CommandArgs& args) {
  vqi::RunConfig config = vqi::load_config(args.config_path);
  if (args.seed_given) config.seed = args.seed;
  fs::create_directories(args.out_dir);

  const vqi::ComposedDay day =
      vqi::compose_day(config.runs, config.source, config.bin_width_s, config.seed);

  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < day.series.size(); ++i) {
    const std::string name = run_file_name(i, "run");
    vqi::write_file_atomic((fs::path(args.out_dir) / name).string(),
                           vqi::series_to_csv(day.series[i]));
    outputs.push_back(name);
  }

  const vqi::PhaseCoverage coverage =
      vqi::time_coverage(day.series, config.analysis.coverage_cell_s);

  ojson manifest = manifest_base("simulate", config);
  manifest["outputs"] = outputs;
  ojson cov;
  cov["cell_width_s"] = coverage.cell_width_s;
  cov["full"] = coverage.full;
  cov["min_multiplicity"] = coverage.min_multiplicity;
  cov["first_empty_cell"] = coverage.first_empty_cell;
  manifest["time_coverage"] = cov;
  write_json((fs::path(args.out_dir) / "manifest.json").string(), manifest);
  return 0;
}

std::vector<std::string> collect_series_paths(const vqi::RunConfig& config) {
  std::vector<std::string> paths;
  for (const std::string& entry : config.inputs.series) {
    paths.push_back(vqi::resolve_input_path(config, entry));
  }
  if (!config.inputs.series_dir.empty()) {
    const std::string dir = vqi::resolve_input_path(config, config.inputs.series_dir);
    if (!fs::is_directory(dir)) {
      throw vqi::config_error("inputs.series_dir is not a directory: " + dir);
    }
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        found.push_back(entry.path().string());
      }
    }
    std::sort(found.begin(), found.end());
    paths.insert(paths.end(), found.begin(), found.end());
  }
  if (paths.empty()) {
    throw vqi::config_error(
        "no input series listed (set inputs.series or inputs.series_dir in the config)");
  }
  return paths;
}

int cmd_fit(const CommandArgs& args) {
  const vqi::RunConfig config = vqi::load_config(args.config_path);
  fs::create_directories(args.out_dir);

  const std::vector<std::string> paths = collect_series_paths(config);
  const std::optional<double> fixed_period =
      config.analysis.fit_period_free ? std::nullopt
                                      : std::optional<double>(config.fringe_period_s);

  std::vector<vqi::VisibilityTrace> traces;
  std::vector<std::string> outputs;
  ojson fits = ojson::array();

  for (std::size_t i = 0; i < paths.size(); ++i) {
    const vqi::CoincidenceSeries series =
        vqi::series_from_csv(vqi::read_file(paths[i]), paths[i]);
    const vqi::VisibilityTrace trace =
        vqi::sliding_scan(series, config.analysis.window_length_s, config.analysis.step_s,
                          fixed_period, config.analysis.threshold);
    traces.push_back(trace);

    const std::string trace_name = run_file_name(i, "trace");
    vqi::write_file_atomic((fs::path(args.out_dir) / trace_name).string(),
                           vqi::trace_to_csv(trace));
    outputs.push_back(trace_name);

    // Whole-run fit, reported alongside the sliding trace.
    ojson entry;
    entry["series"] = fs::path(paths[i]).filename().string();
    if (series.bins.empty()) {
      entry["converged"] = false;
      entry["diagnostic"] = "empty series";
    } else {
      const double span = series.bins.back().start_s + series.bin_width_s;
      const vqi::SinusoidFit fit = vqi::fit_window(series, 0.0, span, fixed_period);
      entry["converged"] = fit.converged;
      if (fit.converged) {
        entry["mean"] = fit.mean;
        entry["amplitude"] = fit.amplitude;
        entry["phase_rad"] = fit.phase_rad;
        entry["period_s"] = fit.period_s;
        entry["visibility"] = fit.visibility;
        entry["visibility_sigma"] = fit.visibility_sigma;
        const double accidentals_per_bin =
            config.source.accidental_rate_per_min * series.bin_width_s / 60.0;
        if (accidentals_per_bin < fit.mean) {
          entry["net_visibility"] = vqi::net_visibility(fit, accidentals_per_bin);
        } else {
          entry["net_visibility"] = nullptr;
        }
      } else {
        entry["diagnostic"] = fit.diagnostic;
      }
    }
    fits.push_back(entry);
  }

  const vqi::CoverageReport coverage =
      vqi::coverage_report(traces, config.analysis.coverage_cell_s);
  vqi::write_file_atomic((fs::path(args.out_dir) / "coverage.json").string(),
                         vqi::coverage_to_json(coverage));
  outputs.push_back("coverage.json");

  write_json((fs::path(args.out_dir) / "fits.json").string(), fits);
  outputs.push_back("fits.json");

  ojson manifest = manifest_base("fit", config);
  manifest["outputs"] = outputs;
  write_json((fs::path(args.out_dir) / "manifest.json").string(), manifest);
  return 0;
}

// Shared gate for bound/scan: returns the coverage verdict evidence, or
// throws (prerequisite_error without evidence/waiver, config_error when a
// named report is unreadable or malformed).
std::string check_violation_gate(const vqi::RunConfig& config, bool assume_violation) {
  if (assume_violation) {
    vqi::ensure_violation(nullptr, true);
    return "waived";
  }
  if (config.inputs.coverage.empty()) {
    vqi::ensure_violation(nullptr, false);  // throws prerequisite_error
  }
  const std::string path = vqi::resolve_input_path(config, config.inputs.coverage);
  const vqi::CoverageReport coverage =
      vqi::coverage_from_json(vqi::read_file(path), path);
  vqi::ensure_violation(&coverage, false);
  return "verified";
}

int cmd_bound(const CommandArgs& args) {
  const vqi::RunConfig config = vqi::load_config(args.config_path);
  const std::string gate = check_violation_gate(config, args.assume_violation);
  fs::create_directories(args.out_dir);

  const int chi_points =
      config.sweep.kind == vqi::SweepConfig::Kind::chi ? config.sweep.points : 1801;
  const vqi::BoundOptions options{config.sweep.use_exact_rho, config.sweep.exact_rho};
  const vqi::RotationClock clock = config.rotation_clock();
  const vqi::WorstCaseReport report =
      vqi::worst_case_report(chi_points, config.sweep.beta, config.geometry, clock, options);

  // The full curve backing the report, for plotting next to the summary.
  vqi::ChiSweep sweep;
  sweep.points = chi_points;
  sweep.beta = config.sweep.beta;
  const vqi::BoundCurve curve = vqi::run_chi_scan(sweep, config.geometry, clock, options);
  vqi::write_file_atomic((fs::path(args.out_dir) / "curve.csv").string(),
                         vqi::curve_to_csv(curve));

  ojson summary;
  summary["command"] = "bound";
  summary["min_vqi_over_c"] = report.min_vqi_over_c;
  summary["chi_deg"] = report.chi_deg;
  summary["case_tag"] = vqi::case_tag_name(report.case_tag);
  summary["window_center_phase_rad"] = report.window_center_phase_rad;
  summary["beta_parallel_bound"] = report.beta_parallel_bound;
  ojson inputs;
  inputs["beta"] = report.beta;
  inputs["chi_points"] = report.chi_points;
  inputs["geometry"] = geometry_json(report.geometry);
  inputs["omega_rad_per_s"] = report.clock.omega_rad_per_s;
  inputs["window_T_s"] = report.clock.window_T_s;
  inputs["use_exact_rho"] = report.options.use_exact_rho;
  inputs["exact_rho"] = report.options.exact_rho;
  summary["inputs"] = inputs;
  summary["violation_evidence"] = gate;
  write_json((fs::path(args.out_dir) / "summary.json").string(), summary);

  ojson manifest = manifest_base("bound", config);
  manifest["outputs"] = {"curve.csv", "summary.json"};
  write_json((fs::path(args.out_dir) / "manifest.json").string(), manifest);
  return 0;
}

int cmd_scan(const CommandArgs& args) {
  const vqi::RunConfig config = vqi::load_config(args.config_path);
  const std::string gate = check_violation_gate(config, args.assume_violation);
  fs::create_directories(args.out_dir);

  const vqi::BoundOptions options{config.sweep.use_exact_rho, config.sweep.exact_rho};
  const vqi::RotationClock clock = config.rotation_clock();
  const vqi::SweepConfig& s = config.sweep;

  vqi::BoundCurve curve;
  ojson inputs;
  if (s.kind == vqi::SweepConfig::Kind::chi) {
    vqi::ChiSweep sweep{s.min, s.max, s.points, s.beta};
    curve = vqi::run_chi_scan(sweep, config.geometry, clock, options);
    inputs["kind"] = "chi";
    inputs["chi_min_deg"] = sweep.chi_min_deg;
    inputs["chi_max_deg"] = sweep.chi_max_deg;
    inputs["points"] = sweep.points;
    inputs["beta"] = sweep.beta;
  } else {
    vqi::BetaSweep sweep{s.min, s.max, s.points, s.chi_deg};
    curve = vqi::run_beta_scan(sweep, config.geometry, clock, options);
    inputs["kind"] = "beta";
    inputs["beta_min"] = sweep.beta_min;
    inputs["beta_max"] = sweep.beta_max;
    inputs["points"] = sweep.points;
    inputs["chi_deg"] = sweep.chi_deg;
  }
  inputs["geometry"] = geometry_json(config.geometry);
  inputs["omega_rad_per_s"] = clock.omega_rad_per_s;
  inputs["window_T_s"] = clock.window_T_s;
  inputs["use_exact_rho"] = options.use_exact_rho;
  inputs["exact_rho"] = options.exact_rho;

  vqi::write_file_atomic((fs::path(args.out_dir) / "curve.csv").string(),
                         vqi::curve_to_csv(curve));

  ojson summary;
  summary["command"] = "scan";
  summary["min_vqi_over_c"] = curve.min_vqi_over_c;
  summary["min_sweep_value"] = curve.min_sweep_value;
  summary["points"] = curve.points.size();
  summary["inputs"] = inputs;
  summary["violation_evidence"] = gate;
  write_json((fs::path(args.out_dir) / "summary.json").string(), summary);

  ojson manifest = manifest_base("scan", config);
  manifest["outputs"] = {"curve.csv", "summary.json"};
  write_json((fs::path(args.out_dir) / "manifest.json").string(), manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference bounds on a superluminal influence"};
  app.require_subcommand(1);

  CommandArgs args;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&](const std::string&) { args.seed_given = true; });
  };

  CLI::App* simulate = app.add_subcommand("simulate", "generate coincidence series CSVs");
  CLI::App* fit = app.add_subcommand("fit", "sliding-window visibility traces + coverage");
  CLI::App* bound = app.add_subcommand("bound", "worst-case frame report at fixed speed");
  CLI::App* scan = app.add_subcommand("scan", "bound curve over frame direction or speed");
  for (CLI::App* cmd : {simulate, fit, bound, scan}) add_common(cmd);
  for (CLI::App* cmd : {bound, scan}) {
    cmd->add_flag("--assume-violation", args.assume_violation,
                  "waive the inequality-violation evidence requirement");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(args);
    if (fit->parsed()) return cmd_fit(args);
    if (bound->parsed()) return cmd_bound(args);
    return cmd_scan(args);
  } catch (const vqi::prerequisite_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const vqi::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
