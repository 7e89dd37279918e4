#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "vqi/fringe_analysis.hpp"
#include "vqi/photon_sim.hpp"
#include "vqi/scan_pipeline.hpp"

namespace vqi {

inline constexpr std::string_view kSeriesCsvHeader =
    "start_s,wall_clock_iso8601,singles_a,singles_b,coincidences,scan_active";
inline constexpr std::string_view kTraceCsvHeader =
    "window_center_s,sidereal_phase_rad,visibility,visibility_sigma,mean,amplitude,phase_rad,"
    "above_threshold";
inline constexpr std::string_view kCurveCsvHeader =
    "sweep_value,case_tag,beta_parallel_bound,vqi_over_c";

// Shortest decimal form that round-trips the exact double (std::to_chars).
std::string format_double(double value);

// UTC timestamp `YYYY-MM-DDThh:mm:ss[.fffffffff]Z`; the fractional part is
// rounded to nanoseconds and printed with trailing zeros trimmed.
std::string format_iso8601_utc(std::int64_t unix_s, double frac_s = 0.0);

// Inverse of format_iso8601_utc. Returns (whole seconds, fractional part).
// Throws std::invalid_argument on malformed input.
std::pair<std::int64_t, double> parse_iso8601_utc(std::string_view text);

const char* case_tag_name(CaseTag tag);

// CSV serialization. Writers emit the pinned header plus one row per record,
// '\n' separated; readers enforce the header and report malformed rows as
// config_error with "source:line: message".
std::string series_to_csv(const CoincidenceSeries& series);
CoincidenceSeries series_from_csv(std::string_view text, const std::string& source_name);
std::string trace_to_csv(const VisibilityTrace& trace);
std::string curve_to_csv(const BoundCurve& curve);

// Coverage report round-trip as JSON (the artifact the scan gate consumes).
// The reader requires a boolean "verdict" and rejects unknown keys; malformed
// input → config_error naming the source.
std::string coverage_to_json(const CoverageReport& report);
CoverageReport coverage_from_json(std::string_view text, const std::string& source_name);

// Whole-file read; throws config_error when unreadable.
std::string read_file(const std::string& path);

// Write via temp file + rename so partially written outputs never exist.
void write_file_atomic(const std::string& path, std::string_view content);

// FNV-1a 64-bit over raw bytes, for config fingerprints in manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace vqi
