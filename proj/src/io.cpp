#include "vqi/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace vqi {
namespace {

// Proleptic-Gregorian day arithmetic (Howard Hinnant's algorithms), UTC only.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += (m <= 2);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double_field(std::string_view field, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " is not a finite number: '" +
                                std::string(field) + "'");
  }
  return value;
}

unsigned parse_digits(std::string_view text, std::size_t pos, std::size_t count,
                      const char* what) {
  unsigned value = 0;
  if (pos + count > text.size()) throw std::invalid_argument(std::string(what) + " truncated");
  for (std::size_t i = 0; i < count; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') {
      throw std::invalid_argument(std::string(what) + " has a non-digit character");
    }
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw std::invalid_argument(std::string("expected '") + c + "' at position " +
                                std::to_string(pos));
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_iso8601_utc(std::int64_t unix_s, double frac_s) {
  if (!std::isfinite(frac_s)) throw std::invalid_argument("fractional seconds must be finite");
  if (frac_s < 0.0 || frac_s >= 1.0) {
    const double whole = std::floor(frac_s);
    unix_s += static_cast<std::int64_t>(whole);
    frac_s -= whole;
  }
  std::int64_t ns = std::llround(frac_s * 1e9);
  if (ns >= 1000000000) {
    ns = 0;
    unix_s += 1;
  }

  std::int64_t days = unix_s / 86400;
  std::int64_t rem = unix_s % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t year = 0;
  unsigned month = 0, day = 0;
  civil_from_days(days, year, month, day);

  char buf[48];
  int len = std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                          static_cast<long long>(year), month, day,
                          static_cast<long long>(rem / 3600),
                          static_cast<long long>((rem % 3600) / 60),
                          static_cast<long long>(rem % 60));
  std::string out(buf, static_cast<std::size_t>(len));
  if (ns > 0) {
    char frac[16];
    std::snprintf(frac, sizeof frac, ".%09lld", static_cast<long long>(ns));
    std::string_view digits(frac);
    while (digits.back() == '0') digits.remove_suffix(1);
    out += digits;
  }
  out += 'Z';
  return out;
}

std::pair<std::int64_t, double> parse_iso8601_utc(std::string_view text) {
  // YYYY-MM-DDThh:mm:ss[.f...]Z with a strictly 4-digit year.
  const unsigned year = parse_digits(text, 0, 4, "year");
  expect_char(text, 4, '-');
  const unsigned month = parse_digits(text, 5, 2, "month");
  expect_char(text, 7, '-');
  const unsigned day = parse_digits(text, 8, 2, "day");
  expect_char(text, 10, 'T');
  const unsigned hour = parse_digits(text, 11, 2, "hour");
  expect_char(text, 13, ':');
  const unsigned minute = parse_digits(text, 14, 2, "minute");
  expect_char(text, 16, ':');
  const unsigned second = parse_digits(text, 17, 2, "second");

  std::size_t pos = 19;
  double frac = 0.0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    double scale = 0.1;
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      frac += scale * (text[pos] - '0');
      scale *= 0.1;
      ++pos;
      ++digits;
    }
    if (digits == 0) throw std::invalid_argument("empty fractional seconds");
  }
  expect_char(text, pos, 'Z');
  if (pos + 1 != text.size()) throw std::invalid_argument("trailing characters after 'Z'");

  if (month < 1 || month > 12) throw std::invalid_argument("month out of range");
  if (day < 1 || day > 31) throw std::invalid_argument("day out of range");
  if (hour > 23 || minute > 59 || second > 59) throw std::invalid_argument("time out of range");

  const std::int64_t d = days_from_civil(year, month, day);
  return {d * 86400 + hour * 3600 + minute * 60 + second, frac};
}

const char* case_tag_name(CaseTag tag) {
  return tag == CaseTag::crossing ? "crossing" : "polar";
}

std::string series_to_csv(const CoincidenceSeries& series) {
  std::string out(kSeriesCsvHeader);
  out += '\n';
  for (const auto& bin : series.bins) {
    const double total_frac = series.anchor_frac_s + bin.start_s;
    const double whole = std::floor(total_frac);
    out += format_double(bin.start_s);
    out += ',';
    out += format_iso8601_utc(series.anchor_unix_s + static_cast<std::int64_t>(whole),
                              total_frac - whole);
    out += ',';
    out += format_double(bin.singles_a);
    out += ',';
    out += format_double(bin.singles_b);
    out += ',';
    out += format_double(bin.coincidences);
    out += ',';
    out += bin.scan_active ? '1' : '0';
    out += '\n';
  }
  return out;
}

CoincidenceSeries series_from_csv(std::string_view text, const std::string& source_name) {
  CoincidenceSeries series;
  series.bin_width_s = 60.0;

  std::size_t pos = 0;
  int line_no = 0;
  bool header_seen = false;
  bool anchor_set = false;

  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto fail = [&](const std::string& msg) -> config_error {
      return config_error(source_name + ":" + std::to_string(line_no) + ": " + msg);
    };

    if (!header_seen) {
      if (line != kSeriesCsvHeader) {
        throw fail("bad header, expected '" + std::string(kSeriesCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw fail("expected 6 fields, got " + std::to_string(fields.size()));
    }

    try {
      CoincidenceSeries::Bin bin;
      bin.start_s = parse_double_field(fields[0], "start_s");
      const auto [wall_s, wall_frac] = parse_iso8601_utc(fields[1]);
      bin.singles_a = parse_double_field(fields[2], "singles_a");
      bin.singles_b = parse_double_field(fields[3], "singles_b");
      bin.coincidences = parse_double_field(fields[4], "coincidences");
      if (bin.singles_a < 0.0 || bin.singles_b < 0.0 || bin.coincidences < 0.0) {
        throw std::invalid_argument("negative count");
      }
      if (fields[5] == "1") {
        bin.scan_active = true;
      } else if (fields[5] == "0") {
        bin.scan_active = false;
      } else {
        throw std::invalid_argument("scan_active must be 0 or 1, got '" +
                                    std::string(fields[5]) + "'");
      }

      if (!anchor_set) {
        // The first row fixes the wall-clock anchor of t = 0.
        const double anchor_total =
            static_cast<double>(wall_s) + wall_frac - bin.start_s;
        const double anchor_whole = std::floor(anchor_total);
        series.anchor_unix_s = static_cast<std::int64_t>(anchor_whole);
        series.anchor_frac_s = anchor_total - anchor_whole;
        anchor_set = true;
      }
      if (!series.bins.empty() && bin.start_s <= series.bins.back().start_s) {
        throw std::invalid_argument("start_s must be strictly increasing");
      }
      series.bins.push_back(bin);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
  }

  if (!header_seen) {
    throw config_error(source_name + ":1: missing header row");
  }
  if (series.bins.size() >= 2) {
    const double width = series.bins[1].start_s - series.bins[0].start_s;
    for (std::size_t i = 2; i < series.bins.size(); ++i) {
      const double step = series.bins[i].start_s - series.bins[i - 1].start_s;
      if (std::abs(step - width) > 1e-9 * std::max(1.0, width)) {
        throw config_error(source_name + ": irregular bin spacing at row " +
                           std::to_string(i + 1));
      }
    }
    series.bin_width_s = width;
  }
  return series;
}

std::string trace_to_csv(const VisibilityTrace& trace) {
  std::string out(kTraceCsvHeader);
  out += '\n';
  for (const auto& p : trace.points) {
    out += format_double(p.window_center_s);
    out += ',';
    out += format_double(p.sidereal_phase_rad);
    out += ',';
    out += format_double(p.fit.visibility);
    out += ',';
    out += format_double(p.fit.visibility_sigma);
    out += ',';
    out += format_double(p.fit.mean);
    out += ',';
    out += format_double(p.fit.amplitude);
    out += ',';
    out += format_double(p.fit.phase_rad);
    out += ',';
    out += p.above_threshold ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string curve_to_csv(const BoundCurve& curve) {
  std::string out(kCurveCsvHeader);
  out += '\n';
  for (const auto& p : curve.points) {
    out += format_double(p.sweep_value);
    out += ',';
    out += case_tag_name(p.case_tag);
    out += ',';
    out += format_double(p.beta_parallel_bound);
    out += ',';
    out += format_double(p.vqi_over_c);
    out += '\n';
  }
  return out;
}

std::string coverage_to_json(const CoverageReport& report) {
  nlohmann::ordered_json j;
  j["verdict"] = report.verdict;
  j["cell_width_s"] = report.cell_width_s;
  j["min_multiplicity"] = report.min_multiplicity;
  j["first_empty_cell"] = report.first_empty_cell;
  j["windows_below_threshold"] = report.windows_below_threshold;
  j["first_below_phase_rad"] = report.first_below_phase_rad;
  // No window at all leaves the minimum at +infinity, which JSON spells null.
  if (std::isfinite(report.min_visibility)) {
    j["min_visibility"] = report.min_visibility;
  } else {
    j["min_visibility"] = nullptr;
  }
  auto cells = nlohmann::ordered_json::array();
  for (const auto& cell : report.cells) {
    if (cell.multiplicity > 0) {
      cells.push_back({cell.multiplicity, cell.min_visibility});
    } else {
      cells.push_back({cell.multiplicity, nullptr});
    }
  }
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

CoverageReport coverage_from_json(std::string_view text, const std::string& source_name) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::ordered_json::parse_error& e) {
    throw config_error(source_name + ": " + e.what());
  }
  if (!j.is_object()) throw config_error(source_name + ": top level must be an object");

  static constexpr const char* kKeys[] = {
      "verdict",       "cell_width_s",          "min_multiplicity",      "first_empty_cell",
      "windows_below_threshold", "first_below_phase_rad", "min_visibility", "cells"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : kKeys) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw config_error(source_name + ": unknown key '" + it.key() + "'");
  }

  CoverageReport report;
  const auto verdict = j.find("verdict");
  if (verdict == j.end() || !verdict->is_boolean()) {
    throw config_error(source_name + ": 'verdict' must be present and boolean");
  }
  report.verdict = verdict->get<bool>();

  const auto number = [&](const char* key, double fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw config_error(source_name + ": '" + key + "' must be a number");
    return it->get<double>();
  };
  const auto integer = [&](const char* key, int fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) {
      throw config_error(source_name + ": '" + key + "' must be an integer");
    }
    return it->get<int>();
  };
  report.cell_width_s = number("cell_width_s", report.cell_width_s);
  report.min_multiplicity = integer("min_multiplicity", report.min_multiplicity);
  report.first_empty_cell = integer("first_empty_cell", report.first_empty_cell);
  report.windows_below_threshold =
      integer("windows_below_threshold", report.windows_below_threshold);
  report.first_below_phase_rad = number("first_below_phase_rad", report.first_below_phase_rad);
  const auto min_vis = j.find("min_visibility");
  if (min_vis != j.end()) {
    if (min_vis->is_null()) {
      report.min_visibility = kUnbounded;
    } else if (min_vis->is_number()) {
      report.min_visibility = min_vis->get<double>();
    } else {
      throw config_error(source_name + ": 'min_visibility' must be a number or null");
    }
  }

  const auto cells = j.find("cells");
  if (cells != j.end()) {
    if (!cells->is_array()) throw config_error(source_name + ": 'cells' must be an array");
    for (const auto& cell : *cells) {
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_integer() ||
          !(cell[1].is_number() || cell[1].is_null())) {
        throw config_error(source_name +
                           ": 'cells' entries must be [multiplicity, min_visibility|null]");
      }
      CoverageCell parsed;
      parsed.multiplicity = cell[0].get<int>();
      parsed.min_visibility = cell[1].is_null() ? 0.0 : cell[1].get<double>();
      report.cells.push_back(parsed);
    }
  }
  return report;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw config_error("read failed: " + path);
  return std::move(buffer).str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace vqi
