#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vqi {

// Physical and astronomical constants.
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kSiderealDayS = 86164.0905;   // Earth rotation period vs. inertial space, s
inline constexpr double kEarthOmega = 2.0 * std::numbers::pi / kSiderealDayS;  // rad/s
inline constexpr double kEarthRadiusM = 6371000.0;    // spherical-Earth radius, m
// Epoch used to map wall-clock time to rotation phase: 2000-01-01T00:00:00Z.
// Only the 24 h coverage topology matters, not absolute astronomical accuracy.
inline constexpr std::int64_t kSiderealEpochUnixS = 946684800;
// CHSH visibility threshold 1/sqrt(2): fringe visibility above it violates the inequality.
inline constexpr double kBellThreshold = 0.7071067811865476;
// Sentinel for results with no finite bound (e.g. vanishing transformed time separation).
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

// Execution policy for the data-parallel kernels. `serial` is the reference
// implementation; `parallel` must produce bit-identical results.
enum class Exec { serial, parallel };

// Invalid run configuration or unparseable input file; maps to process exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physical prerequisite for the requested computation is not established
// (e.g. no verified all-day inequality violation); maps to process exit code 3.
class prerequisite_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vqi
