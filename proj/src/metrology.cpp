#include "vqi/metrology.hpp"

#include <cmath>
#include <stdexcept>

namespace vqi {

namespace {

void validate(const FiberPath& p) {
  if (!(p.length_m >= 0.0)) throw std::invalid_argument("fiber length must be >= 0");
  if (!(p.group_index > 1.0)) throw std::invalid_argument("fiber group index must be > 1");
  if (!(p.length_uncertainty_m >= 0.0)) {
    throw std::invalid_argument("fiber length uncertainty must be >= 0");
  }
}

void validate(const SiteCoordinates& s) {
  if (!(std::abs(s.latitude_deg) <= 90.0)) throw std::invalid_argument("|latitude| must be <= 90");
  if (!(std::abs(s.longitude_deg) <= 180.0)) {
    throw std::invalid_argument("|longitude| must be <= 180");
  }
}

Vec3 site_to_cartesian(const SiteCoordinates& s) {
  const double lat = deg_to_rad(s.latitude_deg);
  const double lon = deg_to_rad(s.longitude_deg);
  const double r = kEarthRadiusM + s.altitude_m;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

}  // namespace

double length_mismatch_time(const FiberPath& a, const FiberPath& b) {
  validate(a);
  validate(b);
  const double mismatch =
      std::abs(a.length_m - b.length_m) + a.length_uncertainty_m + b.length_uncertainty_m;
  return mismatch * std::max(a.group_index, b.group_index) / kSpeedOfLight;
}

double dispersion_time(const DispersionSpec& spec) {
  if (!(spec.coefficient_ps_per_nm_km >= 0.0) || !(spec.spectral_half_width_nm >= 0.0) ||
      !(spec.fiber_length_one_side_km >= 0.0)) {
    throw std::invalid_argument("dispersion spec fields must be >= 0");
  }
  return spec.coefficient_ps_per_nm_km * spec.spectral_half_width_nm * 2.0 *
         spec.fiber_length_one_side_km * 1e-12;
}

AlignmentBudget total_alignment(double length_term_s, double dispersion_term_s, double r_ab_m) {
  if (!(length_term_s >= 0.0) || !(dispersion_term_s >= 0.0)) {
    throw std::invalid_argument("alignment terms must be >= 0");
  }
  if (!(r_ab_m > 0.0)) throw std::invalid_argument("r_ab must be > 0");
  const double total = std::hypot(length_term_s, dispersion_term_s);
  return {length_term_s, dispersion_term_s, total, kSpeedOfLight * total / r_ab_m};
}

BaselineGeometry baseline_from_sites(const SiteCoordinates& a, const SiteCoordinates& b) {
  validate(a);
  validate(b);
  const Vec3 delta = site_to_cartesian(b) - site_to_cartesian(a);
  const double r_ab = norm(delta);
  if (!(r_ab > 1e-6)) throw std::invalid_argument("baseline_from_sites: coincident sites");
  return {r_ab, rad_to_deg(std::asin(std::abs(delta.z) / r_ab)), 0.0};
}

}  // namespace vqi
