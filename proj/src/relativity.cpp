#include "vqi/relativity.hpp"

#include <cmath>
#include <stdexcept>

namespace vqi {

double vqi_from_events(const SpacetimeEvent& a, const SpacetimeEvent& b, const FrameVelocity& v) {
  const double beta = norm(v.beta);
  if (!(beta < 1.0)) {
    throw std::invalid_argument("vqi_from_events: frame speed must satisfy |v| < 1 c");
  }

  const Vec3 d = b.position_m - a.position_m;
  const double dt = b.time_s - a.time_s;
  const double r = norm(d);
  if (!(r > 0.0) || !(std::abs(kSpeedOfLight * dt) < r)) {
    throw std::invalid_argument("vqi_from_events: events must be space-like separated (|rho| < 1)");
  }

  if (beta == 0.0) {
    return dt == 0.0 ? kUnbounded : r / (kSpeedOfLight * std::abs(dt));
  }

  const Vec3 n = (1.0 / beta) * v.beta;  // unit vector along v
  const double gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));

  const double d_par = dot(d, n);
  const Vec3 d_perp = d - d_par * n;
  const double d_par_boosted = gamma * (d_par + beta * kSpeedOfLight * dt);
  const double dt_boosted = gamma * (dt + beta * d_par / kSpeedOfLight);

  if (dt_boosted == 0.0) return kUnbounded;
  const double dist = std::sqrt(d_par_boosted * d_par_boosted + dot(d_perp, d_perp));
  return dist / (kSpeedOfLight * std::abs(dt_boosted));
}

double vqi_bound_exact(const AlignmentRho& rho, double beta, double beta_parallel) {
  if (!(std::abs(rho.rho) < 1.0)) {
    throw std::invalid_argument("vqi_bound_exact: |rho| must be < 1");
  }
  if (!(beta >= 0.0) || !(beta <= 1.0)) {
    throw std::invalid_argument("vqi_bound_exact: beta must be in [0, 1]");
  }
  if (!(std::abs(beta_parallel) <= beta * (1.0 + 1e-12) + 1e-15)) {
    throw std::invalid_argument("vqi_bound_exact: |beta_parallel| must not exceed beta");
  }
  const double denom = rho.rho + beta_parallel;
  if (denom == 0.0) return kUnbounded;
  const double num = (1.0 - beta * beta) * (1.0 - rho.rho * rho.rho);
  return std::sqrt(1.0 + num / (denom * denom));
}

double vqi_bound_worstcase(double rho_bar, double beta, double beta_parallel_abs_bound) {
  if (!(rho_bar >= 0.0) || !(rho_bar < 1.0)) {
    throw std::invalid_argument("vqi_bound_worstcase: rho_bar must be in [0, 1)");
  }
  if (!(beta >= 0.0) || !(beta <= 1.0)) {
    throw std::invalid_argument("vqi_bound_worstcase: beta must be in [0, 1]");
  }
  if (!(beta_parallel_abs_bound >= 0.0)) {
    throw std::invalid_argument("vqi_bound_worstcase: |beta_parallel| bound must be >= 0");
  }
  const double denom = rho_bar + beta_parallel_abs_bound;
  if (denom == 0.0) return kUnbounded;
  const double num = (1.0 - beta * beta) * (1.0 - rho_bar * rho_bar);
  return std::sqrt(1.0 + num / (denom * denom));
}

}  // namespace vqi
