#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "vqi/relativity.hpp"

using namespace vqi;

namespace {

// Uniform point on the unit sphere.
Vec3 random_direction(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 2.0 * unit(gen) - 1.0;
  const double phi = 2.0 * std::numbers::pi * unit(gen);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace

TEST_CASE("event-pair speed: simultaneous events, boost along the baseline") {
  const SpacetimeEvent a{{0.0, 0.0, 0.0}, 0.0};
  const SpacetimeEvent b{{18000.0, 0.0, 0.0}, 0.0};
  const double v = vqi_from_events(a, b, FrameVelocity{{0.5, 0.0, 0.0}});
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("event-pair speed: purely perpendicular boost leaves events simultaneous") {
  const SpacetimeEvent a{{0.0, 0.0, 0.0}, 0.0};
  const SpacetimeEvent b{{18000.0, 0.0, 0.0}, 0.0};
  const double v = vqi_from_events(a, b, FrameVelocity{{0.0, 0.5, 0.0}});
  CHECK(v == kUnbounded);
}

TEST_CASE("event-pair speed: 45-degree boost gives sqrt(7)") {
  const double c45 = 0.5 / std::sqrt(2.0);
  const SpacetimeEvent a{{0.0, 0.0, 0.0}, 0.0};
  const SpacetimeEvent b{{18000.0, 0.0, 0.0}, 0.0};
  const double v = vqi_from_events(a, b, FrameVelocity{{c45, c45, 0.0}});
  CHECK(v == doctest::Approx(2.6457513110645907).epsilon(1e-12));
}

TEST_CASE("event-pair speed: rejects superluminal frames and non-space-like pairs") {
  const SpacetimeEvent a{{0.0, 0.0, 0.0}, 0.0};
  const SpacetimeEvent b{{18000.0, 0.0, 0.0}, 0.0};
  CHECK_THROWS_AS(vqi_from_events(a, b, FrameVelocity{{1.0, 0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(vqi_from_events(a, b, FrameVelocity{{0.8, 0.8, 0.0}}), std::invalid_argument);
  // Time-like separation: light needs 6.0e-5 s for 18 km, give the pair more.
  const SpacetimeEvent late{{18000.0, 0.0, 0.0}, 1e-3};
  CHECK_THROWS_AS(vqi_from_events(a, late, FrameVelocity{{0.5, 0.0, 0.0}}),
                  std::invalid_argument);
  // Coincident positions are never space-like.
  CHECK_THROWS_AS(vqi_from_events(a, a, FrameVelocity{{0.5, 0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("pointwise bound: hand values") {
  CHECK(vqi_bound_exact(AlignmentRho{0.0, false}, 0.5, 0.5) ==
        doctest::Approx(2.0).epsilon(1e-12));
  const double c45 = 0.5 / std::sqrt(2.0);
  CHECK(vqi_bound_exact(AlignmentRho{0.0, false}, 0.5, c45) ==
        doctest::Approx(2.6457513110645907).epsilon(1e-12));
}

TEST_CASE("pointwise bound: beta=1 closed-form limit collapses to 1") {
  CHECK(vqi_bound_exact(AlignmentRho{0.3, false}, 1.0, 0.2) == doctest::Approx(1.0));
  CHECK(vqi_bound_exact(AlignmentRho{-0.1, false}, 1.0, 0.9) == doctest::Approx(1.0));
}

TEST_CASE("pointwise bound: perpendicular-frame case is unbounded, not an error") {
  CHECK(vqi_bound_exact(AlignmentRho{0.2, false}, 0.5, -0.2) == kUnbounded);
  CHECK(vqi_bound_exact(AlignmentRho{0.0, false}, 0.5, 0.0) == kUnbounded);
}

TEST_CASE("pointwise bound: domain errors") {
  CHECK_THROWS_AS(vqi_bound_exact(AlignmentRho{1.0, false}, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(vqi_bound_exact(AlignmentRho{0.0, false}, -0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(vqi_bound_exact(AlignmentRho{0.0, false}, 1.1, 0.0), std::invalid_argument);
  // |beta_parallel| cannot exceed beta.
  CHECK_THROWS_AS(vqi_bound_exact(AlignmentRho{0.0, false}, 0.3, 0.4), std::invalid_argument);
}

TEST_CASE("worst-case bound: headline value at the 90-degree frame") {
  const double v = vqi_bound_worstcase(5.4e-6, 1e-3, 1.3058613708453195e-05);
  CHECK(v == doctest::Approx(54175.22225397141).epsilon(1e-12));  // frozen
  CHECK(std::abs(v - 54000.0) / 54000.0 < 0.03);
}

TEST_CASE("worst-case bound: small-speed limit approaches 1/rho_bar") {
  CHECK(vqi_bound_worstcase(5.4e-6, 0.0, 0.0) ==
        doctest::Approx(1.0 / 5.4e-6).epsilon(1e-12));
  CHECK(vqi_bound_worstcase(0.5, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("worst-case bound: domain errors") {
  CHECK_THROWS_AS(vqi_bound_worstcase(1.0, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(vqi_bound_worstcase(-0.1, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(vqi_bound_worstcase(0.1, 0.5, -1e-9), std::invalid_argument);
  CHECK_THROWS_AS(vqi_bound_worstcase(0.1, 1.0 + 1e-9, 0.0), std::invalid_argument);
}

TEST_CASE("property: closed form matches the event-pair route on 1000 random draws") {
  std::mt19937_64 gen(0x51u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r_ab = 18000.0;

  int compared = 0;
  double worst = 0.0;
  while (compared < 1000) {
    const double beta = 0.99 * unit(gen);
    const Vec3 v_dir = random_direction(gen);
    const Vec3 baseline = random_direction(gen);
    const double rho = -0.9 + 1.8 * unit(gen);
    const double beta_parallel = beta * dot(v_dir, baseline);
    if (std::abs(rho + beta_parallel) < 1e-12) continue;  // unbounded corner, resample

    const SpacetimeEvent a{{0.0, 0.0, 0.0}, 0.0};
    const SpacetimeEvent b{r_ab * baseline, rho * r_ab / kSpeedOfLight};
    const double via_events = vqi_from_events(a, b, FrameVelocity{beta * v_dir});
    const double via_formula = vqi_bound_exact(AlignmentRho{rho, false}, beta, beta_parallel);
    worst = std::max(worst, std::abs(via_events - via_formula) / via_formula);
    ++compared;
  }
  CHECK(compared == 1000);
  CHECK(worst < 1e-9);
}

TEST_CASE("property: worst-case bound is strictly decreasing in each pessimism knob") {
  const double betas[] = {0.0, 1e-3, 0.3};
  const double rhos[] = {1e-6, 1e-4, 1e-2, 0.1, 0.3};
  const double bounds[] = {0.0, 1e-6, 1e-4, 1e-2, 0.1};
  for (const double beta : betas) {
    for (const double rho_bar : rhos) {
      for (std::size_t i = 0; i + 1 < std::size(bounds); ++i) {
        CHECK(vqi_bound_worstcase(rho_bar, beta, bounds[i]) >
              vqi_bound_worstcase(rho_bar, beta, bounds[i + 1]));
      }
    }
    for (const double b : bounds) {
      for (std::size_t i = 0; i + 1 < std::size(rhos); ++i) {
        CHECK(vqi_bound_worstcase(rhos[i], beta, b) > vqi_bound_worstcase(rhos[i + 1], beta, b));
      }
    }
  }
}

TEST_CASE("property: worst case never exceeds any compatible pointwise bound") {
  std::mt19937_64 gen(0x52u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double rho_bar = 1e-6 + 0.4 * unit(gen);
    const double beta = 0.99 * unit(gen);
    const double b = beta * unit(gen);
    const double rho = rho_bar * (2.0 * unit(gen) - 1.0);
    const double beta_parallel = b * (2.0 * unit(gen) - 1.0);
    if (rho + beta_parallel <= 0.0) continue;
    CHECK(vqi_bound_worstcase(rho_bar, beta, b) <=
          vqi_bound_exact(AlignmentRho{rho, false}, beta, beta_parallel) * (1.0 + 1e-12));
  }
}

TEST_CASE("property: bounds are never subluminal") {
  std::mt19937_64 gen(0x53u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double rho_bar = 0.999 * unit(gen);
    const double beta = 0.999999 * unit(gen);
    const double b = beta * unit(gen);
    CHECK(vqi_bound_worstcase(rho_bar, beta, b) >= 1.0);
    const double rho = 0.999 * (2.0 * unit(gen) - 1.0);
    const double beta_parallel = beta * (2.0 * unit(gen) - 1.0);
    CHECK(vqi_bound_exact(AlignmentRho{rho, false}, beta, beta_parallel) >= 1.0);
  }
}
