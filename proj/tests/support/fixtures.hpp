#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "speedid/grid.hpp"
#include "speedid/track.hpp"
#include "speedid/units.hpp"
#include "speedid/vehicle.hpp"

namespace speedid::testing {

struct Fixture {
  Track track;
  Grids grids;
  double v0_kmh;
};

// Random straights and corners; used by the oracle/backend/feasibility checks.
inline Fixture random_fixture(std::mt19937& rng, std::size_t max_segments = 20, std::size_t max_grid = 30) {
  std::uniform_int_distribution<std::size_t> segments(1, max_segments);
  std::uniform_int_distribution<std::size_t> grid(5, max_grid);
  std::uniform_real_distribution<double> corner(15.0, 300.0);
  std::bernoulli_distribution is_corner(0.35);
  const double lengths[] = {1.0, 5.0, 10.0, 20.0};
  std::uniform_int_distribution<std::size_t> pick_length(0, 3);

  const std::size_t n = segments(rng);
  std::vector<double> radius(n + 1, kStraightRadius);
  for (double& r : radius) {
    if (is_corner(rng)) r = corner(rng);
  }
  const VehicleParams params;
  Track track(lengths[pick_length(rng)], radius, params);
  Grids grids = make_grids(grid(rng), grid(rng), grid(rng));
  const double min_cap = *std::min_element(track.v_cap().begin(), track.v_cap().end());
  const double v0 = std::min(100.0, 0.9 * ms_to_kmh(min_cap));
  return {std::move(track), std::move(grids), v0};
}

inline std::vector<Fixture> random_fixtures(unsigned seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::vector<Fixture> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_fixture(rng));
  return out;
}

}  // namespace speedid::testing
