#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "speedid/track.hpp"
#include "speedid/vehicle.hpp"

namespace speedid {

// Uniform grid with inclusive endpoints: value(k) = lo + k * step, step = (hi - lo) / (count - 1).
class Grid {
 public:
  Grid(double lo, double hi, std::size_t count);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return count_; }
  double step() const noexcept { return step_; }
  double value(std::size_t k) const noexcept { return lo_ + static_cast<double>(k) * step_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double lo_;
  double hi_;
  std::size_t count_;
  double step_;
};

// The three discretized domains. Speed is in km/h, acceleration in m/s^2,
// control in percent; physics calls convert to SI.
struct Grids {
  Grid speed_kmh;
  Grid accel_ms2;
  Grid control_pct;

  double speed_ms(std::size_t k) const noexcept;
  double control_fraction(std::size_t k) const noexcept;

  friend bool operator==(const Grids&, const Grids&) = default;
};

inline constexpr double kSpeedLoKmh = 0.0;
inline constexpr double kSpeedHiKmh = 400.0;
inline constexpr double kAccelLo = -34.0;
inline constexpr double kAccelHi = 16.0;
inline constexpr double kControlLo = -100.0;
inline constexpr double kControlHi = 100.0;

// Grids over the default F1 ranges with the given cardinalities.
Grids make_grids(std::size_t nv, std::size_t na, std::size_t nu);

// Two-point distribution on a grid: `weight` on lower_index, 1 - weight on lower_index + 1.
struct TwoPointRow {
  std::uint32_t lower_index = 0;
  double weight = 1.0;

  double upper_weight() const noexcept { return 1.0 - weight; }
  // Probability this row assigns to grid index k.
  double probability(std::size_t k) const noexcept;
};

// Closest-two-values projection; the row mean equals x when x is inside the grid,
// values outside clamp to the nearest endpoint with weight 1.
TwoPointRow project_two_point(double x, const Grid& g);

// Zero-compressed CPT: one two-point row per parent configuration. Parents are
// laid out speed-major: row = outer * inner + inner_index, where the outer parent
// is always the current speed V_i.
struct SparseCPT {
  std::size_t outer = 0;
  std::size_t inner = 0;
  std::size_t child_count = 0;
  std::vector<TwoPointRow> rows;

  const TwoPointRow& row(std::size_t o, std::size_t i) const { return rows[o * inner + i]; }
};

// The same table with every zero stored.
struct DenseCPT {
  std::size_t outer = 0;
  std::size_t inner = 0;
  std::size_t child_count = 0;
  std::vector<double> table;  // [outer][inner][child]

  const double* row(std::size_t r) const { return table.data() + r * child_count; }
};

DenseCPT densify(const SparseCPT& cpt);

// P(A_i | V_i, U_i), parents (v, u).
SparseCPT build_accel_cpt(const Grids& grids, const VehicleParams& p);

// P(V_{i+1} | V_i, A_i), parents (v, a).
SparseCPT build_speed_cpt(const Grids& grids, double s);

// Time saving t_max - t(v_in, v_out, s), floored at 0, over speed-grid pairs.
struct UtilityTable {
  std::size_t count = 0;
  double t_max = 0.0;
  std::vector<double> values;

  double at(std::size_t v_in, std::size_t v_out) const { return values[v_in * count + v_out]; }
};

// Segment time at 100 km/h, the slowest speed considered race pace.
double default_t_max(double s) noexcept;

UtilityTable build_utility(const Grid& speed_kmh, double s, double t_max);

struct LikelihoodVector {
  std::vector<double> phi;
};

// Soft speed cap: 1 up to v_max, a linear fraction at the first grid value above, 0 beyond.
LikelihoodVector speed_likelihood(double v_max_kmh, const Grid& speed_kmh);

// Everything the backward pass needs for one track, built once.
struct Diagram {
  Grids grids;
  VehicleParams params;
  double segment_length = 0.0;
  SparseCPT accel;
  SparseCPT speed;
  UtilityTable utility;
  std::vector<LikelihoodVector> evidence;  // per point 0..n
  std::vector<double> v_cap_ms;            // per point 0..n
  // Per-segment replacements for the speed CPT; empty in normal use.
  std::map<std::size_t, SparseCPT> speed_overrides;

  std::size_t segments() const noexcept { return v_cap_ms.size() - 1; }
  const SparseCPT& speed_cpt(std::size_t segment) const;
};

Diagram build_diagram(const Track& track, const Grids& grids, const VehicleParams& params,
                      double t_max);
Diagram build_diagram(const Track& track, const Grids& grids, const VehicleParams& params);

}  // namespace speedid
