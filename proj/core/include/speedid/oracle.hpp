#pragma once

// Brute-force finite-horizon dynamic program over the same discretized model the
// solver uses. It shares the CPTs, utility table and evidence (inputs) but none
// of the message-passing code, so agreement between the two is evidence that the
// junction-tree recursion is right.

#include <cstddef>
#include <vector>

#include "speedid/grid.hpp"
#include "speedid/policy.hpp"
#include "speedid/track.hpp"

namespace speedid {

struct DPTable {
  // value[i][v] for points i = 0..n: expected time saving to go, counting only
  // paths that respect every later speed cap. value[n] is identically zero.
  std::vector<std::vector<double>> value;
  // evidence_mass[i][v]: probability that every cap after point i is respected
  // under the optimal policy. evidence_mass[n] is identically one.
  std::vector<std::vector<double>> evidence_mass;
  // choice[i][v] for segments i = 0..n-1.
  std::vector<std::vector<PolicyRow>> choice;
  Grids grids;

  std::size_t segments() const noexcept { return choice.size(); }
  Policy to_policy() const;
};

// Largest n * |V|^2 * |A| * |U| the oracle agrees to enumerate.
inline constexpr double kDefaultOracleBudget = 5e9;

double oracle_cost(const Diagram& diagram) noexcept;

// Throws std::length_error when the instance exceeds the budget.
DPTable dp_solve(const Diagram& diagram, double budget = kDefaultOracleBudget);
DPTable dp_solve(const Track& track, const Grids& grids, const VehicleParams& params,
                 double budget = kDefaultOracleBudget);

// Forward pass using the DP choices with the same bracketing of continuous speeds
// as the policy rollout. v0 in m/s.
RolloutResult dp_rollout(const DPTable& table, const Track& track, const VehicleParams& params,
                         double v0);

}  // namespace speedid
