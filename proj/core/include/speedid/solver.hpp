#pragma once

// Backward (collection) pass of the strong junction tree for the per-segment
// clique chain
//
//   ... -> C_i^A = {A_i, U_i, V_i} -[A_i, V_i]- C_i^V = {V_{i+1}, A_i, V_i} -[V_{i+1}]- C_{i+1}^A ...
//
// Each segment is processed from the last one back to the root: the V-clique
// sums out V_{i+1}, then the A-clique sums out A_i and maximizes out U_i, which
// records the policy for segment i.
//
// Potentials are pairs (Phi, Psi). A separator message carries Phi, the
// probability that every later speed cap is respected, and Psi, the expected
// time saving over those paths. The receiving clique recovers the conditional
// utility by the quotient Psi / Phi with 0/0 = 0. A path that breaks a cap
// anywhere downstream contributes no utility at all.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "speedid/grid.hpp"
#include "speedid/policy.hpp"
#include "speedid/track.hpp"

namespace speedid {

enum class Backend { dense, sparse };

Backend parse_backend(const std::string& name);
std::string to_string(Backend b);

// Potential pair over V (size |V|) or over a speed-major product V x X.
struct Potentials {
  std::vector<double> phi;
  std::vector<double> psi;
};

// The message entering segment n - 1 from beyond the end of the path.
Potentials terminal_message(std::size_t speeds);

// For every parent configuration r = (v, inner), sums the CPT row against a
// child potential that may depend on v: child arrays are laid out [v][child].
// Only the two stored entries of each row are touched.
Potentials sparse_multiply_marginalize(const SparseCPT& cpt, std::span<const double> child_phi,
                                       std::span<const double> child_psi);

// Same contract over a dense table; visits every entry, zeros included.
Potentials dense_multiply_marginalize(const DenseCPT& cpt, std::span<const double> child_phi,
                                      std::span<const double> child_psi);

// Sums V_{i+1} out of the V-clique of one segment. Returns potentials over
// (V_i, A_i), speed-major. `evidence` is the likelihood on V_{i+1}.
Potentials eliminate_speed(const SparseCPT& speed_cpt, const UtilityTable& utility,
                           const Potentials& incoming, const LikelihoodVector& evidence);
Potentials eliminate_speed(const DenseCPT& speed_cpt, const UtilityTable& utility,
                           const Potentials& incoming, const LikelihoodVector& evidence);

struct ControlElimination {
  Potentials message;          // over V_i
  std::vector<double> value;   // message Psi per V_i: expected saving over cap-respecting paths
  std::vector<PolicyRow> policy;
};

// Sums A_i out of the A-clique and maximizes U_i over the controls admissible at
// each speed, with the probabilistic boundary rule. `v_cap_ms` is the cap at point i.
ControlElimination eliminate_control(const SparseCPT& accel_cpt, const Potentials& separator,
                                     const Grids& grids, double v_cap_ms);
ControlElimination eliminate_control(const DenseCPT& accel_cpt, const Potentials& separator,
                                     const Grids& grids, double v_cap_ms);

// Control choice given expected utilities and evidence masses for every control
// at one speed. Exposed for testing.
struct ControlChoice {
  PolicyRow row;
  double value = 0.0;
  double phi = 0.0;
};
ControlChoice choose_control(std::span<const double> xi, std::span<const double> phi,
                             const Grids& grids, double u_max);

struct SolveResult {
  Policy policy;
  // value[i][v]: maximal expected time saving from point i to the end at grid speed v,
  // over paths that respect every later cap, before the evidence at point i
  // itself is applied. i = 0..n-1.
  std::vector<std::vector<double>> value;
  std::vector<double> root_evidence;  // phi(V_0)

  const std::vector<double>& root_value() const { return value.front(); }
  // Root utility conditioned on an initial speed (km/h) through the two-point projection.
  double expected_utility(double v0_kmh) const;
};

SolveResult solve(const Diagram& diagram, Backend backend);
SolveResult solve(const Track& track, const Grids& grids, const VehicleParams& params,
                  Backend backend);

}  // namespace speedid
