#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "speedid/grid.hpp"
#include "speedid/track.hpp"
#include "speedid/vehicle.hpp"

namespace speedid {

// Decision at one (segment, speed) pair. Deterministic rows put all mass on
// u_index; boundary rows put `weight` on u_index and the rest on u_alt.
struct PolicyRow {
  std::uint32_t u_index = 0;
  std::uint32_t u_alt = 0;
  double weight = 1.0;

  bool deterministic() const noexcept { return weight == 1.0; }
  // Mean control as a fraction in [-1, 1].
  double mean_control(const Grids& grids) const noexcept;

  friend bool operator==(const PolicyRow&, const PolicyRow&) = default;
};

PolicyRow deterministic_row(std::size_t u_index) noexcept;

class Policy {
 public:
  Policy(Grids grids, std::size_t segments);
  Policy(Grids grids, std::size_t segments, std::vector<PolicyRow> rows);

  const Grids& grids() const noexcept { return grids_; }
  std::size_t segments() const noexcept { return segments_; }
  std::size_t speeds() const noexcept { return grids_.speed_kmh.size(); }

  const PolicyRow& at(std::size_t segment, std::size_t v) const { return rows_[segment * speeds() + v]; }
  PolicyRow& at(std::size_t segment, std::size_t v) { return rows_[segment * speeds() + v]; }
  const std::vector<PolicyRow>& rows() const noexcept { return rows_; }

  // Expected control at a continuous speed, blending the two bracketing grid speeds
  // with weights 1 - |v - v_k| / d_V.
  double expected_control(std::size_t segment, double v_ms) const;

 private:
  Grids grids_;
  std::size_t segments_;
  std::vector<PolicyRow> rows_;
};

struct RolloutResult {
  std::vector<double> v_hat;  // m/s per point, n + 1 entries
  std::vector<double> u_hat;  // expected control fraction per segment
  std::vector<double> t;      // seconds per segment
  double total_time = 0.0;

  std::size_t segments() const noexcept { return t.size(); }
};

// Forward simulation under a policy. Speeds stay continuous; only the policy
// lookup is grid-based. v0 is in m/s and must lie inside the speed grid.
RolloutResult rollout(const Policy& policy, const Track& track, const VehicleParams& params,
                      double v0);

double lap_time(const RolloutResult& result) noexcept;

struct Violation {
  enum class Kind { speed, control };
  Kind kind;
  std::size_t index;   // point for speed, segment for control
  double overshoot;    // m/s for speed, control fraction for control
  bool within_slack;   // overshoot no larger than one grid step
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const noexcept { return violations.empty(); }
  std::size_t hard_violations() const noexcept;
  double max_overshoot(Violation::Kind kind) const noexcept;
};

// Lists every point above its speed cap and every segment whose |u| exceeds the
// friction-circle limit at the entry speed. Overshoots up to the given slack
// (one grid step by convention) are flagged as discretization slack.
FeasibilityReport check_feasibility(const RolloutResult& result, const Track& track,
                                    const VehicleParams& params, double speed_slack_ms = 0.0,
                                    double control_slack = 0.0);

// Slack values matching a set of grids.
double speed_slack_ms(const Grids& grids) noexcept;
double control_slack(const Grids& grids) noexcept;

}  // namespace speedid
