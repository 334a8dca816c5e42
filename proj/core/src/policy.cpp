#include "speedid/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "speedid/error.hpp"
#include "speedid/units.hpp"

namespace speedid {

double PolicyRow::mean_control(const Grids& grids) const noexcept {
  if (deterministic()) return grids.control_fraction(u_index);
  return weight * grids.control_fraction(u_index) + (1.0 - weight) * grids.control_fraction(u_alt);
}

PolicyRow deterministic_row(std::size_t u_index) noexcept {
  const auto k = static_cast<std::uint32_t>(u_index);
  return {k, k, 1.0};
}

Policy::Policy(Grids grids, std::size_t segments)
    : grids_(std::move(grids)), segments_(segments), rows_(segments * grids_.speed_kmh.size()) {}

Policy::Policy(Grids grids, std::size_t segments, std::vector<PolicyRow> rows)
    : grids_(std::move(grids)), segments_(segments), rows_(std::move(rows)) {
  if (rows_.size() != segments_ * grids_.speed_kmh.size()) {
    throw ValidationError("policy needs one row per (segment, speed) pair");
  }
}

double Policy::expected_control(std::size_t segment, double v_ms) const {
  const Grid& g = grids_.speed_kmh;
  const double v = ms_to_kmh(v_ms);
  const std::size_t last = g.size() - 1;
  if (v <= g.lo()) return at(segment, 0).mean_control(grids_);
  if (v >= g.value(last)) return at(segment, last).mean_control(grids_);

  auto k = static_cast<std::size_t>(std::floor((v - g.lo()) / g.step()));
  k = std::min(k, last - 1);
  while (k > 0 && v < g.value(k)) --k;
  while (k + 1 < last && v >= g.value(k + 1)) ++k;

  const double w_lo = 1.0 - std::abs(v - g.value(k)) / g.step();
  const double w_hi = 1.0 - std::abs(g.value(k + 1) - v) / g.step();
  return w_lo * at(segment, k).mean_control(grids_) + w_hi * at(segment, k + 1).mean_control(grids_);
}

RolloutResult rollout(const Policy& policy, const Track& track, const VehicleParams& params,
                      double v0) {
  const Grid& g = policy.grids().speed_kmh;
  const double v0_kmh = ms_to_kmh(v0);
  if (!(v0_kmh >= g.lo() && v0_kmh <= g.hi())) {
    throw ValidationError("initial speed outside the speed grid");
  }
  if (policy.segments() != track.segments()) {
    throw ValidationError("policy and track have different segment counts");
  }
  const std::size_t n = track.segments();
  const double s = track.segment_length();

  RolloutResult out;
  out.v_hat.reserve(n + 1);
  out.u_hat.reserve(n);
  out.t.reserve(n);
  out.v_hat.push_back(v0);
  double v = v0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::clamp(policy.expected_control(i, v), -1.0, 1.0);
    const double next = velocity_update(v, acceleration(u, v, params), s);
    const double dt = segment_time(v, next, s);
    out.u_hat.push_back(u);
    out.t.push_back(dt);
    out.total_time += dt;
    out.v_hat.push_back(next);
    v = next;
  }
  return out;
}

double lap_time(const RolloutResult& result) noexcept {
  double total = 0.0;
  for (double dt : result.t) total += dt;
  return total;
}

std::size_t FeasibilityReport::hard_violations() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [](const Violation& v) { return !v.within_slack; }));
}

double FeasibilityReport::max_overshoot(Violation::Kind kind) const noexcept {
  double worst = 0.0;
  for (const auto& v : violations) {
    if (v.kind == kind) worst = std::max(worst, v.overshoot);
  }
  return worst;
}

FeasibilityReport check_feasibility(const RolloutResult& result, const Track& track,
                                    const VehicleParams& /*params*/, double speed_slack,
                                    double control_slack_value) {
  FeasibilityReport report;
  const auto& caps = track.v_cap();
  const std::size_t points = std::min(result.v_hat.size(), caps.size());
  for (std::size_t i = 0; i < points; ++i) {
    const double over = result.v_hat[i] - caps[i];
    if (over > 0.0) {
      report.violations.push_back({Violation::Kind::speed, i, over, over <= speed_slack});
    }
  }
  const std::size_t segments = std::min(result.u_hat.size(), points);
  for (std::size_t i = 0; i < segments; ++i) {
    const double over = std::abs(result.u_hat[i]) - max_control(result.v_hat[i], caps[i]);
    if (over > 0.0) {
      report.violations.push_back({Violation::Kind::control, i, over, over <= control_slack_value});
    }
  }
  return report;
}

double speed_slack_ms(const Grids& grids) noexcept { return kmh_to_ms(grids.speed_kmh.step()); }

double control_slack(const Grids& grids) noexcept {
  return pct_to_fraction(grids.control_pct.step());
}

}  // namespace speedid
