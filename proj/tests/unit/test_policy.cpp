#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "speedid/error.hpp"
#include "speedid/policy.hpp"
#include "speedid/solver.hpp"
#include "speedid/units.hpp"

namespace speedid {
namespace {

Policy constant_policy(const Grids& grids, std::size_t segments, std::size_t u) {
  return Policy(grids, segments, std::vector<PolicyRow>(segments * grids.speed_kmh.size(), deterministic_row(u)));
}

TEST(Rollout, FullThrottleFollowsThePhysics) {
  const VehicleParams f1;
  const Track track = synth_track({SynthKind::straight, 5, 10.0}, f1);
  const Grids grids = make_grids(401, 51, 201);
  const RolloutResult r = rollout(constant_policy(grids, 5, 200), track, f1, kmh_to_ms(200.0));
  double v = kmh_to_ms(200.0);
  double total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double next = velocity_update(v, acceleration(1.0, v, f1), 10.0);
    EXPECT_EQ(r.u_hat[i], 1.0);
    EXPECT_EQ(r.v_hat[i + 1], next);
    EXPECT_EQ(r.t[i], segment_time(v, next, 10.0));
    total += r.t[i];
    v = next;
  }
  EXPECT_EQ(r.total_time, total);
  EXPECT_EQ(lap_time(r), total);
}

TEST(Rollout, CoastingDecaysWithDrag) {
  const VehicleParams f1;
  const Track track = synth_track({SynthKind::straight, 3, 5.0}, f1);
  const Grids grids = make_grids(401, 51, 201);
  const RolloutResult r = rollout(constant_policy(grids, 3, 100), track, f1, kmh_to_ms(250.0));
  for (std::size_t i = 1; i < r.v_hat.size(); ++i) EXPECT_LT(r.v_hat[i], r.v_hat[i - 1]);
}

TEST(Rollout, ExpectedControlBlendsNeighbours) {
  const Grids grids = make_grids(5, 5, 5);  // speeds 0, 100, ..., 400
  Policy p(grids, 1);
  p.at(0, 1) = deterministic_row(4);  // +1
  p.at(0, 2) = deterministic_row(2);  // 0
  EXPECT_NEAR(p.expected_control(0, kmh_to_ms(125.0)), 0.75, 1e-12);
  EXPECT_NEAR(p.expected_control(0, kmh_to_ms(100.0)), 1.0, 1e-12);
  p.at(0, 4) = PolicyRow{3, 4, 0.25};
  EXPECT_NEAR(p.expected_control(0, kmh_to_ms(400.0)), 0.25 * 0.5 + 0.75, 1e-12);
}

TEST(Rollout, RejectsBadInputs) {
  const VehicleParams f1;
  const Track track = synth_track({SynthKind::straight, 3, 5.0}, f1);
  const Grids grids = make_grids(41, 11, 11);
  EXPECT_THROW(rollout(constant_policy(grids, 3, 5), track, f1, kmh_to_ms(401.0)), ValidationError);
  EXPECT_THROW(rollout(constant_policy(grids, 2, 5), track, f1, kmh_to_ms(100.0)), ValidationError);
  EXPECT_THROW(Policy(grids, 2, std::vector<PolicyRow>(3)), ValidationError);
}

TEST(LapTime, SumsSegmentTimes) {
  RolloutResult r;
  r.t.assign(10, 0.036);
  EXPECT_NEAR(lap_time(r), 0.36, 1e-15);
  EXPECT_EQ(lap_time(RolloutResult{}), 0.0);
}

TEST(Feasibility, FlagsSpeedAndControl) {
  const VehicleParams f1;
  const Track track(5.0, {30.0, 30.0, 30.0}, f1);
  const double cap = track.v_cap()[0];
  RolloutResult r;
  r.v_hat = {cap - 1.0, cap + 0.1, cap + 5.0};
  r.u_hat = {0.0, 0.0};
  r.t = {0.1, 0.1};
  const FeasibilityReport rep = check_feasibility(r, track, f1, 0.5, 0.0);
  ASSERT_EQ(rep.violations.size(), 2u);
  EXPECT_EQ(rep.violations[0].index, 1u);
  EXPECT_TRUE(rep.violations[0].within_slack);
  EXPECT_FALSE(rep.violations[1].within_slack);
  EXPECT_EQ(rep.hard_violations(), 1u);
  EXPECT_NEAR(rep.max_overshoot(Violation::Kind::speed), 5.0, 1e-12);

  r.v_hat = {cap * 0.9, cap * 0.9, cap * 0.9};
  r.u_hat = {0.1, 1.0};
  const FeasibilityReport ctl = check_feasibility(r, track, f1, 0.0, 0.01);
  ASSERT_EQ(ctl.violations.size(), 1u);
  EXPECT_EQ(ctl.violations[0].kind, Violation::Kind::control);
  EXPECT_EQ(ctl.violations[0].index, 1u);
  EXPECT_NEAR(ctl.violations[0].overshoot, 1.0 - max_control(cap * 0.9, cap), 1e-12);
}

TEST(Feasibility, SlackMatchesGridSteps) {
  const Grids grids = make_grids(401, 51, 201);
  EXPECT_DOUBLE_EQ(speed_slack_ms(grids), 1.0 / 3.6);
  EXPECT_DOUBLE_EQ(control_slack(grids), 0.01);
}

TEST(Feasibility, SolvedPoliciesStayWithinOneStep) {
  for (const auto& f : testing::random_fixtures(77, 12)) {
    const VehicleParams f1;
    const SolveResult s = solve(f.track, f.grids, f1, Backend::sparse);
    const RolloutResult r = rollout(s.policy, f.track, f1, kmh_to_ms(f.v0_kmh));
    const FeasibilityReport rep =
        check_feasibility(r, f.track, f1, speed_slack_ms(f.grids), control_slack(f.grids));
    EXPECT_EQ(rep.hard_violations(), 0u);
  }
}

TEST(Rollout, CircleSettlesJustBelowTheCap) {
  const VehicleParams f1;
  const Track track = synth_track({SynthKind::circle, 60, 5.0, 30.0}, f1);
  const Grids grids = make_grids(401, 51, 201);
  const SolveResult s = solve(track, grids, f1, Backend::sparse);
  const RolloutResult r = rollout(s.policy, track, f1, kmh_to_ms(100.0));
  for (std::size_t i = 30; i < r.v_hat.size(); ++i) {
    const double v = ms_to_kmh(r.v_hat[i]);
    EXPECT_LE(v, 108.0 + grids.speed_kmh.step()) << i;
    EXPECT_GE(v, 108.0 - grids.speed_kmh.step()) << i;
  }
}

}  // namespace
}  // namespace speedid
