#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "speedid/error.hpp"
#include "speedid/track.hpp"
#include "speedid/units.hpp"

namespace speedid {
namespace {

RadiusProfile parse(const std::string& text) {
  std::istringstream in(text);
  return load_radius_profile(in);
}

TEST(LoadRadiusProfile, MinimalFile) {
  const auto p = parse("position_m,radius_m\n0,10000\n100,50\n200,10000\n");
  ASSERT_EQ(p.samples.size(), 3u);
  EXPECT_EQ(p.samples[1].position, 100.0);
  EXPECT_EQ(p.samples[1].radius, 50.0);
}

TEST(LoadRadiusProfile, CrlfAndClamp) {
  const auto p = parse("position_m,radius_m\r\n0,30\r\n10,25000\r\n");
  ASSERT_EQ(p.samples.size(), 2u);
  EXPECT_EQ(p.samples[1].radius, kStraightRadius);
  const Track t = resample(p, 10.0, 10.0, VehicleParams{});
  EXPECT_EQ(ms_to_kmh(t.v_cap()[0]), 108.0);
}

TEST(LoadRadiusProfile, NegativeRadiusReportsLine) {
  try {
    parse("position_m,radius_m\n0,10000\n50,-3\n");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadRadiusProfile, Errors) {
  EXPECT_THROW(parse("position_m,radius_m\n0,100\n0,100\n"), ValidationError);
  EXPECT_THROW(parse("position_m,radius_m\n5,100\n"), ValidationError);
  EXPECT_THROW(parse("position_m,radius_m\n0,abc\n"), ParseError);
  EXPECT_THROW(parse("position_m,radius_m\n0,1,2\n"), ParseError);
  EXPECT_THROW(parse("x,y\n0,1\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  try {
    parse("position_m,radius_m\n0,100\n\n10,zz\n");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Resample, SilverstoneSegmentCount) {
  RadiusProfile p{{{0.0, 100.0}, {5049.0, 100.0}}};
  const Track t = resample(p, 5.0, 5049.0, VehicleParams{});
  EXPECT_EQ(t.segments(), 1010u);
  EXPECT_EQ(t.points(), 1011u);
}

TEST(Resample, ConstantProfileGivesConstantCap) {
  RadiusProfile p{{{0.0, 80.0}, {40.0, 80.0}, {90.0, 80.0}}};
  const Track t = resample(p, 3.0, 90.0, VehicleParams{});
  for (double cap : t.v_cap()) EXPECT_EQ(cap, t.v_cap().front());
}

TEST(Resample, LinearMidpointAndExtrapolation) {
  RadiusProfile p{{{0.0, 100.0}, {100.0, 200.0}}};
  EXPECT_DOUBLE_EQ(p.radius_at(50.0), 150.0);
  EXPECT_DOUBLE_EQ(p.radius_at(500.0), 200.0);
  const Track t = resample(p, 50.0, 200.0, VehicleParams{});
  ASSERT_EQ(t.points(), 5u);
  EXPECT_DOUBLE_EQ(t.radius()[1], 150.0);
  EXPECT_DOUBLE_EQ(t.radius()[4], 200.0);
}

TEST(Resample, Idempotent) {
  RadiusProfile p{{{0.0, 40.0}, {13.0, 250.0}, {27.5, 70.0}, {60.0, 10000.0}}};
  const Track once = resample(p, 2.5, 60.0, VehicleParams{});
  std::stringstream csv;
  write_radius_profile(csv, once);
  const Track twice = resample(load_radius_profile(csv), 2.5, 60.0, VehicleParams{});
  EXPECT_EQ(once.radius(), twice.radius());
  EXPECT_EQ(once.v_cap(), twice.v_cap());
}

TEST(Resample, Errors) {
  EXPECT_THROW(resample(RadiusProfile{}, 5.0, 100.0, VehicleParams{}), ValidationError);
  RadiusProfile p{{{0.0, 40.0}}};
  EXPECT_THROW(resample(p, 0.0, 100.0, VehicleParams{}), ValidationError);
  EXPECT_THROW(resample(p, 5.0, 1.0, VehicleParams{}), ValidationError);
}

TEST(SynthTrack, Straight) {
  const Track t = synth_track({SynthKind::straight, 10, 5.0}, VehicleParams{});
  EXPECT_EQ(t.segments(), 10u);
  for (double cap : t.v_cap()) EXPECT_NEAR(cap, 547.7, 0.05);
}

TEST(SynthTrack, Circle) {
  const Track t = synth_track({SynthKind::circle, 4, 5.0, 30.0}, VehicleParams{});
  for (double cap : t.v_cap()) EXPECT_EQ(ms_to_kmh(cap), 108.0);
}

TEST(SynthTrack, ChicaneAlternates) {
  const Track t = synth_track({SynthKind::chicane, 19, 5.0, 30.0, 5}, VehicleParams{});
  for (std::size_t i = 0; i < t.points(); ++i) {
    const double expected = (i / 5) % 2 == 0 ? std::sqrt(30.0 * kStraightRadius) : 30.0;
    EXPECT_DOUBLE_EQ(t.v_cap()[i], expected) << i;
  }
}

TEST(SynthTrack, RejectsEmpty) {
  EXPECT_THROW(synth_track({SynthKind::straight, 0, 5.0}, VehicleParams{}), ValidationError);
  EXPECT_THROW(parse_synth_kind("oval"), ValidationError);
}

TEST(Track, CapsArePointwiseInRadius) {
  const VehicleParams params;
  std::vector<double> radius{30.0, 500.0, 45.0, 10000.0};
  const Track a(5.0, radius, params);
  std::vector<double> permuted{10000.0, 45.0, 500.0, 30.0};
  const Track b(5.0, permuted, params);
  for (std::size_t i = 0; i < radius.size(); ++i) EXPECT_EQ(a.v_cap()[i], b.v_cap()[radius.size() - 1 - i]);
  EXPECT_DOUBLE_EQ(a.total_length(), 15.0);
}

}  // namespace
}  // namespace speedid
