#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "speedid/vehicle.hpp"

namespace speedid {

struct RadiusSample {
  double position = 0.0;  // arc length, m
  double radius = 0.0;    // m
};

// Ordered radius samples; positions start at 0 and strictly increase.
struct RadiusProfile {
  std::vector<RadiusSample> samples;

  // Radius at an arc-length position: piecewise linear between samples,
  // constant past either end.
  double radius_at(double position) const;
};

// A path split into n segments of equal length. Point i sits at i * segment_length,
// i = 0..n; per-point arrays therefore have n + 1 entries.
class Track {
 public:
  Track(double segment_length, std::vector<double> radius, const VehicleParams& params);

  double segment_length() const noexcept { return segment_length_; }
  std::size_t segments() const noexcept { return radius_.size() - 1; }
  std::size_t points() const noexcept { return radius_.size(); }
  double total_length() const noexcept { return segment_length_ * static_cast<double>(segments()); }

  const std::vector<double>& radius() const noexcept { return radius_; }
  // Speed cap per point, m/s.
  const std::vector<double>& v_cap() const noexcept { return v_cap_; }

 private:
  double segment_length_;
  std::vector<double> radius_;
  std::vector<double> v_cap_;
};

// Reads `position_m,radius_m` CSV. Radii above kStraightRadius are clamped to it.
RadiusProfile load_radius_profile(std::istream& in);

void write_radius_profile(std::ostream& out, const Track& track);

// Resamples onto points 0, s, 2s, ... The segment count is total_length / s
// rounded to nearest.
Track resample(const RadiusProfile& profile, double s, double total_length,
               const VehicleParams& params);

enum class SynthKind { straight, circle, chicane };

struct SynthSpec {
  SynthKind kind = SynthKind::straight;
  std::size_t segments = 10;
  double segment_length = 5.0;
  double corner_radius = 30.0;
  // Points per straight/corner block of a chicane; blocks start with a straight.
  std::size_t block = 5;
};

Track synth_track(const SynthSpec& spec, const VehicleParams& params);

SynthKind parse_synth_kind(const std::string& name);

}  // namespace speedid
