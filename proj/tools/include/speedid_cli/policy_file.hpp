#pragma once

#include <iosfwd>
#include <vector>

#include "speedid/policy.hpp"
#include "speedid/track.hpp"
#include "speedid/vehicle.hpp"

namespace speedid::cli {

inline constexpr const char* kPolicyMagic = "speedid-policy";
inline constexpr int kPolicyVersion = 1;

// Everything a rollout needs without re-solving.
struct PolicyArtifact {
  Policy policy;
  VehicleParams vehicle;
  double segment_length = 0.0;
  double t_max = 0.0;
  std::vector<double> radius;  // per point, m

  Track track() const { return Track(segment_length, radius, vehicle); }
};

// Text format:
//   speedid-policy
//   version = 1
//   <key> = <value> header lines (grids, vehicle, segment length, radii)
//   rows
//   i,v_index,u_index                    deterministic
//   i,v_index,u_index,u_index2,weight    weight on u_index, 1 - weight on u_index2
// Floating-point values are written with 17 significant digits so a read
// reproduces the policy bit for bit.
void write_policy_file(std::ostream& out, const PolicyArtifact& artifact);
PolicyArtifact read_policy_file(std::istream& in);

// Profile CSV: i,position_m,speed_kmh,control_pct,segment_time_s,cum_time_s.
// Row i is path point i; control_pct is the control applied from that point on
// (empty at the last point), segment_time_s the time of the segment ending there.
void write_profile_csv(std::ostream& out, const RolloutResult& result, double segment_length);

}  // namespace speedid::cli
