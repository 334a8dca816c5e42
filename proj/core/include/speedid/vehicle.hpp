#pragma once

// Point-mass longitudinal/lateral model. Everything here is SI:
// speeds in m/s, accelerations in m/s^2, lengths in m, times in s.

namespace speedid {

// Radius used for straights. Any value whose corner speed exceeds the speed grid works.
inline constexpr double kStraightRadius = 10000.0;

struct VehicleParams {
  double a_t_max = 16.0;  // full-throttle tangential acceleration
  double a_t_min = 18.0;  // full-brake deceleration magnitude
  double c_v = 0.0021;    // aerodynamic drag coefficient, 1/m
  double a_n_max = 30.0;  // lateral grip limit

  // Throws ValidationError unless all constants are in range.
  void validate() const;

  friend bool operator==(const VehicleParams&, const VehicleParams&) = default;
};

// Speed after a segment of constant acceleration. Over-braking (negative
// discriminant) brings the vehicle to rest instead of failing.
double velocity_update(double v, double a, double s) noexcept;

// Time over a segment at the mean of entry and exit speed. A stalled segment
// (both speeds zero) takes infinite time.
double segment_time(double v_in, double v_out, double s) noexcept;

bool is_stalled(double segment_seconds) noexcept;

// Net acceleration for control u in [-1, 1] at speed v, including drag.
double acceleration(double u, double v, const VehicleParams& p) noexcept;

// Highest speed the lateral grip allows on an arc of radius r.
double max_corner_speed(double r, const VehicleParams& p) noexcept;

// Largest admissible |u| at speed v given the local speed cap (friction circle).
// Above the cap no tangential control is left.
double max_control(double v, double v_max) noexcept;

// Speed where full throttle balances drag.
double terminal_velocity(const VehicleParams& p) noexcept;

}  // namespace speedid
