#include "speedid/vehicle.hpp"

#include <cmath>
#include <limits>

#include "speedid/error.hpp"

namespace speedid {

void VehicleParams::validate() const {
  if (!(a_t_max > 0.0)) throw ValidationError("a_t_max must be positive");
  if (!(a_t_min > 0.0)) throw ValidationError("a_t_min must be positive");
  if (!(c_v >= 0.0)) throw ValidationError("c_v must be non-negative");
  if (!(a_n_max > 0.0)) throw ValidationError("a_n_max must be positive");
}

double velocity_update(double v, double a, double s) noexcept {
  const double disc = v * v + 2.0 * s * a;
  return disc > 0.0 ? std::sqrt(disc) : 0.0;
}

double segment_time(double v_in, double v_out, double s) noexcept {
  const double mean = 0.5 * (v_in + v_out);
  if (!(mean > 0.0)) return std::numeric_limits<double>::infinity();
  return s / mean;
}

bool is_stalled(double segment_seconds) noexcept { return std::isinf(segment_seconds); }

double acceleration(double u, double v, const VehicleParams& p) noexcept {
  const double drag = p.c_v * v * v;
  return (u >= 0.0 ? p.a_t_max : p.a_t_min) * u - drag;
}

double max_corner_speed(double r, const VehicleParams& p) noexcept {
  return std::sqrt(p.a_n_max * r);
}

double max_control(double v, double v_max) noexcept {
  if (v > v_max) return 0.0;
  const double ratio = v / v_max;
  const double r2 = ratio * ratio;
  return std::sqrt(1.0 - r2 * r2);
}

double terminal_velocity(const VehicleParams& p) noexcept {
  if (p.c_v == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(p.a_t_max / p.c_v);
}

}  // namespace speedid
