#pragma once

namespace speedid {

inline constexpr double kKmhPerMs = 3.6;

constexpr double kmh_to_ms(double kmh) noexcept { return kmh / kKmhPerMs; }
constexpr double ms_to_kmh(double ms) noexcept { return ms * kKmhPerMs; }

// Controls are stored in percent on the grid and used as fractions in the physics.
constexpr double pct_to_fraction(double pct) noexcept { return pct / 100.0; }
constexpr double fraction_to_pct(double u) noexcept { return u * 100.0; }

}  // namespace speedid
