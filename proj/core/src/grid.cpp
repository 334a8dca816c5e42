#include "speedid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "speedid/error.hpp"
#include "speedid/units.hpp"

namespace speedid {

Grid::Grid(double lo, double hi, std::size_t count) : lo_(lo), hi_(hi), count_(count) {
  if (count < 2) throw ValidationError("grid needs at least 2 values");
  if (!(hi > lo)) throw ValidationError("grid upper bound must exceed lower bound");
  step_ = (hi - lo) / static_cast<double>(count - 1);
}

double Grids::speed_ms(std::size_t k) const noexcept { return kmh_to_ms(speed_kmh.value(k)); }

double Grids::control_fraction(std::size_t k) const noexcept {
  return pct_to_fraction(control_pct.value(k));
}

Grids make_grids(std::size_t nv, std::size_t na, std::size_t nu) {
  return Grids{Grid(kSpeedLoKmh, kSpeedHiKmh, nv), Grid(kAccelLo, kAccelHi, na),
               Grid(kControlLo, kControlHi, nu)};
}

double TwoPointRow::probability(std::size_t k) const noexcept {
  if (k == lower_index) return weight;
  if (k == static_cast<std::size_t>(lower_index) + 1) return upper_weight();
  return 0.0;
}

TwoPointRow project_two_point(double x, const Grid& g) {
  const std::size_t last = g.size() - 1;
  if (!(x > g.lo())) return {0, 1.0};
  if (!(x < g.value(last))) return {static_cast<std::uint32_t>(last), 1.0};

  auto k = static_cast<std::size_t>(std::floor((x - g.lo()) / g.step()));
  k = std::min(k, last - 1);
  // floor() can land one cell off when x sits within rounding of a grid value.
  while (k > 0 && x < g.value(k)) --k;
  while (k + 1 < last && x >= g.value(k + 1)) ++k;

  const double weight = 1.0 - (x - g.value(k)) / g.step();
  if (weight >= 1.0) return {static_cast<std::uint32_t>(k), 1.0};
  if (weight <= 0.0) return {static_cast<std::uint32_t>(k + 1), 1.0};
  return {static_cast<std::uint32_t>(k), weight};
}

DenseCPT densify(const SparseCPT& cpt) {
  DenseCPT dense{cpt.outer, cpt.inner, cpt.child_count,
                 std::vector<double>(cpt.rows.size() * cpt.child_count, 0.0)};
  for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
    const TwoPointRow& row = cpt.rows[r];
    double* out = dense.table.data() + r * cpt.child_count;
    out[row.lower_index] = row.weight;
    if (row.weight < 1.0) out[row.lower_index + 1] = row.upper_weight();
  }
  return dense;
}

SparseCPT build_accel_cpt(const Grids& grids, const VehicleParams& p) {
  const std::size_t nv = grids.speed_kmh.size();
  const std::size_t nu = grids.control_pct.size();
  SparseCPT cpt{nv, nu, grids.accel_ms2.size(), std::vector<TwoPointRow>(nv * nu)};
  for (std::size_t v = 0; v < nv; ++v) {
    const double speed = grids.speed_ms(v);
    for (std::size_t u = 0; u < nu; ++u) {
      const double a = acceleration(grids.control_fraction(u), speed, p);
      cpt.rows[v * nu + u] = project_two_point(a, grids.accel_ms2);
    }
  }
  return cpt;
}

SparseCPT build_speed_cpt(const Grids& grids, double s) {
  if (!(s > 0.0)) throw ValidationError("segment length must be positive");
  const std::size_t nv = grids.speed_kmh.size();
  const std::size_t na = grids.accel_ms2.size();
  SparseCPT cpt{nv, na, nv, std::vector<TwoPointRow>(nv * na)};
  for (std::size_t v = 0; v < nv; ++v) {
    const double speed = grids.speed_ms(v);
    for (std::size_t a = 0; a < na; ++a) {
      const double next = ms_to_kmh(velocity_update(speed, grids.accel_ms2.value(a), s));
      cpt.rows[v * na + a] = project_two_point(next, grids.speed_kmh);
    }
  }
  return cpt;
}

double default_t_max(double s) noexcept { return s / kmh_to_ms(100.0); }

UtilityTable build_utility(const Grid& speed_kmh, double s, double t_max) {
  if (!(t_max >= 0.0)) throw ValidationError("t_max must be non-negative");
  const std::size_t n = speed_kmh.size();
  UtilityTable table{n, t_max, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double v_in = kmh_to_ms(speed_kmh.value(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double t = segment_time(v_in, kmh_to_ms(speed_kmh.value(j)), s);
      table.values[i * n + j] = is_stalled(t) ? 0.0 : std::max(0.0, t_max - t);
    }
  }
  return table;
}

LikelihoodVector speed_likelihood(double v_max_kmh, const Grid& speed_kmh) {
  LikelihoodVector out{std::vector<double>(speed_kmh.size(), 0.0)};
  bool fractional_done = false;
  for (std::size_t k = 0; k < speed_kmh.size(); ++k) {
    const double v = speed_kmh.value(k);
    if (v <= v_max_kmh) {
      out.phi[k] = 1.0;
    } else if (!fractional_done) {
      out.phi[k] = std::max(0.0, 1.0 - (v - v_max_kmh) / speed_kmh.step());
      fractional_done = true;
    }
  }
  return out;
}

const SparseCPT& Diagram::speed_cpt(std::size_t segment) const {
  auto it = speed_overrides.find(segment);
  return it == speed_overrides.end() ? speed : it->second;
}

Diagram build_diagram(const Track& track, const Grids& grids, const VehicleParams& params,
                      double t_max) {
  params.validate();
  Diagram d{grids,
            params,
            track.segment_length(),
            build_accel_cpt(grids, params),
            build_speed_cpt(grids, track.segment_length()),
            build_utility(grids.speed_kmh, track.segment_length(), t_max),
            {},
            track.v_cap(),
            {}};
  d.evidence.reserve(track.points());
  for (double cap : track.v_cap()) {
    d.evidence.push_back(speed_likelihood(ms_to_kmh(cap), grids.speed_kmh));
  }
  return d;
}

Diagram build_diagram(const Track& track, const Grids& grids, const VehicleParams& params) {
  return build_diagram(track, grids, params, default_t_max(track.segment_length()));
}

}  // namespace speedid
