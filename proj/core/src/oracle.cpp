#include "speedid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "speedid/error.hpp"
#include "speedid/units.hpp"

namespace speedid {
namespace {

// The decision rule below restates the solver's conventions independently:
//  - admissible controls are |u| <= u_max(v) (solver: choose_control),
//  - ties within 1e-12 relative go to the lowest |u|, then the negative control,
//  - no admissible control -> the control nearest zero,
//  - a boundary maximizer is blended with its outside neighbour when that one is
//    at least as good, with weights 1 - |u - bound| / d_U renormalized.
PolicyRow decide(const std::vector<double>& xi, const Grids& grids, double u_max, double& value) {
  const std::size_t nu = xi.size();
  const double d_u = grids.control_fraction(1) - grids.control_fraction(0);

  std::vector<std::size_t> admissible;
  for (std::size_t k = 0; k < nu; ++k) {
    if (std::abs(grids.control_fraction(k)) <= u_max) admissible.push_back(k);
  }

  auto rank = [&](std::size_t k) { return std::abs(grids.control_fraction(k)); };
  auto prefer = [&](std::size_t a, std::size_t b) {
    if (std::abs(rank(a) - rank(b)) > 1e-9 * d_u) return rank(a) < rank(b);
    return a < b;  // same magnitude: the lower index is the negative control
  };

  if (admissible.empty()) {
    std::size_t pick = 0;
    for (std::size_t k = 0; k < nu; ++k) {
      if (prefer(k, pick)) pick = k;
    }
    value = xi[pick];
    return deterministic_row(pick);
  }

  double top = -1.0;
  for (std::size_t k : admissible) top = std::max(top, xi[k]);
  const double tol = 1e-12 * std::max(1.0, std::abs(top));
  std::vector<std::size_t> tied;
  for (std::size_t k : admissible) {
    if (xi[k] >= top - tol) tied.push_back(k);
  }
  const std::size_t star = *std::min_element(tied.begin(), tied.end(), prefer);

  struct Candidate {
    std::size_t index;
    double bound;
  };
  std::vector<Candidate> outside;
  if (star == admissible.front() && star > 0) outside.push_back({star - 1, -u_max});
  if (star == admissible.back() && star + 1 < nu) outside.push_back({star + 1, u_max});
  if (!outside.empty()) {
    Candidate c = outside.front();
    if (outside.size() == 2 && xi[outside[1].index] > xi[outside[0].index] + tol) c = outside[1];
    if (xi[c.index] >= xi[star] - tol) {
      const double a = std::clamp(1.0 - std::abs(grids.control_fraction(star) - c.bound) / d_u, 0.0, 1.0);
      const double b = std::clamp(1.0 - std::abs(grids.control_fraction(c.index) - c.bound) / d_u, 0.0, 1.0);
      double w = a;
      if (a + b > 0.0) w = a / (a + b);
      if (w < 1.0) {
        value = w * xi[star] + (1.0 - w) * xi[c.index];
        return PolicyRow{static_cast<std::uint32_t>(star), static_cast<std::uint32_t>(c.index), w};
      }
    }
  }
  value = xi[star];
  return deterministic_row(star);
}

}  // namespace

Policy DPTable::to_policy() const {
  std::vector<PolicyRow> rows;
  rows.reserve(choice.size() * grids.speed_kmh.size());
  for (const auto& seg : choice) rows.insert(rows.end(), seg.begin(), seg.end());
  return Policy(grids, choice.size(), std::move(rows));
}

double oracle_cost(const Diagram& d) noexcept {
  const double nv = static_cast<double>(d.grids.speed_kmh.size());
  return static_cast<double>(d.segments()) * nv * nv * static_cast<double>(d.grids.accel_ms2.size()) *
         static_cast<double>(d.grids.control_pct.size());
}

DPTable dp_solve(const Diagram& d, double budget) {
  if (oracle_cost(d) > budget) {
    throw std::length_error("instance too large for the oracle (" + std::to_string(oracle_cost(d)) +
                            " > budget " + std::to_string(budget) + ")");
  }
  const std::size_t n = d.segments();
  const std::size_t nv = d.grids.speed_kmh.size();
  const std::size_t na = d.grids.accel_ms2.size();
  const std::size_t nu = d.grids.control_pct.size();

  DPTable table{std::vector<std::vector<double>>(n + 1, std::vector<double>(nv, 0.0)),
                std::vector<std::vector<double>>(n + 1, std::vector<double>(nv, 1.0)),
                std::vector<std::vector<PolicyRow>>(n, std::vector<PolicyRow>(nv)), d.grids};

  std::vector<double> xi(nu);
  std::vector<double> mass(nu);
  for (std::size_t i = n; i-- > 0;) {
    const SparseCPT& speed = d.speed_cpt(i);
    const std::vector<double>& lik = d.evidence[i + 1].phi;
    const std::vector<double>& next = table.value[i + 1];
    const std::vector<double>& next_mass = table.evidence_mass[i + 1];
    for (std::size_t v = 0; v < nv; ++v) {
      for (std::size_t u = 0; u < nu; ++u) {
        double total = 0.0;
        double reach = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
          const double pa = d.accel.row(v, u).probability(a);
          if (pa == 0.0) continue;
          double inner = 0.0;
          double inner_reach = 0.0;
          for (std::size_t w = 0; w < nv; ++w) {
            const double pv = speed.row(v, a).probability(w);
            if (pv == 0.0) continue;
            // Utility of this segment counts only on paths that satisfy every later cap.
            inner += pv * lik[w] * (d.utility.at(v, w) * next_mass[w] + next[w]);
            inner_reach += pv * lik[w] * next_mass[w];
          }
          total += pa * inner;
          reach += pa * inner_reach;
        }
        xi[u] = total;
        mass[u] = reach;
      }
      const double u_max = max_control(d.grids.speed_ms(v), d.v_cap_ms[i]);
      double value = 0.0;
      const PolicyRow row = decide(xi, d.grids, u_max, value);
      table.choice[i][v] = row;
      table.value[i][v] = value;
      table.evidence_mass[i][v] =
          row.deterministic() ? mass[row.u_index] : row.weight * mass[row.u_index] + (1.0 - row.weight) * mass[row.u_alt];
    }
  }
  return table;
}

DPTable dp_solve(const Track& track, const Grids& grids, const VehicleParams& params, double budget) {
  return dp_solve(build_diagram(track, grids, params), budget);
}

RolloutResult dp_rollout(const DPTable& table, const Track& track, const VehicleParams& params,
                         double v0) {
  const Grid& g = table.grids.speed_kmh;
  if (table.segments() != track.segments()) throw ValidationError("table and track differ in length");
  if (!(ms_to_kmh(v0) >= g.lo() && ms_to_kmh(v0) <= g.hi())) {
    throw ValidationError("initial speed outside the speed grid");
  }
  auto mean_control = [&](std::size_t i, std::size_t k) {
    const PolicyRow& r = table.choice[i][k];
    if (r.weight == 1.0) return table.grids.control_fraction(r.u_index);
    return r.weight * table.grids.control_fraction(r.u_index) +
           (1.0 - r.weight) * table.grids.control_fraction(r.u_alt);
  };

  RolloutResult out;
  out.v_hat.push_back(v0);
  double v = v0;
  const double s = track.segment_length();
  for (std::size_t i = 0; i < table.segments(); ++i) {
    const double x = ms_to_kmh(v);
    double u = 0.0;
    if (x <= g.lo()) {
      u = mean_control(i, 0);
    } else if (x >= g.value(g.size() - 1)) {
      u = mean_control(i, g.size() - 1);
    } else {
      std::size_t k = 0;
      while (k + 2 < g.size() && g.value(k + 1) <= x) ++k;
      const double w_lo = 1.0 - std::abs(x - g.value(k)) / g.step();
      const double w_hi = 1.0 - std::abs(g.value(k + 1) - x) / g.step();
      u = w_lo * mean_control(i, k) + w_hi * mean_control(i, k + 1);
    }
    u = std::clamp(u, -1.0, 1.0);
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

}  // namespace speedid
