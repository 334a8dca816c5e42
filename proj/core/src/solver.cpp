#include "speedid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "speedid/error.hpp"
#include "speedid/units.hpp"

namespace speedid {
namespace {

// Row visitors. The sparse one touches the two stored entries in index order;
// the dense one walks the whole row. Since every skipped term is an exact zero,
// both produce bit-identical sums.
struct SparseRows {
  const SparseCPT& cpt;

  template <class Visit>
  void visit(std::size_t r, Visit&& f) const {
    const TwoPointRow& row = cpt.rows[r];
    f(static_cast<std::size_t>(row.lower_index), row.weight);
    if (row.weight < 1.0) f(static_cast<std::size_t>(row.lower_index) + 1, row.upper_weight());
  }
};

struct DenseRows {
  const DenseCPT& cpt;

  template <class Visit>
  void visit(std::size_t r, Visit&& f) const {
    const double* row = cpt.row(r);
    for (std::size_t c = 0; c < cpt.child_count; ++c) f(c, row[c]);
  }
};

// child(v, c) -> {phi, psi} for child index c under outer parent v.
template <class Rows, class Child>
void marginalize(const Rows& rows, std::size_t outer, std::size_t inner, Child&& child, Potentials& out) {
  out.phi.resize(outer * inner);
  out.psi.resize(outer * inner);
  for (std::size_t v = 0; v < outer; ++v) {
    for (std::size_t j = 0; j < inner; ++j) {
      const std::size_t r = v * inner + j;
      double phi = 0.0;
      double psi = 0.0;
      rows.visit(r, [&](std::size_t c, double p) {
        const auto [cphi, cpsi] = child(v, c);
        phi += p * cphi;
        psi += p * cpsi;
      });
      out.phi[r] = phi;
      out.psi[r] = psi;
    }
  }
}

void check_child_arrays(std::size_t outer, std::size_t child_count, std::span<const double> phi,
                        std::span<const double> psi) {
  if (phi.size() != outer * child_count || psi.size() != outer * child_count) {
    throw ValidationError("child potential does not match the CPT dimensions");
  }
}

template <class Rows, class Table>
void multiply_marginalize(const Rows& rows, const Table& cpt, std::span<const double> child_phi,
                          std::span<const double> child_psi, Potentials& out) {
  check_child_arrays(cpt.outer, cpt.child_count, child_phi, child_psi);
  const std::size_t stride = cpt.child_count;
  marginalize(
      rows, cpt.outer, cpt.inner,
      [&](std::size_t v, std::size_t c) {
        return std::pair{child_phi[v * stride + c], child_psi[v * stride + c]};
      },
      out);
}

// Buffers reused across segments so the backward pass allocates once.
struct Workspace {
  std::vector<double> to_go;
  Potentials separator;
  Potentials by_control;
};

template <class Rows, class Table>
void eliminate_speed_impl(const Rows& rows, const Table& cpt, const UtilityTable& utility,
                          const Potentials& incoming, const LikelihoodVector& evidence, Workspace& ws) {
  const std::size_t nv = cpt.outer;
  if (cpt.child_count != nv || utility.count != nv || incoming.phi.size() != nv ||
      incoming.psi.size() != nv || evidence.phi.size() != nv) {
    throw ValidationError("speed clique dimensions do not match");
  }
  // Expected saving to go behind each V_{i+1} state: Psi_in / Phi_in with 0/0 = 0.
  std::vector<double>& to_go = ws.to_go;
  to_go.resize(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    const double phi = incoming.phi[k];
    const double psi = incoming.psi[k];
    if (phi < 0.0 || psi < 0.0) throw std::logic_error("negative potential in incoming message");
    if (phi == 0.0) {
      if (psi != 0.0) throw std::logic_error("utility mass on a zero-probability state");
      to_go[k] = 0.0;
    } else {
      to_go[k] = psi / phi;
    }
  }
  const std::vector<double>& lik = evidence.phi;
  marginalize(
      rows, nv, cpt.inner,
      [&](std::size_t v, std::size_t c) {
        const double phi = lik[c] * incoming.phi[c];
        return std::pair{phi, phi * (utility.at(v, c) + to_go[c])};
      },
      ws.separator);
}

template <class Rows, class Table>
ControlElimination eliminate_control_impl(const Rows& rows, const Table& cpt,
                                          const Potentials& separator, const Grids& grids,
                                          double v_cap_ms, Workspace& ws) {
  const std::size_t nv = grids.speed_kmh.size();
  const std::size_t nu = grids.control_pct.size();
  if (cpt.outer != nv || cpt.inner != nu || cpt.child_count != grids.accel_ms2.size()) {
    throw ValidationError("control clique dimensions do not match");
  }
  multiply_marginalize(rows, cpt, separator.phi, separator.psi, ws.by_control);
  const Potentials& by_control = ws.by_control;

  ControlElimination out;
  out.message.phi.resize(nv);
  out.message.psi.resize(nv);
  out.value.resize(nv);
  out.policy.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const std::span<const double> xi(by_control.psi.data() + v * nu, nu);
    const std::span<const double> phi(by_control.phi.data() + v * nu, nu);
    const double u_max = max_control(grids.speed_ms(v), v_cap_ms);
    const ControlChoice choice = choose_control(xi, phi, grids, u_max);
    out.policy[v] = choice.row;
    out.value[v] = choice.value;
    out.message.phi[v] = choice.phi;
    out.message.psi[v] = choice.value;
  }
  return out;
}

}  // namespace

Backend parse_backend(const std::string& name) {
  if (name == "dense" || name == "standard") return Backend::dense;
  if (name == "sparse" || name == "zero_compressed") return Backend::sparse;
  throw ValidationError("unknown backend '" + name + "' (expected dense or sparse)");
}

std::string to_string(Backend b) { return b == Backend::dense ? "dense" : "sparse"; }

Potentials terminal_message(std::size_t speeds) {
  return {std::vector<double>(speeds, 1.0), std::vector<double>(speeds, 0.0)};
}

Potentials sparse_multiply_marginalize(const SparseCPT& cpt, std::span<const double> child_phi,
                                       std::span<const double> child_psi) {
  Potentials out;
  multiply_marginalize(SparseRows{cpt}, cpt, child_phi, child_psi, out);
  return out;
}

Potentials dense_multiply_marginalize(const DenseCPT& cpt, std::span<const double> child_phi,
                                      std::span<const double> child_psi) {
  Potentials out;
  multiply_marginalize(DenseRows{cpt}, cpt, child_phi, child_psi, out);
  return out;
}

Potentials eliminate_speed(const SparseCPT& speed_cpt, const UtilityTable& utility,
                           const Potentials& incoming, const LikelihoodVector& evidence) {
  Workspace ws;
  eliminate_speed_impl(SparseRows{speed_cpt}, speed_cpt, utility, incoming, evidence, ws);
  return std::move(ws.separator);
}

Potentials eliminate_speed(const DenseCPT& speed_cpt, const UtilityTable& utility,
                           const Potentials& incoming, const LikelihoodVector& evidence) {
  Workspace ws;
  eliminate_speed_impl(DenseRows{speed_cpt}, speed_cpt, utility, incoming, evidence, ws);
  return std::move(ws.separator);
}

ControlElimination eliminate_control(const SparseCPT& accel_cpt, const Potentials& separator,
                                     const Grids& grids, double v_cap_ms) {
  Workspace ws;
  return eliminate_control_impl(SparseRows{accel_cpt}, accel_cpt, separator, grids, v_cap_ms, ws);
}

ControlElimination eliminate_control(const DenseCPT& accel_cpt, const Potentials& separator,
                                     const Grids& grids, double v_cap_ms) {
  Workspace ws;
  return eliminate_control_impl(DenseRows{accel_cpt}, accel_cpt, separator, grids, v_cap_ms, ws);
}

ControlChoice choose_control(std::span<const double> xi, std::span<const double> phi,
                             const Grids& grids, double u_max) {
  const std::size_t nu = grids.control_pct.size();
  const double d_u = grids.control_fraction(1) - grids.control_fraction(0);
  const double mag_eps = 1e-9 * d_u;
  auto u_of = [&](std::size_t k) { return grids.control_fraction(k); };
  // Lowest |u| first, then the negative one.
  auto gentler = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(u_of(a));
    const double mb = std::abs(u_of(b));
    if (ma < mb - mag_eps) return true;
    if (ma > mb + mag_eps) return false;
    return u_of(a) < u_of(b);
  };

  std::size_t lo = nu;
  std::size_t hi = 0;
  for (std::size_t k = 0; k < nu; ++k) {
    if (std::abs(u_of(k)) <= u_max) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }

  if (lo == nu) {
    // No admissible control on this grid: fall back to the one nearest zero.
    std::size_t k0 = 0;
    for (std::size_t k = 1; k < nu; ++k) {
      if (gentler(k, k0)) k0 = k;
    }
    return {deterministic_row(k0), xi[k0], phi[k0]};
  }

  double best_value = xi[lo];
  for (std::size_t k = lo + 1; k <= hi; ++k) best_value = std::max(best_value, xi[k]);
  const double tol = 1e-12 * std::max(1.0, std::abs(best_value));

  std::size_t best = nu;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (xi[k] >= best_value - tol && (best == nu || gentler(k, best))) best = k;
  }

  // Nearest inadmissible neighbour across whichever admissible bound u* sits on.
  std::size_t outside = nu;
  double bound = 0.0;
  if (best == hi && hi + 1 < nu) {
    outside = hi + 1;
    bound = u_max;
  }
  if (best == lo && lo > 0) {
    const std::size_t below = lo - 1;
    const bool take_below = outside == nu || xi[below] >= xi[outside] - tol;
    if (take_below) {
      outside = below;
      bound = -u_max;
    }
  }

  if (outside != nu && xi[outside] >= xi[best] - tol) {
    double w_in = std::clamp(1.0 - std::abs(u_of(best) - bound) / d_u, 0.0, 1.0);
    const double w_out = std::clamp(1.0 - std::abs(u_of(outside) - bound) / d_u, 0.0, 1.0);
    const double total = w_in + w_out;
    if (total > 0.0) w_in /= total;
    if (w_in < 1.0) {
      const double w_alt = 1.0 - w_in;
      PolicyRow row{static_cast<std::uint32_t>(best), static_cast<std::uint32_t>(outside), w_in};
      return {row, w_in * xi[best] + w_alt * xi[outside], w_in * phi[best] + w_alt * phi[outside]};
    }
  }
  return {deterministic_row(best), xi[best], phi[best]};
}

double SolveResult::expected_utility(double v0_kmh) const {
  const Grid& g = policy.grids().speed_kmh;
  const TwoPointRow row = project_two_point(v0_kmh, g);
  const auto& root = root_value();
  double total = row.weight * root_evidence[row.lower_index] * root[row.lower_index];
  if (row.weight < 1.0) {
    const std::size_t k = row.lower_index + 1;
    total += row.upper_weight() * root_evidence[k] * root[k];
  }
  return total;
}

SolveResult solve(const Diagram& d, Backend backend) {
  const std::size_t n = d.segments();
  const std::size_t nv = d.grids.speed_kmh.size();
  if (n < 1) throw ValidationError("diagram has no segments");
  if (d.evidence.size() != n + 1) throw ValidationError("evidence does not match the track");
  if (d.accel.outer != nv || d.accel.inner != d.grids.control_pct.size() ||
      d.accel.child_count != d.grids.accel_ms2.size() || d.speed.outer != nv ||
      d.speed.inner != d.grids.accel_ms2.size() || d.speed.child_count != nv ||
      d.utility.count != nv) {
    throw ValidationError("diagram tables do not match the grids");
  }
  for (const auto& [segment, cpt] : d.speed_overrides) {
    if (segment >= n) throw ValidationError("speed CPT override beyond the last segment");
  }

  SolveResult result{Policy(d.grids, n), std::vector<std::vector<double>>(n), d.evidence.front().phi};
  Potentials message = terminal_message(nv);

  auto store = [&](std::size_t i, ControlElimination&& ce) {
    for (std::size_t v = 0; v < nv; ++v) result.policy.at(i, v) = ce.policy[v];
    result.value[i] = std::move(ce.value);
    message = std::move(ce.message);
  };

  Workspace ws;
  if (backend == Backend::sparse) {
    for (std::size_t i = n; i-- > 0;) {
      const SparseCPT& speed_i = d.speed_cpt(i);
      eliminate_speed_impl(SparseRows{speed_i}, speed_i, d.utility, message, d.evidence[i + 1], ws);
      store(i, eliminate_control_impl(SparseRows{d.accel}, d.accel, ws.separator, d.grids, d.v_cap_ms[i], ws));
    }
  } else {
    const DenseCPT accel = densify(d.accel);
    const DenseCPT speed = densify(d.speed);
    std::map<std::size_t, DenseCPT> overrides;
    for (const auto& [segment, cpt] : d.speed_overrides) overrides.emplace(segment, densify(cpt));
    for (std::size_t i = n; i-- > 0;) {
      auto it = overrides.find(i);
      const DenseCPT& speed_i = it == overrides.end() ? speed : it->second;
      eliminate_speed_impl(DenseRows{speed_i}, speed_i, d.utility, message, d.evidence[i + 1], ws);
      store(i, eliminate_control_impl(DenseRows{accel}, accel, ws.separator, d.grids, d.v_cap_ms[i], ws));
    }
  }
  return result;
}

SolveResult solve(const Track& track, const Grids& grids, const VehicleParams& params,
                  Backend backend) {
  return solve(build_diagram(track, grids, params), backend);
}

}  // namespace speedid
