#include "speedid_cli/config.hpp"

#include <fstream>

#include "CLI11.hpp"
#include "speedid/error.hpp"

namespace speedid::cli {

Grids RunConfig::grids() const {
  return Grids{Grid(v_lo, v_hi, nv), Grid(a_lo, a_hi, na), Grid(u_lo, u_hi, nu)};
}

double RunConfig::effective_t_max() const { return t_max.value_or(default_t_max(segment_length)); }

Backend RunConfig::backend_kind() const { return parse_backend(backend); }

void RunConfig::validate() const {
  if (nv < 2 || na < 2 || nu < 2) throw ValidationError("grid sizes must be at least 2");
  if (!(segment_length > 0.0)) throw ValidationError("segment-length must be positive");
  if (!(v0_kmh >= v_lo && v0_kmh <= v_hi)) throw ValidationError("v0 outside the speed grid range");
  if (v_lo < 0.0) throw ValidationError("speeds cannot be negative");
  if (u_lo < -100.0 || u_hi > 100.0) throw ValidationError("control range must lie within [-100, 100]");
  if (t_max && *t_max < 0.0) throw ValidationError("tmax must be non-negative");
  vehicle.validate();
  (void)grids();
  (void)backend_kind();
  if (track_path.empty()) {
    (void)parse_synth_kind(synth);
    if (segments < 1) throw ValidationError("segments must be at least 1");
  }
}

Track RunConfig::load_track() const {
  if (track_path.empty()) {
    SynthSpec spec{parse_synth_kind(synth), segments, segment_length, corner_radius, block};
    return synth_track(spec, vehicle);
  }
  std::ifstream in(track_path);
  if (!in) throw ValidationError("cannot open track file '" + track_path + "'");
  const RadiusProfile profile = load_radius_profile(in);
  const double length = track_length > 0.0 ? track_length : profile.samples.back().position;
  return resample(profile, segment_length, length, vehicle);
}

void add_run_options(CLI::App& app, RunConfig& c) {
  app.set_config("--config", "", "Config file with `key = value` lines");
  app.add_option("--track", c.track_path, "Radius profile CSV (position_m,radius_m)");
  app.add_option("--length", c.track_length, "Track length to resample, m (default: last sample)");
  app.add_option("--synth", c.synth, "Synthetic track: straight | circle | chicane");
  app.add_option("--segments", c.segments, "Synthetic track segment count");
  app.add_option("--corner-radius", c.corner_radius, "Synthetic corner radius, m");
  app.add_option("--block", c.block, "Chicane block length in points");
  app.add_option("--segment-length", c.segment_length, "Segment length s, m");
  app.add_option("--nv", c.nv, "Speed grid size |V|");
  app.add_option("--na", c.na, "Acceleration grid size |A|");
  app.add_option("--nu", c.nu, "Control grid size |U|");
  app.add_option("--v-lo", c.v_lo, "Speed grid lower bound, km/h");
  app.add_option("--v-hi", c.v_hi, "Speed grid upper bound, km/h");
  app.add_option("--a-lo", c.a_lo, "Acceleration grid lower bound, m/s^2");
  app.add_option("--a-hi", c.a_hi, "Acceleration grid upper bound, m/s^2");
  app.add_option("--u-lo", c.u_lo, "Control grid lower bound, percent");
  app.add_option("--u-hi", c.u_hi, "Control grid upper bound, percent");
  app.add_option("--v0", c.v0_kmh, "Initial speed, km/h");
  app.add_option("--tmax", c.t_max, "Utility offset t_max, s (default: segment time at 100 km/h)");
  app.add_option("--at-max", c.vehicle.a_t_max, "Max tangential acceleration, m/s^2");
  app.add_option("--at-min", c.vehicle.a_t_min, "Max tangential deceleration, m/s^2");
  app.add_option("--cv", c.vehicle.c_v, "Drag coefficient, 1/m");
  app.add_option("--an-max", c.vehicle.a_n_max, "Max lateral acceleration, m/s^2");
  app.add_option("--backend", c.backend, "dense | sparse");
  app.add_option("--out", c.out, "Output path");
  app.add_option("--seed", c.seed, "Reserved; all algorithms are deterministic");
}

}  // namespace speedid::cli
