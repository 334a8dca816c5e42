#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "speedid/grid.hpp"
#include "speedid/solver.hpp"
#include "speedid/track.hpp"
#include "speedid/vehicle.hpp"

namespace CLI {
class App;
}

namespace speedid::cli {

// One experiment: track source, discretization, vehicle and solver settings.
// Every field is a `key = value` entry in the config file and a --key flag.
struct RunConfig {
  std::string track_path;  // empty: use the synthetic track
  double track_length = 0.0;  // m; 0 means up to the last profile sample
  std::string synth = "straight";
  std::size_t segments = 10;
  double corner_radius = 30.0;
  std::size_t block = 5;

  double segment_length = 5.0;
  std::size_t nv = 401;
  std::size_t na = 51;
  std::size_t nu = 201;
  double v_lo = kSpeedLoKmh;
  double v_hi = kSpeedHiKmh;
  double a_lo = kAccelLo;
  double a_hi = kAccelHi;
  double u_lo = kControlLo;
  double u_hi = kControlHi;

  double v0_kmh = 100.0;
  std::optional<double> t_max;
  VehicleParams vehicle;
  std::string backend = "sparse";
  std::string out;
  long long seed = 0;  // reserved; nothing here is random

  Grids grids() const;
  double effective_t_max() const;
  Backend backend_kind() const;
  // Throws ValidationError on out-of-range settings.
  void validate() const;
  // Loads the radius CSV or builds the synthetic track.
  Track load_track() const;
};

// Registers the shared flags (and --config) on the top-level app.
void add_run_options(CLI::App& app, RunConfig& config);

}  // namespace speedid::cli
