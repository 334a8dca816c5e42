#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "speedid_cli/config.hpp"

namespace speedid::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsage = 2 };

int cmd_solve(const RunConfig& config, const std::string& profile_out, std::ostream& out);

int cmd_rollout(const RunConfig& config, const std::string& policy_path, std::ostream& out);

struct BenchRow {
  std::size_t nv, na, nu;
  double sparse_ms;
  double dense_ms;
  double ratio() const { return dense_ms / sparse_ms; }
};

// Median wall-clock of both backends on a 10-segment diagram.
BenchRow bench_once(const RunConfig& config, std::size_t repetitions);

int cmd_bench(const RunConfig& config, std::size_t repetitions, std::ostream& out);

struct OracleReport {
  double max_value_error = 0.0;
  double argmax_agreement = 0.0;  // fraction of (segment, speed) pairs
  double rollout_time_diff = 0.0;
  std::optional<std::size_t> first_bad_segment;  // highest segment index that disagrees
  bool pass = false;
};

inline constexpr double kOracleTolerance = 1e-9;

// Solves with the configured backend and with the DP oracle. When
// `corrupt_segment` is set the solver sees a damaged speed CPT at that segment.
OracleReport oracle_check(const RunConfig& config, std::optional<std::size_t> corrupt_segment,
                          double budget);

int cmd_oracle_check(const RunConfig& config, std::optional<std::size_t> corrupt_segment,
                     double budget, std::ostream& out);

int cmd_synth_track(const RunConfig& config, std::ostream& out);

// Parses argv and dispatches. Errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace speedid::cli
