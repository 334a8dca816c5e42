#include "speedid_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "speedid/error.hpp"
#include "speedid/oracle.hpp"
#include "speedid/units.hpp"
#include "speedid_cli/policy_file.hpp"

namespace speedid::cli {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

nlohmann::json grid_meta(const Grids& g) {
  return {{"nv", g.speed_kmh.size()}, {"na", g.accel_ms2.size()}, {"nu", g.control_pct.size()}};
}

// Shifts every row of the speed CPT one cell up; used to check that the oracle
// comparison localizes a broken segment.
SparseCPT corrupted(const SparseCPT& cpt) {
  SparseCPT out = cpt;
  for (auto& row : out.rows) {
    if (row.lower_index + 1 < out.child_count) {
      ++row.lower_index;
      if (row.lower_index + 1 == out.child_count) row.weight = 1.0;
    } else {
      row = TwoPointRow{0, 1.0};
    }
  }
  return out;
}

}  // namespace

int cmd_solve(const RunConfig& config, const std::string& profile_out, std::ostream& out) {
  config.validate();
  const Track track = config.load_track();
  const Grids grids = config.grids();
  const Backend backend = config.backend_kind();

  const auto start = Clock::now();
  const Diagram diagram = build_diagram(track, grids, config.vehicle, config.effective_t_max());
  const SolveResult result = solve(diagram, backend);
  const double wall = elapsed_ms(start);

  const double v0 = kmh_to_ms(config.v0_kmh);
  const RolloutResult profile = rollout(result.policy, track, config.vehicle, v0);
  const FeasibilityReport report = check_feasibility(profile, track, config.vehicle, speed_slack_ms(grids),
                                                     control_slack(grids));

  const std::string policy_path = config.out.empty() ? "policy.txt" : config.out;
  {
    auto f = open_out(policy_path);
    write_policy_file(f, PolicyArtifact{result.policy, config.vehicle, track.segment_length(),
                                        config.effective_t_max(), track.radius()});
  }
  if (!profile_out.empty()) {
    auto f = open_out(profile_out);
    write_profile_csv(f, profile, track.segment_length());
  }

  nlohmann::json summary = {
      {"command", "solve"},
      {"lap_time_s", lap_time(profile)},
      {"root_utility_s", result.expected_utility(config.v0_kmh)},
      {"backend", to_string(backend)},
      {"wall_ms", wall},
      {"segments", track.segments()},
      {"segment_length_m", track.segment_length()},
      {"v0_kmh", config.v0_kmh},
      {"t_max_s", config.effective_t_max()},
      {"grids", grid_meta(grids)},
      {"violations", report.violations.size()},
      {"hard_violations", report.hard_violations()},
      {"policy", policy_path},
  };
  out << summary.dump() << '\n';
  return kOk;
}

int cmd_rollout(const RunConfig& config, const std::string& policy_path, std::ostream& out) {
  std::ifstream in(policy_path);
  if (!in) throw ValidationError("cannot open policy file '" + policy_path + "'");
  const PolicyArtifact artifact = read_policy_file(in);
  const Grid& g = artifact.policy.grids().speed_kmh;
  if (!(config.v0_kmh >= g.lo() && config.v0_kmh <= g.hi())) {
    throw ValidationError("v0 outside the policy's speed grid");
  }
  const Track track = artifact.track();
  const RolloutResult profile = rollout(artifact.policy, track, artifact.vehicle, kmh_to_ms(config.v0_kmh));
  if (config.out.empty()) {
    write_profile_csv(out, profile, track.segment_length());
  } else {
    auto f = open_out(config.out);
    write_profile_csv(f, profile, track.segment_length());
    const auto report = check_feasibility(profile, track, artifact.vehicle,
                                          speed_slack_ms(artifact.policy.grids()),
                                          control_slack(artifact.policy.grids()));
    nlohmann::json summary = {{"command", "rollout"},
                              {"lap_time_s", lap_time(profile)},
                              {"v0_kmh", config.v0_kmh},
                              {"segments", track.segments()},
                              {"violations", report.violations.size()},
                              {"hard_violations", report.hard_violations()},
                              {"profile", config.out}};
    out << summary.dump() << '\n';
  }
  return kOk;
}

BenchRow bench_once(const RunConfig& config, std::size_t repetitions) {
  RunConfig c = config;
  c.track_path.clear();
  c.segments = 10;
  const Track track = c.load_track();
  const Grids grids = c.grids();
  auto time_backend = [&](Backend b) {
    std::vector<double> samples;
    for (std::size_t r = 0; r < std::max<std::size_t>(repetitions, 1); ++r) {
      const auto start = Clock::now();
      const SolveResult result = solve(build_diagram(track, grids, c.vehicle, c.effective_t_max()), b);
      samples.push_back(elapsed_ms(start));
      if (result.value.empty()) throw std::logic_error("empty solve");
    }
    return median(samples);
  };
  const double sparse_ms = time_backend(Backend::sparse);
  const double dense_ms = time_backend(Backend::dense);
  return {grids.speed_kmh.size(), grids.accel_ms2.size(), grids.control_pct.size(), sparse_ms, dense_ms};
}

int cmd_bench(const RunConfig& config, std::size_t repetitions, std::ostream& out) {
  config.validate();
  const BenchRow row = bench_once(config, repetitions);
  out << std::setw(6) << "|V|" << std::setw(6) << "|A|" << std::setw(6) << "|U|" << std::setw(14)
      << "sparse [ms]" << std::setw(14) << "dense [ms]" << std::setw(10) << "ratio" << '\n';
  out << std::setw(6) << row.nv << std::setw(6) << row.na << std::setw(6) << row.nu << std::fixed
      << std::setprecision(3) << std::setw(14) << row.sparse_ms << std::setw(14) << row.dense_ms
      << std::setw(10) << std::setprecision(2) << row.ratio() << '\n';
  out.unsetf(std::ios::floatfield);
  nlohmann::json summary = {{"command", "bench"},
                            {"segments", 10},
                            {"repetitions", std::max<std::size_t>(repetitions, 1)},
                            {"nv", row.nv},
                            {"na", row.na},
                            {"nu", row.nu},
                            {"sparse_ms", row.sparse_ms},
                            {"dense_ms", row.dense_ms},
                            {"ratio", row.ratio()}};
  out << summary.dump() << '\n';
  return kOk;
}

OracleReport oracle_check(const RunConfig& config, std::optional<std::size_t> corrupt_segment,
                          double budget) {
  config.validate();
  const Track track = config.load_track();
  const Grids grids = config.grids();
  const Diagram clean = build_diagram(track, grids, config.vehicle, config.effective_t_max());
  if (oracle_cost(clean) > budget) {
    throw std::length_error("instance exceeds the oracle budget; reduce --segments or grid sizes (cost " +
                            std::to_string(oracle_cost(clean)) + ")");
  }
  Diagram damaged = clean;
  if (corrupt_segment) {
    if (*corrupt_segment >= clean.segments()) throw ValidationError("corrupt segment out of range");
    damaged.speed_overrides.emplace(*corrupt_segment, corrupted(clean.speed));
  }
  const SolveResult solved = solve(damaged, config.backend_kind());
  const DPTable oracle = dp_solve(clean, budget);

  OracleReport report;
  std::size_t agree = 0;
  std::size_t total = 0;
  for (std::size_t i = clean.segments(); i-- > 0;) {
    double seg_err = 0.0;
    for (std::size_t v = 0; v < grids.speed_kmh.size(); ++v) {
      seg_err = std::max(seg_err, std::abs(solved.value[i][v] - oracle.value[i][v]));
      agree += solved.policy.at(i, v).u_index == oracle.choice[i][v].u_index ? 1 : 0;
      ++total;
    }
    report.max_value_error = std::max(report.max_value_error, seg_err);
    if (seg_err > kOracleTolerance && !report.first_bad_segment) report.first_bad_segment = i;
  }
  report.argmax_agreement = static_cast<double>(agree) / static_cast<double>(total);
  const double v0 = kmh_to_ms(config.v0_kmh);
  const double t_solver = lap_time(rollout(solved.policy, track, config.vehicle, v0));
  const double t_oracle = lap_time(dp_rollout(oracle, track, config.vehicle, v0));
  report.rollout_time_diff = std::abs(t_solver - t_oracle);
  report.pass = report.max_value_error <= kOracleTolerance && agree == total;
  return report;
}

int cmd_oracle_check(const RunConfig& config, std::optional<std::size_t> corrupt_segment,
                     double budget, std::ostream& out) {
  const OracleReport r = oracle_check(config, corrupt_segment, budget);
  nlohmann::json summary = {{"command", "oracle-check"},
                            {"pass", r.pass},
                            {"max_value_error_s", r.max_value_error},
                            {"argmax_agreement", r.argmax_agreement},
                            {"rollout_time_diff_s", r.rollout_time_diff},
                            {"backend", config.backend}};
  if (r.first_bad_segment) summary["first_bad_segment"] = *r.first_bad_segment;
  out << (r.pass ? "PASS" : "FAIL") << " oracle-check: max |value error| = " << r.max_value_error
      << " s, argmax agreement = " << 100.0 * r.argmax_agreement << "%";
  if (r.first_bad_segment) out << ", first disagreeing segment = " << *r.first_bad_segment;
  out << '\n' << summary.dump() << '\n';
  return r.pass ? kOk : kRuntimeFailure;
}

int cmd_synth_track(const RunConfig& config, std::ostream& out) {
  RunConfig c = config;
  c.track_path.clear();
  c.validate();
  const Track track = c.load_track();
  if (c.out.empty()) {
    write_radius_profile(out, track);
  } else {
    auto f = open_out(c.out);
    write_radius_profile(f, track);
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-optimal speed profiles via influence-diagram message passing", "speedid"};
  RunConfig config;
  add_run_options(app, config);
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "Solve the diagram, write the policy and a JSON summary");
  std::string profile_out;
  solve_cmd->add_option("--profile", profile_out, "Also write the rollout profile CSV here");

  auto* rollout_cmd = app.add_subcommand("rollout", "Roll out a stored policy from --v0");
  std::string policy_path;
  rollout_cmd->add_option("--policy", policy_path, "Policy file written by solve")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Time dense vs sparse backends on 10 segments");
  std::size_t repetitions = 5;
  bench_cmd->add_option("--repetitions", repetitions, "Timed runs per backend (median reported)");

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the solver against the DP oracle");
  std::optional<std::size_t> corrupt;
  double budget = kDefaultOracleBudget;
  oracle_cmd->add_option("--corrupt-segment", corrupt, "Test hook: damage the speed CPT at this segment");
  oracle_cmd->add_option("--oracle-budget", budget, "Largest n*|V|^2*|A|*|U| to enumerate");

  auto* synth_cmd = app.add_subcommand("synth-track", "Write a synthetic radius profile CSV");

  for (auto* sub : {solve_cmd, rollout_cmd, bench_cmd, oracle_cmd, synth_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "speedid: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(config, profile_out, out);
    if (*rollout_cmd) return cmd_rollout(config, policy_path, out);
    if (*bench_cmd) return cmd_bench(config, repetitions, out);
    if (*oracle_cmd) return cmd_oracle_check(config, corrupt, budget, out);
    if (*synth_cmd) return cmd_synth_track(config, out);
  } catch (const ValidationError& e) {
    err << "speedid: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "speedid: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    err << "speedid: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "speedid: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}

}  // namespace speedid::cli
