#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "speedid/error.hpp"
#include "speedid/solver.hpp"
#include "speedid/units.hpp"
#include "speedid_cli/commands.hpp"
#include "speedid_cli/policy_file.hpp"

namespace speedid::cli {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("speedid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "speedid");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

PolicyArtifact small_artifact() {
  const VehicleParams f1;
  const Track track = synth_track({SynthKind::chicane, 6, 5.0, 40.0, 2}, f1);
  const Grids grids = make_grids(41, 21, 21);
  SolveResult r = solve(track, grids, f1, Backend::sparse);
  return {r.policy, f1, 5.0, default_t_max(5.0), track.radius()};
}

TEST(PolicyFile, RoundTripIsExact) {
  const PolicyArtifact a = small_artifact();
  std::stringstream io;
  write_policy_file(io, a);
  const PolicyArtifact b = read_policy_file(io);
  EXPECT_EQ(a.policy.grids(), b.policy.grids());
  EXPECT_EQ(a.policy.rows(), b.policy.rows());
  EXPECT_EQ(a.vehicle, b.vehicle);
  EXPECT_EQ(a.radius, b.radius);
  EXPECT_EQ(a.t_max, b.t_max);
  const double v0 = kmh_to_ms(90.0);
  const RolloutResult ra = rollout(a.policy, a.track(), a.vehicle, v0);
  const RolloutResult rb = rollout(b.policy, b.track(), b.vehicle, v0);
  EXPECT_EQ(ra.v_hat, rb.v_hat);
  EXPECT_EQ(ra.u_hat, rb.u_hat);
  EXPECT_EQ(ra.total_time, rb.total_time);
}

TEST(PolicyFile, RejectsOtherVersionsAndGarbage) {
  std::stringstream io;
  write_policy_file(io, small_artifact());
  std::string text = io.str();
  const auto pos = text.find("version = 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 11, "version = 2");
  std::istringstream bumped(text);
  EXPECT_THROW(read_policy_file(bumped), ValidationError);

  std::istringstream garbage("not a policy\n");
  EXPECT_ANY_THROW(read_policy_file(garbage));
  std::istringstream truncated(io.str().substr(0, io.str().size() / 2));
  EXPECT_ANY_THROW(read_policy_file(truncated));
}

TEST(ProfileCsv, Layout) {
  RolloutResult r;
  r.v_hat = {kmh_to_ms(100.0), kmh_to_ms(110.0)};
  r.u_hat = {0.5};
  r.t = {0.2};
  r.total_time = 0.2;
  std::ostringstream out;
  write_profile_csv(out, r, 5.0);
  std::istringstream lines(out.str());
  std::string header, first, last;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, last);
  EXPECT_EQ(header, "i,position_m,speed_kmh,control_pct,segment_time_s,cum_time_s");
  EXPECT_EQ(first.substr(0, 2), "0,");
  EXPECT_NE(first.find(",50,"), std::string::npos);
  EXPECT_NE(last.find(",,"), std::string::npos);
}

TEST_F(Cli, SolveThenRolloutReproducesTheProfile) {
  const std::string policy = path("policy.txt");
  const std::string profile = path("profile.csv");
  ASSERT_EQ(invoke({"solve", "--synth", "chicane", "--segments", "12", "--nv", "81", "--na", "21",
                    "--nu", "41", "--v0", "90", "--out", policy, "--profile", profile}),
            kOk)
      << err_.str();
  const auto summary = nlohmann::json::parse(out_.str());
  EXPECT_EQ(summary["segments"], 12);
  EXPECT_EQ(summary["hard_violations"], 0);
  EXPECT_GT(summary["lap_time_s"].get<double>(), 0.0);

  const std::string replay = path("replay.csv");
  ASSERT_EQ(invoke({"rollout", "--policy", policy, "--v0", "90", "--out", replay}), kOk) << err_.str();
  EXPECT_EQ(slurp(profile), slurp(replay));
  const auto rollout_summary = nlohmann::json::parse(out_.str());
  EXPECT_EQ(rollout_summary["lap_time_s"], summary["lap_time_s"]);
}

TEST_F(Cli, ConfigFileSetsOptions) {
  const std::string cfg = path("run.toml");
  {
    std::ofstream f(cfg);
    f << "# small chicane\n"
         "synth = \"circle\"\n"
         "segments = 4\n"
         "corner-radius = 50\n"
         "nv = 41\nna = 11\nnu = 11\n"
         "v0 = 80\n"
         "backend = \"dense\"\n";
  }
  ASSERT_EQ(invoke({"solve", "--config", cfg, "--out", path("p.txt")}), kOk) << err_.str();
  const auto summary = nlohmann::json::parse(out_.str());
  EXPECT_EQ(summary["segments"], 4);
  EXPECT_EQ(summary["backend"], "dense");
  EXPECT_EQ(summary["grids"]["nv"], 41);
  EXPECT_EQ(summary["v0_kmh"], 80.0);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"solve", "--track", path("missing.csv"), "--out", path("p.txt")}), kUsage);
  EXPECT_EQ(invoke({"solve", "--v0", "450", "--out", path("p.txt")}), kUsage);
  EXPECT_EQ(invoke({"solve", "--segments", "0", "--out", path("p.txt")}), kUsage);
  EXPECT_EQ(invoke({"solve", "--backend", "gpu", "--out", path("p.txt")}), kUsage);
  EXPECT_EQ(invoke({"frobnicate"}), kUsage);
  EXPECT_EQ(invoke({}), kUsage);
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(Cli, BadTrackRowReportsLine) {
  const std::string csv = path("track.csv");
  {
    std::ofstream f(csv);
    f << "position_m,radius_m\n0,100\n5,-1\n";
  }
  EXPECT_EQ(invoke({"solve", "--track", csv, "--out", path("p.txt")}), kUsage);
  EXPECT_NE(err_.str().find("3"), std::string::npos) << err_.str();
}

TEST_F(Cli, RolloutRejectsVersionMismatch) {
  const std::string policy = path("policy.txt");
  std::ostringstream io;
  write_policy_file(io, small_artifact());
  std::string text = io.str();
  text.replace(text.find("version = 1"), 11, "version = 9");
  std::ofstream(policy) << text;
  EXPECT_EQ(invoke({"rollout", "--policy", policy}), kUsage);
}

TEST_F(Cli, OracleCheckPassesAndLocalizesCorruption) {
  const std::vector<std::string> base{"oracle-check", "--synth", "chicane", "--segments", "10", "--nv",
                                      "20", "--na", "20", "--nu", "20", "--v0", "80"};
  ASSERT_EQ(invoke(base), kOk) << out_.str() << err_.str();
  EXPECT_EQ(out_.str().rfind("PASS", 0), 0u);

  auto corrupt = base;
  corrupt.insert(corrupt.end(), {"--corrupt-segment", "4"});
  EXPECT_EQ(invoke(corrupt), kRuntimeFailure);
  const std::string text = out_.str();
  const auto summary = nlohmann::json::parse(text.substr(text.find('\n') + 1));
  EXPECT_EQ(summary["first_bad_segment"], 4);
  EXPECT_FALSE(summary["pass"].get<bool>());
}

TEST_F(Cli, OracleCheckRefusesLargeInstances) {
  EXPECT_EQ(invoke({"oracle-check", "--segments", "10", "--oracle-budget", "1000"}), kUsage);
}

TEST_F(Cli, SynthTrackWritesCsv) {
  ASSERT_EQ(invoke({"synth-track", "--synth", "circle", "--segments", "3", "--corner-radius", "30"}), kOk);
  std::istringstream in(out_.str());
  const RadiusProfile p = load_radius_profile(in);
  ASSERT_EQ(p.samples.size(), 4u);
  EXPECT_EQ(p.samples[3].position, 15.0);
  EXPECT_EQ(p.samples[3].radius, 30.0);
}

TEST_F(Cli, BenchReportsBothBackends) {
  ASSERT_EQ(invoke({"bench", "--nv", "30", "--na", "30", "--nu", "30", "--repetitions", "3"}), kOk);
  const std::string text = out_.str();
  const auto summary = nlohmann::json::parse(text.substr(text.rfind('{')));
  EXPECT_GT(summary["sparse_ms"].get<double>(), 0.0);
  EXPECT_GT(summary["dense_ms"].get<double>(), 0.0);
}

}  // namespace
}  // namespace speedid::cli
