#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "ndrl/fixtures.hpp"
#include "ndrl/training_log.hpp"

namespace fs = std::filesystem;
using namespace ndrl;
using namespace ndrl::cli;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / "ndrl_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path config_file() {
  static const fs::path p = [] {
    const auto d = fs::temp_directory_path() / "ndrl_cli_tests";
    fs::create_directories(d);
    const auto f = d / "c.toml";
    std::ofstream(f) << "# short runs\nepisodes = 3\n";
    return f;
  }();
  return p;
}

ParseResult parse(std::vector<std::string> args) {
  args.insert(args.begin(), "ndrl");
  return parse_args(args);
}

int run(std::vector<std::string> args) {
  const ParseResult r = parse(std::move(args));
  if (!r.command) return r.exit_code;
  return run_command(*r.command);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const std::string& value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    ::setenv(name, value.c_str(), 1);
  }
  ~ScopedEnv() {
    if (old_) {
      ::setenv(name_, old_->c_str(), 1);
    } else {
      ::unsetenv(name_);
    }
  }

 private:
  const char* name_;
  std::optional<std::string> old_;
};

}  // namespace

TEST(ParseArgs, TrainHappyPath) {
  const auto r = parse({"train", "--config", config_file().string(), "--seed", "1", "--out", "runs/"});
  ASSERT_TRUE(r.command.has_value()) << r.output;
  EXPECT_EQ(r.command->subcommand, Subcommand::Train);
  EXPECT_EQ(r.command->seed, 1u);
  EXPECT_EQ(r.command->out, fs::path("runs/"));
  EXPECT_EQ(r.command->config, config_file());
}

TEST(ParseArgs, UsageErrors) {
  const auto missing = parse({"train"});
  EXPECT_FALSE(missing.command.has_value());
  EXPECT_EQ(missing.exit_code, kExitUsage);
  EXPECT_NE(missing.output.find("--config"), std::string::npos);

  EXPECT_EQ(parse({}).exit_code, kExitUsage);
  EXPECT_EQ(parse({"fly"}).exit_code, kExitUsage);
  EXPECT_EQ(parse({"train", "--config", config_file().string(), "--bogus"}).exit_code, kExitUsage);
  EXPECT_EQ(parse({"train", "--config", "/nonexistent/c.toml"}).exit_code, kExitUsage);
  EXPECT_EQ(parse({"train", "--config", config_file().string(), "--seed", "1", "--seeds", "1..3"}).exit_code,
            kExitUsage);
  EXPECT_EQ(parse({"train", "--config", config_file().string(), "--seeds", "5..2"}).exit_code, kExitUsage);
  EXPECT_EQ(parse({"evaluate"}).exit_code, kExitUsage);
  EXPECT_EQ(parse({"compare", "--ndrl", "a"}).exit_code, kExitUsage);
}

TEST(ParseArgs, HelpExitsZero) {
  const auto top = parse({"--help"});
  EXPECT_FALSE(top.command.has_value());
  EXPECT_EQ(top.exit_code, kExitOk);
  EXPECT_NE(top.output.find("calibrate"), std::string::npos);
  const auto sub = parse({"train", "--help"});
  EXPECT_EQ(sub.exit_code, kExitOk);
  EXPECT_NE(sub.output.find("--seeds"), std::string::npos);
}

TEST(ParseArgs, SeedLists) {
  EXPECT_EQ(parse_seed_list("3"), (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(parse_seed_list("1..5"), (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(parse_seed_list("1,2,7"), (std::vector<std::uint64_t>{1, 2, 7}));
  EXPECT_THROW(parse_seed_list(""), std::invalid_argument);
  EXPECT_THROW(parse_seed_list("1,1"), std::invalid_argument);
  EXPECT_THROW(parse_seed_list("a..b"), std::invalid_argument);
  EXPECT_THROW(parse_seed_list("-1"), std::invalid_argument);
}

TEST(OutDir, FlagThenEnvironmentThenDefault) {
  CliCommand cmd;
  cmd.subcommand = Subcommand::Baseline;
  {
    ScopedEnv env("NDRL_OUT", "/tmp/ndrl_root");
    EXPECT_EQ(resolve_out_dir(cmd), fs::path("/tmp/ndrl_root/baseline"));
    cmd.out = "explicit";
    EXPECT_EQ(resolve_out_dir(cmd), fs::path("explicit"));
    cmd.out.reset();
  }
  ScopedEnv empty("NDRL_OUT", "");
  EXPECT_EQ(resolve_out_dir(cmd), fs::path("runs/baseline"));
}

TEST(RunCommand, TrainWritesOutputsAndRerunsMatch) {
  const auto a = fresh_dir("train_a"), b = fresh_dir("train_b");
  ASSERT_EQ(run({"train", "--config", config_file().string(), "--seed", "2", "--out", a.string()}), kExitOk);
  ASSERT_EQ(run({"train", "--config", config_file().string(), "--seed", "2", "--out", b.string()}), kExitOk);
  for (const char* f : {"training_log.csv", "best_schedule.csv", "reward_curve.csv", "run_meta.json"}) {
    EXPECT_TRUE(fs::exists(a / f)) << f;
  }
  EXPECT_EQ(slurp(a / "training_log.csv"), slurp(b / "training_log.csv"));
  EXPECT_EQ(slurp(a / "best_schedule.csv"), slurp(b / "best_schedule.csv"));
  const auto meta = nlohmann::json::parse(slurp(a / "run_meta.json"));
  EXPECT_EQ(meta["method"], "NDRL");
  EXPECT_EQ(meta["episodes"], 3);
}

TEST(RunCommand, FlagsOverrideConfig) {
  const auto d = fresh_dir("override");
  ASSERT_EQ(run({"baseline", "--config", config_file().string(), "--episodes", "2", "--set", "eta=0.9", "--out",
                 d.string()}),
            kExitOk);
  const auto meta = nlohmann::json::parse(slurp(d / "run_meta.json"));
  EXPECT_EQ(meta["method"], "DQN");
  EXPECT_EQ(meta["episodes"], 2);
  EXPECT_EQ(meta["config"]["eta"], "0.9");
}

TEST(RunCommand, MultiSeedFansOutWithSummary) {
  const auto d = fresh_dir("seeds");
  ASSERT_EQ(run({"baseline", "--config", config_file().string(), "--episodes", "2", "--seeds", "1..3", "--out",
                 d.string()}),
            kExitOk);
  for (int s = 1; s <= 3; ++s) EXPECT_TRUE(fs::exists(d / ("seed_" + std::to_string(s)) / "training_log.csv"));
  const std::string summary = slurp(d / "summary.csv");
  EXPECT_EQ(summary.rfind("method,seed,best_yield", 0), 0u);
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 4);
}

TEST(RunCommand, BadOverridesAreUsageErrors) {
  const auto d = fresh_dir("bad_override");
  EXPECT_EQ(run({"train", "--config", config_file().string(), "--set", "colour=red", "--out", d.string()}),
            kExitUsage);
  EXPECT_EQ(run({"train", "--config", config_file().string(), "--set", "noequals", "--out", d.string()}),
            kExitUsage);
}

TEST(RunCommand, CompareTabulatesFieldRowsAndMethods) {
  const auto ndrl = fresh_dir("cmp_ndrl"), dqn = fresh_dir("cmp_dqn"), out = fresh_dir("cmp_out");
  ASSERT_EQ(run({"train", "--config", config_file().string(), "--out", ndrl.string()}), kExitOk);
  ASSERT_EQ(run({"baseline", "--config", config_file().string(), "--out", dqn.string()}), kExitOk);
  ASSERT_EQ(run({"compare", "--ndrl", ndrl.string(), "--dqn", (dqn / "training_log.csv").string(), "--out",
                 out.string()}),
            kExitOk);
  const std::string table = slurp(out / "comparison_table.csv");
  EXPECT_NE(table.find("Water-Nitrogen Management,2023,Field Data,537,250,6110,1.14,24.44\n"), std::string::npos);
  EXPECT_NE(table.find("Water-Nitrogen Management,2024,Field Data,537,250,7414,1.38,29.66\n"), std::string::npos);
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  for (const char* m : {"NDRL", "DQN"}) {
    ASSERT_TRUE(metrics.contains(m)) << m;
    EXPECT_TRUE(metrics[m].contains("cyasr")) << m;
    const bool has_row = table.find(std::string(",") + m + ",") != std::string::npos;
    EXPECT_EQ(has_row, !metrics[m]["best_yield"].is_null()) << m;
  }
  EXPECT_FALSE(metrics["NDRL"]["best_yield"].is_null());

  const auto out2 = fresh_dir("cmp_same");
  ASSERT_EQ(run({"compare", "--ndrl", ndrl.string(), "--dqn", ndrl.string(), "--out", out2.string()}), kExitOk);
  const auto same = nlohmann::json::parse(slurp(out2 / "metrics.json"));
  EXPECT_EQ(same["NDRL"]["best_yield"], same["DQN"]["best_yield"]);
  EXPECT_EQ(same["NDRL"]["iwp"], same["DQN"]["iwp"]);
}

TEST(RunCommand, CompareMissingLogNamesThePath) {
  const auto out = fresh_dir("cmp_missing");
  ::testing::internal::CaptureStderr();
  const int code = run({"compare", "--ndrl", "/nonexistent/ndrl_run", "--dqn", "/nonexistent/dqn_run", "--out",
                        out.string()});
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, kExitRuntime);
  EXPECT_NE(err.find("/nonexistent/ndrl_run"), std::string::npos) << err;
}

TEST(RunCommand, CompareMalformedLogIsDataError) {
  const auto d = fresh_dir("cmp_bad");
  std::ofstream(d / "training_log.csv") << "episode,reward\n1,2\n";
  EXPECT_EQ(run({"compare", "--ndrl", d.string(), "--dqn", d.string(), "--out", d.string()}), kExitRuntime);
}

TEST(RunCommand, EvaluateAndExportFixtures) {
  const auto d = fresh_dir("export");
  ASSERT_EQ(run({"export-fixtures", "--out", d.string()}), kExitOk);
  for (const char* f : {"field_treatments.csv", "weather_dry2023.csv", "weather_wet2024.csv", "toy_mdp.txt",
                        "calibration_grid.txt", "soil_params.txt", "default_config.txt", "schedules/Tr0_23.csv"}) {
    EXPECT_TRUE(fs::exists(d / f)) << f;
  }
  for (const char* f : {"field_treatments.csv", "toy_mdp.txt", "calibration_grid.txt", "soil_params.txt",
                        "default_config.txt"}) {
    EXPECT_EQ(slurp(d / f), slurp(fs::path(NDRL_DATA_DIR) / f)) << f;
  }
  ASSERT_EQ(run({"evaluate", "--schedule", (d / "schedules/Tr0_23.csv").string(), "--out", d.string()}), kExitOk);
  EXPECT_NE(slurp(d / "evaluation.csv").find(",537,250,"), std::string::npos);
  EXPECT_EQ(run({"evaluate", "--schedule", "/nonexistent/s.csv"}), kExitRuntime);
}

TEST(RunCommand, CalibrateIsDeterministicAndRejectsEmptyGrid) {
  const auto d = fresh_dir("calib");
  std::ofstream(d / "small_grid.txt") << "yield_potential = 6500, 7000\nwater_sensitivity = 4, 5\n";
  ASSERT_EQ(run({"calibrate", "--grid", (d / "small_grid.txt").string(), "--out", (d / "a").string()}), kExitOk);
  ASSERT_EQ(run({"calibrate", "--grid", (d / "small_grid.txt").string(), "--out", (d / "b").string()}), kExitOk);
  EXPECT_EQ(slurp(d / "a/soil_params.txt"), slurp(d / "b/soil_params.txt"));
  EXPECT_EQ(slurp(d / "a/calibration_report.json"), slurp(d / "b/calibration_report.json"));
  const auto report = nlohmann::json::parse(slurp(d / "a/calibration_report.json"));
  EXPECT_EQ(report["grid_points"], 4);
  EXPECT_EQ(report["treatments"].size(), 8u);

  std::ofstream(d / "empty_grid.txt") << "# no axes\n";
  EXPECT_EQ(run({"calibrate", "--grid", (d / "empty_grid.txt").string(), "--out", (d / "c").string()}),
            kExitRuntime);
  EXPECT_EQ(run({"calibrate", "--fixtures", "/nonexistent/t.csv", "--out", (d / "c").string()}), kExitRuntime);
}
