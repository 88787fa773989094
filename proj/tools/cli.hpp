#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ndrl::cli {

enum class Subcommand { Calibrate, Train, Baseline, Evaluate, Compare, ExportFixtures };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

struct CliCommand {
  Subcommand subcommand = Subcommand::Train;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;  // from --seeds; empty when not given
  std::optional<std::size_t> episodes;
  std::optional<std::string> year_profile;
  std::optional<std::uint64_t> weather_seed;
  std::vector<std::string> overrides;  // key=value pairs from --set

  // calibrate / compare
  std::optional<std::filesystem::path> fixtures;
  std::optional<std::filesystem::path> grid;
  // evaluate
  std::optional<std::filesystem::path> schedule;
  std::optional<std::filesystem::path> soil_params;
  std::string label = "Schedule";
  // compare
  std::optional<std::filesystem::path> ndrl_log;
  std::optional<std::filesystem::path> dqn_log;
};

struct ParseResult {
  std::optional<CliCommand> command;  // empty when the process should exit now
  int exit_code = kExitOk;
  std::string output;  // help or error text
};

/// argv[0] is the program name.
ParseResult parse_args(const std::vector<std::string>& argv);

/// Parses "3", "1..5" or "1,2,7". Throws std::invalid_argument.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Runs a parsed command, reporting to stdout/stderr. Returns the exit code.
int run_command(const CliCommand& command);

/// Output directory: --out, else $NDRL_OUT/<subcommand>, else runs/<subcommand>.
std::filesystem::path resolve_out_dir(const CliCommand& command);

std::string subcommand_name(Subcommand s);

}  // namespace ndrl::cli
