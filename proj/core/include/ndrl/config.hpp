#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "ndrl/calibration.hpp"
#include "ndrl/child_agent.hpp"
#include "ndrl/policy.hpp"
#include "ndrl/rewards.hpp"
#include "ndrl/weather.hpp"

namespace ndrl {

/// Everything a training run depends on.
struct RunConfig {
  YearProfile year_profile = YearProfile::Dry2023;
  std::uint64_t seed = 1;
  std::uint64_t weather_seed = 7;
  std::size_t episodes = 2000;

  MixtureParams mixture;
  double lr_parent = 0.1;
  double gamma_parent = 0.95;
  DqnHyperparams dqn;
  double reward_scale = 1e4;

  Budget budget;
  RewardWeights weights;
  double parent_max = 60.0;
  double parent_step = 20.0;
  double delta = 20.0;

  SoilParams soil = default_soil_params();
  std::filesystem::path out_dir;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// Flat `key = value` lines; `#` starts a comment; surrounding quotes are
/// stripped. Throws DataError on unreadable files or lines without '='.
KeyValues read_key_values(const std::filesystem::path& path);
KeyValues parse_key_values(const std::string& text, const std::string& origin = "<string>");

/// Apply known keys to a config. Unknown keys and unparsable values throw
/// std::invalid_argument. `soil_params` names a file read with
/// load_soil_params().
void apply_key_values(RunConfig& config, const KeyValues& values);

/// Every key with its resolved value, sorted; feeds run_meta.json.
KeyValues to_key_values(const RunConfig& config);

}  // namespace ndrl
