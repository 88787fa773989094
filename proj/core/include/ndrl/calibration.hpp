#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ndrl/crop_env.hpp"

namespace ndrl {

struct CalibrationObservation {
  std::string label;
  Schedule schedule;
  double observed_yield = 0.0;
};

/// Exhaustive search space over the yield-relevant surrogate knobs. Every
/// other field comes from `base`. Iteration order: yield_potential slowest,
/// then water_capacity, water_sensitivity, nitrogen_sensitivity fastest.
struct ParamGrid {
  SoilParams base;
  std::vector<double> yield_potential;
  std::vector<double> water_capacity;
  std::vector<double> water_sensitivity;
  std::vector<double> nitrogen_sensitivity;

  std::size_t size() const;
  SoilParams at(std::size_t index) const;

  /// The shipped grid (under 2000 points).
  static ParamGrid default_grid();
  /// Flat `key = v1, v2, ...` file; keys are the four axis names.
  static ParamGrid load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

struct CalibrationResult {
  SoilParams params;
  std::size_t grid_index = 0;
  double nrmse = 0.0;  // percent
  std::vector<double> observed;
  std::vector<double> simulated;
};

/// Weather by two-digit year code (the YY of a schedule's YYDDD dates).
using WeatherByYear = std::map<int, std::vector<WeatherDay>>;

/// Grid point with the lowest nRMSE between simulated and observed yields.
/// Ties keep the earliest grid point. Throws std::invalid_argument on an
/// empty grid or fewer than two observations, DataError when an
/// observation's year has no weather.
CalibrationResult calibrate(const ParamGrid& grid, std::span<const CalibrationObservation> observations,
                            const WeatherByYear& weather);

/// Surrogate parameters selected by calibrate() over the shipped grid and
/// field treatments (see fixtures.hpp).
SoilParams default_soil_params();

/// Flat `key = value` text, one SoilParams field per line.
void save_soil_params(const std::filesystem::path& path, const SoilParams& params);
SoilParams load_soil_params(const std::filesystem::path& path);

}  // namespace ndrl
