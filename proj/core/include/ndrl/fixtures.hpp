#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ndrl/calibration.hpp"
#include "ndrl/schedule.hpp"
#include "ndrl/weather.hpp"

namespace ndrl {

/// One field treatment: its schedule and the measured yield.
struct Treatment {
  std::string name;
  YearProfile profile = YearProfile::Dry2023;
  Schedule schedule;
  double yield = 0.0;
};

/// The eight 2023/2024 field treatments (four per year).
const std::vector<Treatment>& field_treatments();
const Treatment& find_treatment(const std::string& name);

/// Long CSV: `treatment,year,event,date,irrigation_mm,nitrogen_kgha,yield_kgha`.
void save_treatments_csv(const std::filesystem::path& path, std::span<const Treatment> treatments);
std::vector<Treatment> load_treatments_csv(const std::filesystem::path& path);

std::vector<CalibrationObservation> to_observations(std::span<const Treatment> treatments);

/// Generated weather for both profiles, keyed by YY.
WeatherByYear profile_weather(std::uint64_t weather_seed);

inline constexpr std::uint64_t kDefaultWeatherSeed = 7;

/// Deterministic toy MDP for checking parent Q-learning: two states, four
/// actions, a fixed reward and successor per (state, action).
struct ToyMdp {
  std::size_t states = 2;
  std::size_t actions = 4;
  double gamma = 0.9;
  std::vector<std::vector<double>> reward;        // [state][action]
  std::vector<std::vector<std::size_t>> next;     // [state][action]

  static ToyMdp shipped();
  void save(const std::filesystem::path& path) const;
  static ToyMdp load(const std::filesystem::path& path);
};

}  // namespace ndrl
