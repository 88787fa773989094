#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ndrl/schedule.hpp"
#include "ndrl/spaces.hpp"
#include "ndrl/weather.hpp"

namespace ndrl {

enum class GrowthStage { Seedling, Flowering, Boll };

/// One value per growth stage.
struct StageValues {
  double seedling = 0.0;
  double flowering = 0.0;
  double boll = 0.0;

  double at(GrowthStage stage) const;

  bool operator==(const StageValues&) const = default;
};

/// Growth stage by calendar fraction of the season (thirds-ish split).
GrowthStage stage_at(int season_day, int season_length);

/// Calibration knobs of the surrogate crop model.
struct SoilParams {
  double water_capacity = 150.0;  // plant-available water at field capacity, mm
  double init_water = 100.0;      // mm
  double init_n = 60.0;           // kg/ha
  StageValues n_demand{0.6, 2.2, 1.4};             // kg/ha/day
  StageValues water_demand_factor{0.45, 1.05, 0.85};  // crop coefficient
  double yield_potential = 7500.0;  // kg/ha
  double water_sensitivity = 1.0;   // exponent p on (1 - mean WSF)
  double nitrogen_sensitivity = 1.0;  // exponent q on (1 - mean NSF)
  double water_extraction = 0.12;   // fraction of soil water the roots can draw per day
  double n_extraction = 0.10;       // fraction of soil N the roots can take up per day
  double n_mineralization = 0.3;    // kg/ha/day
  double lai_init = 0.1;
  double lai_growth_rate = 0.09;    // 1/day
  double lai_max = 5.5;
  double lai_senescence = 0.012;    // 1/day in the boll stage
  double radiation_use = 2.2;       // kg/ha of biomass per MJ/m2 intercepted
  double light_extinction = 0.6;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;

  bool operator==(const SoilParams&) const = default;
};

struct CropState {
  int day = 0;             // YYDDD of the last simulated day (planting day before any step)
  int season_day = 0;      // days simulated so far
  int season_length = 0;
  double soil_water = 0.0;  // mm
  double soil_n = 0.0;      // kg/ha
  double lai = 0.0;
  double wsf_raw = 0.0;  // [0,1], 0 = no stress
  double nsf_raw = 0.0;  // [0,1]
  double biomass = 0.0;  // kg/ha
  double cum_irrigation = 0.0;
  double cum_nitrogen = 0.0;
  double wsf_sum = 0.0;  // seasonal stress integrals
  double nsf_sum = 0.0;
  double actual_et = 0.0;  // last day's fluxes, mm
  double overflow = 0.0;

  bool operator==(const CropState&) const = default;
};

CropState initial_state(const SoilParams& params, int year_code, int start_doy, int season_length);

/// Advance one day. Water enters from rain and irrigation, leaves through
/// evapotranspiration and overflow above capacity; stress is the unmet
/// fraction of the day's demand.
CropState step_day(const CropState& state, const WeatherDay& weather, double irrigation,
                   double nitrogen, const SoilParams& params);

/// yield_potential * (1 - mean WSF)^p * (1 - mean NSF)^q over the simulated days.
double season_yield(const CropState& state, const SoilParams& params);

struct EventObservation {
  int date = 0;
  double wsf = 0.0;
  double nsf = 0.0;
  double laid = 0.0;

  bool operator==(const EventObservation&) const = default;
};

struct SeasonResult {
  double yield = 0.0;  // HWAM, kg/ha
  double total_irrigation = 0.0;
  double total_nitrogen = 0.0;
  std::array<EventObservation, kEventCount> event_log{};
  std::vector<CropState> daily_trace;  // empty unless requested

  bool operator==(const SeasonResult&) const = default;
};

/// Amounts for events not covered by a macro action during a lookahead.
class CompletionPolicy {
 public:
  using Fn = std::function<Amounts(std::size_t event_index)>;

  explicit CompletionPolicy(Fn fn) : fn_(std::move(fn)) {}

  /// Every remaining event receives total / 12.
  static CompletionPolicy per_event_average(double i_total, double n_total);
  /// Remaining events follow an existing schedule.
  static CompletionPolicy from_schedule(const Schedule& schedule);

  Amounts operator()(std::size_t event_index) const { return fn_(event_index); }

 private:
  Fn fn_;
};

struct EnvSnapshot {
  CropState state;
  std::size_t cursor = 0;      // next season day to simulate
  std::size_t next_event = 0;  // next event index to apply

  bool operator==(const EnvSnapshot&) const = default;
};

/// Surrogate season with twelve decision dates.
///
/// The environment advances day by day. Callers move it to the next event
/// date, read the observables, then apply that event's amounts, which
/// simulates the event day itself. After the last event finish() runs out
/// the season and returns the yield.
class CropEnv {
 public:
  /// event_days are season-day offsets (0 = first weather record).
  CropEnv(std::vector<WeatherDay> weather, std::array<int, kEventCount> event_days, int year_code,
          SoilParams params);

  /// Environment for a generated profile season.
  static CropEnv for_profile(YearProfile profile, std::uint64_t weather_seed, SoilParams params);
  /// Environment whose event dates come from a schedule's YYDDD codes.
  static CropEnv for_schedule(const Schedule& schedule, std::vector<WeatherDay> weather,
                              SoilParams params);

  void reset();

  const CropState& state() const { return state_; }
  const SoilParams& params() const { return params_; }
  std::span<const WeatherDay> weather() const { return weather_; }
  std::size_t next_event() const { return next_event_; }
  std::size_t cursor() const { return cursor_; }
  bool events_done() const { return next_event_ >= kEventCount; }
  int event_date(std::size_t event_index) const;
  int year_code() const { return year_code_; }
  int season_start_doy() const { return weather_.front().doy; }
  int season_length() const { return static_cast<int>(weather_.size()); }

  /// Simulate zero-input days up to (not including) the next event date.
  void advance_to_next_event();
  /// Simulate the next event's date with the given amounts. Advances to the
  /// event date first if needed.
  void apply_event(Amounts amounts);
  /// Simulate all remaining days with zero input (events must be done) and
  /// return the season yield.
  double finish();

  EnvSnapshot snapshot() const { return {state_, cursor_, next_event_}; }
  void restore(const EnvSnapshot& snapshot);

  /// Final yield of a copy rolled forward from `from`: the listed amounts on
  /// the next events in order, the completion policy on the rest.
  double rollout_yield(const EnvSnapshot& from, std::span<const Amounts> next_amounts,
                       const CompletionPolicy& completion) const;

  /// rollout_yield with a macro action covering the next two event dates.
  /// Throws std::invalid_argument if fewer than two events remain.
  double predict_yield(const EnvSnapshot& from, const ParentAction& macro,
                       const CompletionPolicy& completion) const;

  /// Hash of the live state, cursor and event position.
  std::size_t state_hash() const;

 private:
  void step(double irrigation, double nitrogen);

  std::vector<WeatherDay> weather_;
  std::array<int, kEventCount> event_days_{};
  int year_code_ = 0;
  SoilParams params_;
  CropState state_;
  std::size_t cursor_ = 0;
  std::size_t next_event_ = 0;
};

/// Run a schedule for a whole season. Throws std::invalid_argument if any
/// schedule date falls outside the weather record.
SeasonResult run_season(const Schedule& schedule, const std::vector<WeatherDay>& weather,
                        const SoilParams& params, bool keep_trace = false);

}  // namespace ndrl
