#include "ndrl/crop_env.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ndrl {

double StageValues::at(GrowthStage stage) const {
  switch (stage) {
    case GrowthStage::Seedling:
      return seedling;
    case GrowthStage::Flowering:
      return flowering;
    case GrowthStage::Boll:
      return boll;
  }
  return boll;
}

GrowthStage stage_at(int season_day, int season_length) {
  if (season_length <= 0) return GrowthStage::Seedling;
  const double f = static_cast<double>(season_day) / static_cast<double>(season_length);
  if (f < 0.35) return GrowthStage::Seedling;
  if (f < 0.65) return GrowthStage::Flowering;
  return GrowthStage::Boll;
}

void SoilParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("soil params: ") + what);
  };
  require(water_capacity > 0.0, "water_capacity must be positive");
  require(init_water >= 0.0 && init_water <= water_capacity, "init_water must lie in [0, water_capacity]");
  require(init_n >= 0.0, "init_n must be non-negative");
  for (double v : {n_demand.seedling, n_demand.flowering, n_demand.boll, water_demand_factor.seedling,
                   water_demand_factor.flowering, water_demand_factor.boll}) {
    require(v >= 0.0, "demands must be non-negative");
  }
  require(yield_potential > 0.0, "yield_potential must be positive");
  require(water_sensitivity >= 0.0 && nitrogen_sensitivity >= 0.0, "sensitivities must be non-negative");
  require(water_extraction > 0.0 && water_extraction <= 1.0, "water_extraction must lie in (0, 1]");
  require(n_extraction > 0.0 && n_extraction <= 1.0, "n_extraction must lie in (0, 1]");
  require(n_mineralization >= 0.0, "n_mineralization must be non-negative");
  require(lai_init >= 0.0 && lai_max > 0.0, "lai bounds");
  require(lai_growth_rate >= 0.0 && lai_senescence >= 0.0 && lai_senescence < 1.0, "lai rates");
  require(radiation_use >= 0.0 && light_extinction >= 0.0, "radiation parameters");
}

CropState initial_state(const SoilParams& params, int year_code, int start_doy, int season_length) {
  CropState s;
  s.day = year_code * 1000 + start_doy;
  s.season_length = season_length;
  s.soil_water = params.init_water;
  s.soil_n = params.init_n;
  s.lai = params.lai_init;
  return s;
}

CropState step_day(const CropState& state, const WeatherDay& weather, double irrigation, double nitrogen,
                   const SoilParams& params) {
  CropState s = state;
  const GrowthStage stage = stage_at(state.season_day, state.season_length);

  const double water_in = s.soil_water + weather.rain + irrigation;
  const double water_demand = weather.et0 * params.water_demand_factor.at(stage);
  const double water_supply = params.water_extraction * water_in;
  const double et = std::min(water_demand, water_supply);
  const double after_et = water_in - et;
  const double overflow = std::max(0.0, after_et - params.water_capacity);
  s.soil_water = after_et - overflow;
  s.actual_et = et;
  s.overflow = overflow;
  s.wsf_raw = water_demand > 0.0 ? 1.0 - std::min(1.0, water_supply / water_demand) : 0.0;

  const double n_in = s.soil_n + nitrogen + params.n_mineralization;
  const double n_demand = params.n_demand.at(stage);
  const double n_supply = params.n_extraction * n_in;
  s.soil_n = n_in - std::min(n_demand, n_supply);
  s.nsf_raw = n_demand > 0.0 ? 1.0 - std::min(1.0, n_supply / n_demand) : 0.0;

  const double growth = (1.0 - s.wsf_raw) * (1.0 - s.nsf_raw);
  if (stage == GrowthStage::Boll) {
    s.lai -= params.lai_senescence * s.lai;
  } else {
    s.lai += params.lai_growth_rate * s.lai * (1.0 - s.lai / params.lai_max) * growth;
  }
  s.lai = std::max(0.0, s.lai);
  const double interception = 1.0 - std::exp(-params.light_extinction * s.lai);
  s.biomass += params.radiation_use * weather.srad * interception * growth;

  s.cum_irrigation += irrigation;
  s.cum_nitrogen += nitrogen;
  s.wsf_sum += s.wsf_raw;
  s.nsf_sum += s.nsf_raw;
  s.day = (state.day / 1000) * 1000 + weather.doy;
  s.season_day = state.season_day + 1;
  return s;
}

double season_yield(const CropState& state, const SoilParams& params) {
  if (state.season_day == 0) return params.yield_potential;
  const double days = static_cast<double>(state.season_day);
  const double mean_wsf = std::clamp(state.wsf_sum / days, 0.0, 1.0);
  const double mean_nsf = std::clamp(state.nsf_sum / days, 0.0, 1.0);
  return params.yield_potential * std::pow(1.0 - mean_wsf, params.water_sensitivity) *
         std::pow(1.0 - mean_nsf, params.nitrogen_sensitivity);
}

CompletionPolicy CompletionPolicy::per_event_average(double i_total, double n_total) {
  const Amounts avg{i_total / static_cast<double>(kEventCount), n_total / static_cast<double>(kEventCount)};
  return CompletionPolicy([avg](std::size_t) { return avg; });
}

CompletionPolicy CompletionPolicy::from_schedule(const Schedule& schedule) {
  return CompletionPolicy([schedule](std::size_t event_index) {
    const auto& e = schedule.events.at(event_index);
    return Amounts{e.irrigation, e.nitrogen};
  });
}

CropEnv::CropEnv(std::vector<WeatherDay> weather, std::array<int, kEventCount> event_days, int year_code,
                 SoilParams params)
    : weather_(std::move(weather)), event_days_(event_days), year_code_(year_code), params_(params) {
  if (weather_.empty()) throw std::invalid_argument("crop env: no weather data");
  params_.validate();
  for (std::size_t i = 0; i < kEventCount; ++i) {
    if (event_days_[i] < 0 || event_days_[i] >= static_cast<int>(weather_.size())) {
      throw std::invalid_argument("crop env: event " + std::to_string(i + 1) + " outside the weather record");
    }
    if (i > 0 && event_days_[i] <= event_days_[i - 1]) {
      throw std::invalid_argument("crop env: event days must strictly increase");
    }
  }
  reset();
}

CropEnv CropEnv::for_profile(YearProfile profile, std::uint64_t weather_seed, SoilParams params) {
  const SeasonCalendar& cal = calendar_for(profile);
  std::array<int, kEventCount> days{};
  for (std::size_t i = 0; i < kEventCount; ++i) days[i] = cal.event_doys[i] - cal.start_doy;
  return CropEnv(generate_weather(weather_seed, profile), days, cal.year_code(), params);
}

namespace {

std::array<int, kEventCount> schedule_days(const Schedule& schedule, const std::vector<WeatherDay>& weather) {
  if (weather.empty()) throw std::invalid_argument("no weather data");
  std::array<int, kEventCount> days{};
  const int year = schedule.events.front().date / 1000;
  for (std::size_t i = 0; i < kEventCount; ++i) {
    const int date = schedule.events[i].date;
    const int offset = date % 1000 - weather.front().doy;
    if (date / 1000 != year || offset < 0 || offset >= static_cast<int>(weather.size())) {
      throw std::invalid_argument("schedule date " + std::to_string(date) + " outside weather range");
    }
    days[i] = offset;
  }
  return days;
}

}  // namespace

CropEnv CropEnv::for_schedule(const Schedule& schedule, std::vector<WeatherDay> weather, SoilParams params) {
  schedule.validate();
  const auto days = schedule_days(schedule, weather);
  return CropEnv(std::move(weather), days, schedule.events.front().date / 1000, params);
}

void CropEnv::reset() {
  state_ = initial_state(params_, year_code_, weather_.front().doy, static_cast<int>(weather_.size()));
  cursor_ = 0;
  next_event_ = 0;
}

int CropEnv::event_date(std::size_t event_index) const {
  return year_code_ * 1000 + weather_.front().doy + event_days_.at(event_index);
}

void CropEnv::step(double irrigation, double nitrogen) {
  state_ = step_day(state_, weather_[cursor_], irrigation, nitrogen, params_);
  ++cursor_;
}

void CropEnv::advance_to_next_event() {
  if (events_done()) throw std::logic_error("crop env: no events left");
  const auto target = static_cast<std::size_t>(event_days_[next_event_]);
  while (cursor_ < target) step(0.0, 0.0);
}

void CropEnv::apply_event(Amounts amounts) {
  advance_to_next_event();
  step(amounts.irrigation, amounts.nitrogen);
  ++next_event_;
}

double CropEnv::finish() {
  if (!events_done()) throw std::logic_error("crop env: finish() before the last event");
  while (cursor_ < weather_.size()) step(0.0, 0.0);
  return season_yield(state_, params_);
}

void CropEnv::restore(const EnvSnapshot& snapshot) {
  state_ = snapshot.state;
  cursor_ = snapshot.cursor;
  next_event_ = snapshot.next_event;
}

double CropEnv::rollout_yield(const EnvSnapshot& from, std::span<const Amounts> next_amounts,
                              const CompletionPolicy& completion) const {
  CropState s = from.state;
  std::size_t event = from.next_event;
  std::size_t given = 0;
  for (std::size_t day = from.cursor; day < weather_.size(); ++day) {
    double irrigation = 0.0;
    double nitrogen = 0.0;
    if (event < kEventCount && day == static_cast<std::size_t>(event_days_[event])) {
      const Amounts a = given < next_amounts.size() ? next_amounts[given++] : completion(event);
      irrigation = a.irrigation;
      nitrogen = a.nitrogen;
      ++event;
    }
    s = step_day(s, weather_[day], irrigation, nitrogen, params_);
  }
  return season_yield(s, params_);
}

double CropEnv::predict_yield(const EnvSnapshot& from, const ParentAction& macro,
                              const CompletionPolicy& completion) const {
  if (from.next_event + 2 > kEventCount) {
    throw std::invalid_argument("predict_yield: snapshot is past the last macro-cycle");
  }
  const std::array<Amounts, 2> amounts{macro.first(), macro.second()};
  return rollout_yield(from, amounts, completion);
}

std::size_t CropEnv::state_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (double v : {state_.soil_water, state_.soil_n, state_.lai, state_.wsf_raw, state_.nsf_raw, state_.biomass,
                   state_.cum_irrigation, state_.cum_nitrogen, state_.wsf_sum, state_.nsf_sum, state_.actual_et,
                   state_.overflow}) {
    mix(std::bit_cast<std::uint64_t>(v));
  }
  mix(static_cast<std::uint64_t>(state_.day));
  mix(static_cast<std::uint64_t>(state_.season_day));
  mix(cursor_);
  mix(next_event_);
  return static_cast<std::size_t>(h);
}

SeasonResult run_season(const Schedule& schedule, const std::vector<WeatherDay>& weather, const SoilParams& params,
                        bool keep_trace) {
  schedule.validate();
  params.validate();
  const auto days = schedule_days(schedule, weather);

  SeasonResult result;
  CropState s = initial_state(params, schedule.events.front().date / 1000, weather.front().doy,
                              static_cast<int>(weather.size()));
  std::size_t event = 0;
  if (keep_trace) result.daily_trace.reserve(weather.size());
  for (std::size_t day = 0; day < weather.size(); ++day) {
    double irrigation = 0.0;
    double nitrogen = 0.0;
    if (event < kEventCount && static_cast<int>(day) == days[event]) {
      const auto& e = schedule.events[event];
      result.event_log[event] = {e.date, s.wsf_raw, s.nsf_raw, s.lai};
      irrigation = e.irrigation;
      nitrogen = e.nitrogen;
      ++event;
    }
    s = step_day(s, weather[day], irrigation, nitrogen, params);
    if (keep_trace) result.daily_trace.push_back(s);
  }
  result.yield = season_yield(s, params);
  result.total_irrigation = s.cum_irrigation;
  result.total_nitrogen = s.cum_nitrogen;
  return result;
}

}  // namespace ndrl
