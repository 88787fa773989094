#include "ndrl/calibration.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "ndrl/config.hpp"
#include "ndrl/error.hpp"
#include "ndrl/metrics.hpp"

namespace ndrl {

namespace {

using Field = std::pair<const char*, double SoilParams::*>;

const std::vector<Field>& scalar_fields() {
  static const std::vector<Field> fields{
      {"water_capacity", &SoilParams::water_capacity},
      {"init_water", &SoilParams::init_water},
      {"init_n", &SoilParams::init_n},
      {"yield_potential", &SoilParams::yield_potential},
      {"water_sensitivity", &SoilParams::water_sensitivity},
      {"nitrogen_sensitivity", &SoilParams::nitrogen_sensitivity},
      {"water_extraction", &SoilParams::water_extraction},
      {"n_extraction", &SoilParams::n_extraction},
      {"n_mineralization", &SoilParams::n_mineralization},
      {"lai_init", &SoilParams::lai_init},
      {"lai_growth_rate", &SoilParams::lai_growth_rate},
      {"lai_max", &SoilParams::lai_max},
      {"lai_senescence", &SoilParams::lai_senescence},
      {"radiation_use", &SoilParams::radiation_use},
      {"light_extinction", &SoilParams::light_extinction},
  };
  return fields;
}

using StageField = std::pair<const char*, StageValues SoilParams::*>;

const std::vector<StageField>& stage_fields() {
  static const std::vector<StageField> fields{
      {"n_demand", &SoilParams::n_demand},
      {"water_demand_factor", &SoilParams::water_demand_factor},
  };
  return fields;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw DataError("bad number for '" + key + "': '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    values.push_back(to_double(key, item.substr(b, e - b + 1)));
  }
  return values;
}

std::string join(const std::vector<double>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << format_number(values[i]);
  return out.str();
}

}  // namespace

std::size_t ParamGrid::size() const {
  return yield_potential.size() * water_capacity.size() * water_sensitivity.size() * nitrogen_sensitivity.size();
}

SoilParams ParamGrid::at(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("param grid index out of range");
  SoilParams p = base;
  const std::size_t nq = nitrogen_sensitivity.size();
  const std::size_t np = water_sensitivity.size();
  const std::size_t nc = water_capacity.size();
  p.nitrogen_sensitivity = nitrogen_sensitivity[index % nq];
  index /= nq;
  p.water_sensitivity = water_sensitivity[index % np];
  index /= np;
  p.water_capacity = water_capacity[index % nc];
  index /= nc;
  p.yield_potential = yield_potential[index];
  p.init_water = std::min(p.init_water, p.water_capacity);
  return p;
}

ParamGrid ParamGrid::default_grid() {
  ParamGrid g;
  g.base = SoilParams{};
  for (double y = 6000.0; y <= 9750.0 + 1e-9; y += 250.0) g.yield_potential.push_back(y);
  g.water_capacity = {80.0, 100.0, 120.0, 140.0, 160.0};
  g.water_sensitivity = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  g.nitrogen_sensitivity = {0.1, 0.25, 0.5, 1.0};
  return g;
}

ParamGrid ParamGrid::load(const std::filesystem::path& path) {
  const KeyValues kv = read_key_values(path);
  ParamGrid g;
  g.base = SoilParams{};
  bool any_axis = false;
  auto axis = [&](const char* key, std::vector<double>& out, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      out = {fallback};
      return;
    }
    any_axis = true;
    out = parse_list(key, it->second);
    if (out.empty()) throw DataError(path.string() + ": empty value list for '" + key + "'");
  };
  for (const auto& [key, value] : kv) {
    if (key != "yield_potential" && key != "water_capacity" && key != "water_sensitivity" &&
        key != "nitrogen_sensitivity") {
      throw DataError(path.string() + ": unknown grid key '" + key + "'");
    }
  }
  axis("yield_potential", g.yield_potential, g.base.yield_potential);
  axis("water_capacity", g.water_capacity, g.base.water_capacity);
  axis("water_sensitivity", g.water_sensitivity, g.base.water_sensitivity);
  axis("nitrogen_sensitivity", g.nitrogen_sensitivity, g.base.nitrogen_sensitivity);
  if (!any_axis) throw DataError(path.string() + ": empty calibration grid");
  return g;
}

void ParamGrid::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write grid file");
  out << "# calibration grid: comma-separated values per axis\n";
  out << "yield_potential = " << join(yield_potential) << '\n';
  out << "water_capacity = " << join(water_capacity) << '\n';
  out << "water_sensitivity = " << join(water_sensitivity) << '\n';
  out << "nitrogen_sensitivity = " << join(nitrogen_sensitivity) << '\n';
}

CalibrationResult calibrate(const ParamGrid& grid, std::span<const CalibrationObservation> observations,
                            const WeatherByYear& weather) {
  if (grid.size() == 0) throw std::invalid_argument("calibrate: empty parameter grid");
  if (observations.size() < 2) throw std::invalid_argument("calibrate: need at least two observations");

  std::vector<const std::vector<WeatherDay>*> weather_of;
  CalibrationResult best;
  for (const auto& obs : observations) {
    const int year = obs.schedule.events.front().date / 1000;
    auto it = weather.find(year);
    if (it == weather.end() || it->second.empty()) {
      throw DataError("calibrate: no weather data for observation '" + obs.label + "' (year " +
                      std::to_string(year) + ")");
    }
    weather_of.push_back(&it->second);
    best.observed.push_back(obs.observed_yield);
  }

  best.nrmse = std::numeric_limits<double>::infinity();
  std::vector<double> simulated(observations.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const SoilParams params = grid.at(g);
    for (std::size_t i = 0; i < observations.size(); ++i) {
      simulated[i] = run_season(observations[i].schedule, *weather_of[i], params).yield;
    }
    const double score = nrmse(best.observed, simulated);
    if (score < best.nrmse) {
      best.nrmse = score;
      best.params = params;
      best.grid_index = g;
      best.simulated = simulated;
    }
  }
  return best;
}

SoilParams default_soil_params() {
  // Best point of ParamGrid::default_grid() against the shipped treatments
  // and profile weather (weather seed 7).
  SoilParams p;
  p.yield_potential = 7000.0;
  p.water_capacity = 120.0;
  p.init_water = 100.0;
  p.water_sensitivity = 5.0;
  p.nitrogen_sensitivity = 0.1;
  return p;
}

void save_soil_params(const std::filesystem::path& path, const SoilParams& params) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write params file");
  out << "# surrogate crop parameters\n";
  for (const auto& [name, member] : scalar_fields()) out << name << " = " << format_number(params.*member) << '\n';
  for (const auto& [name, member] : stage_fields()) {
    const StageValues& v = params.*member;
    out << name << "_seedling = " << format_number(v.seedling) << '\n';
    out << name << "_flowering = " << format_number(v.flowering) << '\n';
    out << name << "_boll = " << format_number(v.boll) << '\n';
  }
}

SoilParams load_soil_params(const std::filesystem::path& path) {
  const KeyValues kv = read_key_values(path);
  SoilParams p;
  for (const auto& [key, text] : kv) {
    bool known = false;
    for (const auto& [name, member] : scalar_fields()) {
      if (key == name) {
        p.*member = to_double(key, text);
        known = true;
      }
    }
    for (const auto& [name, member] : stage_fields()) {
      const std::string prefix = name;
      if (key == prefix + "_seedling") (p.*member).seedling = to_double(key, text), known = true;
      if (key == prefix + "_flowering") (p.*member).flowering = to_double(key, text), known = true;
      if (key == prefix + "_boll") (p.*member).boll = to_double(key, text), known = true;
    }
    if (!known) throw DataError(path.string() + ": unknown soil parameter '" + key + "'");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return p;
}

}  // namespace ndrl
