#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ndrl/calibration.hpp"
#include "ndrl/error.hpp"
#include "ndrl/fixtures.hpp"
#include "ndrl/metrics.hpp"

namespace fs = std::filesystem;
using namespace ndrl;

namespace {

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ndrl_tests";
  fs::create_directories(dir);
  return dir / name;
}

const WeatherByYear& weather() {
  static const WeatherByYear w = profile_weather(kDefaultWeatherSeed);
  return w;
}

}  // namespace

TEST(Fixtures, EightTreatmentsWithFieldTotals) {
  const auto& t = field_treatments();
  ASSERT_EQ(t.size(), 8u);
  const auto& tr0 = find_treatment("Tr0_23");
  EXPECT_DOUBLE_EQ(tr0.schedule.total_irrigation(), 537.0);
  EXPECT_DOUBLE_EQ(tr0.schedule.total_nitrogen(), 250.0);
  EXPECT_DOUBLE_EQ(tr0.yield, 6110.0);
  EXPECT_DOUBLE_EQ(find_treatment("Tr1_23").schedule.total_irrigation(), 484.0);
  EXPECT_DOUBLE_EQ(find_treatment("Tr2_23").schedule.total_irrigation(), 454.0);
  EXPECT_DOUBLE_EQ(find_treatment("Tr0_24").yield, 7414.0);
  EXPECT_DOUBLE_EQ(find_treatment("Tr0_24").schedule.total_nitrogen(), 250.0);
  for (const auto& tr : t) EXPECT_NO_THROW(tr.schedule.validate());
  EXPECT_THROW(find_treatment("Tr9_99"), std::invalid_argument);
}

TEST(Fixtures, ShippedTreatmentsFileMatchesBuiltInTable) {
  const auto loaded = load_treatments_csv(fs::path(NDRL_DATA_DIR) / "field_treatments.csv");
  const auto& builtin = field_treatments();
  ASSERT_EQ(loaded.size(), builtin.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded[i].name, builtin[i].name);
    EXPECT_EQ(loaded[i].schedule, builtin[i].schedule);
    EXPECT_EQ(loaded[i].yield, builtin[i].yield);
  }
}

TEST(Fixtures, TreatmentsCsvRejectsIncompleteTreatments) {
  const auto p = temp_file("treat_bad.csv");
  std::ofstream(p) << "treatment,year,event,date,irrigation_mm,nitrogen_kgha,yield_kgha\n"
                   << "Tr0_23,2023,1,23110,45,0,6110\n";
  EXPECT_THROW(load_treatments_csv(p), DataError);
  EXPECT_THROW(load_treatments_csv(temp_file("no_such_treatments.csv")), DataError);
}

TEST(Fixtures, ToyMdpRoundTrips) {
  const ToyMdp shipped = ToyMdp::shipped();
  const ToyMdp loaded = ToyMdp::load(fs::path(NDRL_DATA_DIR) / "toy_mdp.txt");
  EXPECT_EQ(loaded.states, shipped.states);
  EXPECT_EQ(loaded.actions, shipped.actions);
  EXPECT_EQ(loaded.gamma, shipped.gamma);
  EXPECT_EQ(loaded.reward, shipped.reward);
  EXPECT_EQ(loaded.next, shipped.next);
}

TEST(Calibrate, PerfectMemberIsReturnedWithZeroError) {
  ParamGrid grid = ParamGrid::default_grid();
  grid.yield_potential = {7000, 8000};
  grid.water_capacity = {100, 140};
  grid.water_sensitivity = {1.0, 2.0};
  grid.nitrogen_sensitivity = {0.5};
  const SoilParams truth = grid.at(5);

  std::vector<CalibrationObservation> obs;
  for (const auto& t : field_treatments()) {
    const int year = t.schedule.events.front().date / 1000;
    obs.push_back({t.name, t.schedule, run_season(t.schedule, weather().at(year), truth).yield});
  }
  const CalibrationResult r = calibrate(grid, obs, weather());
  EXPECT_EQ(r.grid_index, 5u);
  EXPECT_EQ(r.params, truth);
  EXPECT_DOUBLE_EQ(r.nrmse, 0.0);
}

TEST(Calibrate, SinglePointGridIsReturnedRegardlessOfFit) {
  ParamGrid grid;
  grid.base = SoilParams{};
  grid.yield_potential = {1000.0};
  grid.water_capacity = {150.0};
  grid.water_sensitivity = {1.0};
  grid.nitrogen_sensitivity = {1.0};
  const auto obs = to_observations(field_treatments());
  const CalibrationResult r = calibrate(grid, obs, weather());
  EXPECT_EQ(r.grid_index, 0u);
  EXPECT_EQ(r.params.yield_potential, 1000.0);
  EXPECT_GT(r.nrmse, 50.0);
}

TEST(Calibrate, TiesKeepTheFirstGridPoint) {
  ParamGrid grid;
  grid.base = SoilParams{};
  grid.yield_potential = {7000.0, 7000.0};
  grid.water_capacity = {150.0};
  grid.water_sensitivity = {1.0};
  grid.nitrogen_sensitivity = {1.0};
  EXPECT_EQ(calibrate(grid, to_observations(field_treatments()), weather()).grid_index, 0u);
}

TEST(Calibrate, RejectsDegenerateInputs) {
  ParamGrid empty;
  const auto obs = to_observations(field_treatments());
  EXPECT_THROW(calibrate(empty, obs, weather()), std::invalid_argument);
  const std::vector<CalibrationObservation> one(obs.begin(), obs.begin() + 1);
  EXPECT_THROW(calibrate(ParamGrid::default_grid(), one, weather()), std::invalid_argument);
  WeatherByYear only_dry{{23, weather().at(23)}};
  EXPECT_THROW(calibrate(ParamGrid::default_grid(), obs, only_dry), DataError);
}

TEST(Calibrate, ShippedGridFitsFieldDataAndSelectsTheDefaults) {
  const ParamGrid grid = ParamGrid::default_grid();
  EXPECT_LE(grid.size(), 2000u);
  const auto obs = to_observations(field_treatments());
  const CalibrationResult r = calibrate(grid, obs, weather());
  EXPECT_LE(r.nrmse, 15.0);
  EXPECT_EQ(r.params, default_soil_params());
  EXPECT_GT(r.simulated[0], r.simulated[3]);  // Tr0_23 above Tr3_23
  EXPECT_NEAR(nrmse(r.observed, r.simulated), r.nrmse, 1e-12);
}

TEST(Calibrate, IsDeterministic) {
  const auto obs = to_observations(field_treatments());
  const auto a = calibrate(ParamGrid::default_grid(), obs, weather());
  const auto b = calibrate(ParamGrid::default_grid(), obs, weather());
  EXPECT_EQ(a.grid_index, b.grid_index);
  EXPECT_EQ(a.simulated, b.simulated);
}

TEST(ParamGrid, IndexOrderPutsNitrogenSensitivityFastest) {
  const ParamGrid g = ParamGrid::default_grid();
  EXPECT_EQ(g.at(0).nitrogen_sensitivity, g.nitrogen_sensitivity[0]);
  EXPECT_EQ(g.at(1).nitrogen_sensitivity, g.nitrogen_sensitivity[1]);
  EXPECT_EQ(g.at(1).yield_potential, g.yield_potential[0]);
  EXPECT_EQ(g.at(g.size() - 1).yield_potential, g.yield_potential.back());
  EXPECT_THROW(g.at(g.size()), std::out_of_range);
}

TEST(ParamGrid, FileRoundTripAndErrors) {
  const auto p = temp_file("grid.txt");
  ParamGrid::default_grid().save(p);
  const ParamGrid back = ParamGrid::load(p);
  const ParamGrid orig = ParamGrid::default_grid();
  EXPECT_EQ(back.yield_potential, orig.yield_potential);
  EXPECT_EQ(back.water_capacity, orig.water_capacity);
  EXPECT_EQ(back.water_sensitivity, orig.water_sensitivity);
  EXPECT_EQ(back.nitrogen_sensitivity, orig.nitrogen_sensitivity);

  std::ofstream(p) << "# nothing here\n";
  EXPECT_THROW(ParamGrid::load(p), DataError);
  std::ofstream(p) << "yield_potential =\n";
  EXPECT_THROW(ParamGrid::load(p), DataError);
  std::ofstream(p) << "colour = 1, 2\n";
  EXPECT_THROW(ParamGrid::load(p), DataError);
  std::ofstream(p) << "water_capacity = 100, lots\n";
  EXPECT_THROW(ParamGrid::load(p), DataError);
}

TEST(SoilParamsFile, RoundTripsExactly) {
  const auto p = temp_file("soil.txt");
  SoilParams params = default_soil_params();
  params.n_demand.flowering = 2.345678901234567;
  save_soil_params(p, params);
  EXPECT_EQ(load_soil_params(p), params);
  std::ofstream(p) << "water_capacity = 10\ninit_water = 20\n";
  EXPECT_THROW(load_soil_params(p), DataError);
  std::ofstream(p) << "wilting_point = 10\n";
  EXPECT_THROW(load_soil_params(p), DataError);
}
