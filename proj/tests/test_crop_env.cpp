#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ndrl/calibration.hpp"
#include "ndrl/crop_env.hpp"
#include "ndrl/fixtures.hpp"
#include "support/gen.hpp"

using namespace ndrl;

namespace {

const std::vector<WeatherDay>& dry_weather() {
  static const auto w = generate_weather(kDefaultWeatherSeed, YearProfile::Dry2023);
  return w;
}

Schedule uniform_schedule(double irrigation, double nitrogen) {
  return make_schedule(calendar_for(YearProfile::Dry2023), std::vector<double>(12, irrigation),
                       std::vector<double>(12, nitrogen));
}

Schedule random_schedule(prop::Gen& g, YearProfile profile = YearProfile::Dry2023) {
  std::vector<double> irr(12), n(12);
  for (int i = 0; i < 12; ++i) {
    irr[i] = g.real(0.0, 60.0);
    n[i] = g.real(0.0, 60.0);
  }
  return make_schedule(calendar_for(profile), irr, n);
}

WeatherDay day_with(double rain, double et0) {
  WeatherDay d;
  d.doy = 150;
  d.tmax = 30;
  d.tmin = 15;
  d.rain = rain;
  d.srad = 20;
  d.et0 = et0;
  return d;
}

}  // namespace

TEST(StepDay, SaturatedSoilOnZeroDemandDayHasNoWaterStress) {
  const SoilParams p = default_soil_params();
  CropState s = initial_state(p, 23, 110, 160);
  s.soil_water = p.water_capacity;
  const CropState next = step_day(s, day_with(0.0, 0.0), 0.0, 0.0, p);
  EXPECT_EQ(next.wsf_raw, 0.0);
}

TEST(StepDay, DrySoilWithDemandIsFullyStressed) {
  const SoilParams p = default_soil_params();
  CropState s = initial_state(p, 23, 110, 160);
  s.soil_water = 0.0;
  const CropState next = step_day(s, day_with(0.0, 6.0), 0.0, 0.0, p);
  EXPECT_EQ(next.wsf_raw, 1.0);
}

TEST(StepDay, IdenticalInputsGiveIdenticalStates) {
  const SoilParams p = default_soil_params();
  const CropState s = initial_state(p, 23, 110, 160);
  EXPECT_EQ(step_day(s, day_with(3, 5), 20, 10, p), step_day(s, day_with(3, 5), 20, 10, p));
}

TEST(StepDay, WaterBalanceClosesAndStressStaysBounded) {
  prop::for_all(21, 300, [](prop::Gen& g) {
    SoilParams p = default_soil_params();
    p.water_capacity = g.real(50.0, 200.0);
    p.init_water = g.real(0.0, p.water_capacity);
    CropState s = initial_state(p, 23, 110, 160);
    for (int d = 0; d < 160; ++d) {
      const double irr = g.coin() ? g.real(0.0, 80.0) : 0.0;
      const CropState next = step_day(s, day_with(g.coin() ? g.real(0, 40) : 0.0, g.real(0.0, 9.0)), irr,
                                      g.real(0.0, 30.0), p);
      ASSERT_GE(next.wsf_raw, 0.0);
      ASSERT_LE(next.wsf_raw, 1.0);
      ASSERT_GE(next.nsf_raw, 0.0);
      ASSERT_LE(next.nsf_raw, 1.0);
      ASSERT_GE(next.soil_water, 0.0);
      ASSERT_LE(next.soil_water, p.water_capacity + 1e-9);
      ASSERT_GE(next.soil_n, 0.0);
      ASSERT_GE(next.lai, 0.0);
      ASSERT_GE(next.cum_irrigation, s.cum_irrigation);
      s = next;
    }
  });
}

TEST(StepDay, DailyWaterConservation) {
  prop::for_all(22, 200, [](prop::Gen& g) {
    const SoilParams p = default_soil_params();
    CropState s = initial_state(p, 23, 110, 160);
    s.soil_water = g.real(0.0, p.water_capacity);
    const double rain = g.coin() ? g.real(0.0, 60.0) : 0.0;
    const double irr = g.real(0.0, 80.0);
    const CropState next = step_day(s, day_with(rain, g.real(0.0, 9.0)), irr, 0.0, p);
    EXPECT_NEAR(next.soil_water - s.soil_water, rain + irr - next.actual_et - next.overflow, 1e-9);
  });
}

TEST(StageAt, SplitsTheSeasonIntoThreeStages) {
  EXPECT_EQ(stage_at(0, 160), GrowthStage::Seedling);
  EXPECT_EQ(stage_at(55, 160), GrowthStage::Seedling);
  EXPECT_EQ(stage_at(57, 160), GrowthStage::Flowering);
  EXPECT_EQ(stage_at(159, 160), GrowthStage::Boll);
}

TEST(SoilParams, ValidateRejectsInconsistentValues) {
  SoilParams p;
  EXPECT_NO_THROW(p.validate());
  p.init_water = p.water_capacity + 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SoilParams{};
  p.yield_potential = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SoilParams{};
  p.n_demand.boll = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(RunSeason, ControlTreatmentLandsNearItsFieldYield) {
  const auto& t = find_treatment("Tr0_23");
  EXPECT_DOUBLE_EQ(t.schedule.total_irrigation(), 537.0);
  EXPECT_DOUBLE_EQ(t.schedule.total_nitrogen(), 250.0);
  const SeasonResult r = run_season(t.schedule, dry_weather(), default_soil_params());
  EXPECT_NEAR(r.yield, 6110.0, 0.15 * 6110.0);
}

TEST(RunSeason, ZeroScheduleYieldsLessThanControl) {
  const SoilParams p = default_soil_params();
  const double control = run_season(find_treatment("Tr0_23").schedule, dry_weather(), p).yield;
  const double zero = run_season(uniform_schedule(0, 0), dry_weather(), p).yield;
  EXPECT_LT(zero, control);
}

TEST(RunSeason, IsBitIdenticalAcrossCalls) {
  const auto& s = find_treatment("Tr2_23").schedule;
  EXPECT_EQ(run_season(s, dry_weather(), default_soil_params(), true),
            run_season(s, dry_weather(), default_soil_params(), true));
}

TEST(RunSeason, TotalsEventLogAndTrace) {
  const auto& s = find_treatment("Tr1_23").schedule;
  const SeasonResult r = run_season(s, dry_weather(), default_soil_params(), true);
  EXPECT_DOUBLE_EQ(r.total_irrigation, s.total_irrigation());
  EXPECT_DOUBLE_EQ(r.total_nitrogen, s.total_nitrogen());
  EXPECT_EQ(r.daily_trace.size(), dry_weather().size());
  for (std::size_t i = 0; i < kEventCount; ++i) {
    EXPECT_EQ(r.event_log[i].date, s.events[i].date);
    EXPECT_GE(r.event_log[i].laid, 0.0);
  }
  EXPECT_GE(r.yield, 0.0);
  EXPECT_TRUE(run_season(s, dry_weather(), default_soil_params()).daily_trace.empty());
}

TEST(RunSeason, DateOutsideWeatherIsRejected) {
  Schedule s = uniform_schedule(10, 10);
  s.events.back().date = 23400;
  EXPECT_THROW(run_season(s, dry_weather(), default_soil_params()), std::invalid_argument);
}

TEST(RunSeason, YieldNeverExceedsPotential) {
  prop::for_all(23, 60, [](prop::Gen& g) {
    const SoilParams p = default_soil_params();
    EXPECT_LE(run_season(random_schedule(g), dry_weather(), p).yield, p.yield_potential);
  });
}

TEST(RunSeason, ExtraIrrigationOnAStressedDayNeverLowersYield) {
  // Covers fully stressed days as the wsf = 1 subset of stressed ones.
  const SoilParams p = default_soil_params();
  int checked = 0;
  prop::for_all(24, 60, [&](prop::Gen& g) {
    std::vector<double> irr(12), n(12);
    for (int i = 0; i < 12; ++i) {
      irr[i] = g.coin() ? 0.0 : g.real(0.0, 30.0);
      n[i] = g.real(0.0, 40.0);
    }
    const auto& cal = calendar_for(YearProfile::Dry2023);
    const SeasonResult r = run_season(make_schedule(cal, irr, n), dry_weather(), p, true);
    // The trace entry before an event date is the state the event lands on.
    for (std::size_t e = 0; e < kEventCount; ++e) {
      const int offset = cal.event_doys[e] - cal.start_doy;
      const double wsf_before = offset > 0 ? r.daily_trace[static_cast<std::size_t>(offset - 1)].wsf_raw : 0.0;
      if (wsf_before <= 0.0) continue;
      std::vector<double> more = irr;
      more[e] += g.real(1.0, 40.0);
      EXPECT_GE(run_season(make_schedule(cal, more, n), dry_weather(), p).yield, r.yield);
      ++checked;
    }
  });
  EXPECT_GT(checked, 100);
}

TEST(RunSeason, FullyDrySoilRespondsToIrrigation) {
  SoilParams p = default_soil_params();
  p.init_water = 0.0;
  CropState s = initial_state(p, 23, 110, 160);
  const CropState stressed = step_day(s, day_with(0.0, 6.0), 0.0, 0.0, p);
  ASSERT_EQ(stressed.wsf_raw, 1.0);
  const CropState watered = step_day(s, day_with(0.0, 6.0), 30.0, 0.0, p);
  EXPECT_LT(watered.wsf_raw, stressed.wsf_raw);
  EXPECT_GE(season_yield(watered, p), season_yield(stressed, p));
}

TEST(RunSeason, MoreIrrigationEverywhereNeverLowersYield) {
  const SoilParams p = default_soil_params();
  prop::for_all(25, 80, [&](prop::Gen& g) {
    const Schedule s = random_schedule(g);
    Schedule more = s;
    more.events[static_cast<std::size_t>(g.integer(0, 11))].irrigation += g.real(0.0, 30.0);
    EXPECT_GE(run_season(more, dry_weather(), p).yield, run_season(s, dry_weather(), p).yield);
  });
}

class EnvTest : public ::testing::Test {
 protected:
  CropEnv env = CropEnv::for_profile(YearProfile::Dry2023, kDefaultWeatherSeed, default_soil_params());
  CompletionPolicy completion = CompletionPolicy::per_event_average(537.0, 250.0);
};

TEST_F(EnvTest, EventsMatchTheCalendar) {
  const auto& cal = calendar_for(YearProfile::Dry2023);
  for (std::size_t i = 0; i < kEventCount; ++i) EXPECT_EQ(env.event_date(i), cal.date_code(cal.event_doys[i]));
  EXPECT_EQ(env.season_start_doy(), cal.start_doy);
  EXPECT_EQ(env.season_length(), cal.length);
}

TEST_F(EnvTest, SteppingThroughEventsMatchesRunSeason) {
  const auto& t = find_treatment("Tr0_23");
  for (const auto& e : t.schedule.events) {
    env.advance_to_next_event();
    env.apply_event({e.irrigation, e.nitrogen});
  }
  EXPECT_TRUE(env.events_done());
  EXPECT_DOUBLE_EQ(env.finish(), run_season(t.schedule, dry_weather(), default_soil_params()).yield);
}

TEST_F(EnvTest, SnapshotRestoreReproducesTrajectory) {
  env.advance_to_next_event();
  env.apply_event({30, 10});
  const EnvSnapshot snap = env.snapshot();
  env.advance_to_next_event();
  env.apply_event({20, 20});
  const CropState uninterrupted = env.state();

  env.restore(snap);
  EXPECT_EQ(env.state(), snap.state);
  env.advance_to_next_event();
  env.apply_event({20, 20});
  EXPECT_EQ(env.state(), uninterrupted);
}

TEST_F(EnvTest, StaleSnapshotRestoresToItsOwnState) {
  const EnvSnapshot start = env.snapshot();
  for (int i = 0; i < 3; ++i) {
    env.advance_to_next_event();
    env.apply_event({40, 20});
  }
  env.restore(start);
  EXPECT_EQ(env.snapshot(), start);
}

TEST_F(EnvTest, NestedSnapshotsAreIndependent) {
  const EnvSnapshot outer = env.snapshot();
  env.advance_to_next_event();
  env.apply_event({60, 60});
  const EnvSnapshot inner = env.snapshot();
  env.advance_to_next_event();
  env.apply_event({0, 0});
  env.restore(outer);
  EXPECT_EQ(env.snapshot(), outer);
  env.restore(inner);
  EXPECT_EQ(env.snapshot(), inner);
  env.restore(outer);
  EXPECT_EQ(env.snapshot(), outer);
}

TEST_F(EnvTest, PredictYieldMatchesRunSeasonForTheSameSchedule) {
  const auto& t = find_treatment("Tr0_23");
  const auto& ev = t.schedule.events;
  const ParentAction macro{ev[0].irrigation, ev[0].nitrogen, ev[1].irrigation, ev[1].nitrogen};
  const double predicted =
      env.predict_yield(env.snapshot(), macro, CompletionPolicy::from_schedule(t.schedule));
  EXPECT_DOUBLE_EQ(predicted, run_season(t.schedule, dry_weather(), default_soil_params()).yield);
}

TEST_F(EnvTest, PredictYieldIsPureAndRepeatable) {
  env.advance_to_next_event();
  env.apply_event({10, 10});
  env.advance_to_next_event();
  const std::size_t before = env.state_hash();
  const EnvSnapshot snap = env.snapshot();
  const ParentAction macro{40, 20, 60, 0};
  const double a = env.predict_yield(snap, macro, completion);
  const double b = env.predict_yield(snap, macro, completion);
  EXPECT_EQ(a, b);
  EXPECT_EQ(env.state_hash(), before);
  EXPECT_EQ(env.snapshot(), snap);
}

TEST_F(EnvTest, MaxMacroBeatsZeroMacroFromADroughtedSnapshot) {
  for (int i = 0; i < 4; ++i) {
    env.advance_to_next_event();
    env.apply_event({0, 0});
  }
  env.advance_to_next_event();
  ASSERT_GT(env.state().wsf_raw, 0.0);
  const EnvSnapshot snap = env.snapshot();
  EXPECT_LE(env.predict_yield(snap, {0, 0, 0, 0}, completion),
            env.predict_yield(snap, {60, 60, 60, 60}, completion));
}

TEST_F(EnvTest, PredictYieldPastTheLastEventsThrows) {
  for (std::size_t i = 0; i < kEventCount - 1; ++i) {
    env.advance_to_next_event();
    env.apply_event({10, 10});
  }
  EXPECT_THROW(env.predict_yield(env.snapshot(), {0, 0, 0, 0}, completion), std::invalid_argument);
}

TEST_F(EnvTest, ResetReturnsToTheInitialState) {
  const std::size_t fresh = env.state_hash();
  env.advance_to_next_event();
  env.apply_event({30, 30});
  EXPECT_NE(env.state_hash(), fresh);
  env.reset();
  EXPECT_EQ(env.state_hash(), fresh);
  EXPECT_EQ(env.next_event(), 0u);
}
