#include <benchmark/benchmark.h>

#include "ndrl/calibration.hpp"
#include "ndrl/child_agent.hpp"
#include "ndrl/crop_env.hpp"
#include "ndrl/fixtures.hpp"
#include "ndrl/policy.hpp"
#include "ndrl/spaces.hpp"

using namespace ndrl;

static void BM_RunSeason(benchmark::State& state) {
  const auto weather = generate_weather(kDefaultWeatherSeed, YearProfile::Dry2023);
  const auto& schedule = find_treatment("Tr0_23").schedule;
  const SoilParams params = default_soil_params();
  for (auto _ : state) benchmark::DoNotOptimize(run_season(schedule, weather, params).yield);
}
BENCHMARK(BM_RunSeason);

// One exploring macro-cycle: a rollout per parent action from a mid-season snapshot.
static void BM_CandidateRollouts(benchmark::State& state) {
  CropEnv env = CropEnv::for_profile(YearProfile::Dry2023, kDefaultWeatherSeed, default_soil_params());
  for (int i = 0; i < 4; ++i) {
    env.advance_to_next_event();
    env.apply_event({40, 20});
  }
  env.advance_to_next_event();
  const EnvSnapshot snap = env.snapshot();
  const auto grid = parent_action_grid(60, 20);
  const auto completion = CompletionPolicy::per_event_average(537, 250);
  std::vector<double> yields(grid.size());
  for (auto _ : state) {
    for (std::size_t i = 0; i < grid.size(); ++i) yields[i] = env.predict_yield(snap, grid[i], completion);
    benchmark::DoNotOptimize(candidate_set(yields, 0.8));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_CandidateRollouts)->Unit(benchmark::kMillisecond);

static void BM_TrainBatch(benchmark::State& state) {
  Rng rng(1);
  QNetwork net = QNetwork::glorot({4, 64, 64, 25}, rng);
  const QNetwork target = net;
  std::vector<Transition> batch(32);
  for (auto& t : batch) {
    t.s = {rng.uniform(), 0, 1, rng.uniform()};
    t.s_next = {rng.uniform(), 1, 0, rng.uniform()};
    t.a = rng.index(25);
    t.r = rng.uniform();
  }
  DqnHyperparams hyper;
  for (auto _ : state) benchmark::DoNotOptimize(train_batch(net, target, batch, hyper));
}
BENCHMARK(BM_TrainBatch)->Unit(benchmark::kMicrosecond);

static void BM_MixedProbs(benchmark::State& state) {
  const auto space = child_action_space({20, 40}, {20, 20}, {60, 60});
  for (auto _ : state) benchmark::DoNotOptimize(mixed_probs(gaussian_probs(space, {10, 10}), 0.6));
}
BENCHMARK(BM_MixedProbs);

BENCHMARK_MAIN();
