#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>

#include "ndrl/config.hpp"
#include "ndrl/crop_env.hpp"
#include "ndrl/metrics.hpp"
#include "ndrl/spaces.hpp"
#include "ndrl/training_log.hpp"

namespace ndrl {

/// One executed child decision, reported to TrainerHooks::on_step.
struct StepTrace {
  std::size_t episode = 0;
  std::size_t cycle = 0;  // 0..5 (flat DQN: event / 2)
  std::size_t micro = 0;  // 0..1 (flat DQN: event % 2)
  ParentAction macro;     // zero for the flat baseline
  Amounts center;
  ChildAction action;
  bool explored_parent = false;
  double child_reward = 0.0;
};

/// Per-macro-cycle parent bookkeeping, reported to TrainerHooks::on_cycle.
struct CycleTrace {
  std::size_t episode = 0;
  std::size_t cycle = 0;
  bool explored = false;
  std::size_t candidate_rollouts = 0;
  std::size_t candidates = 0;
  double h_p = 0.0;
  double h_c = 0.0;
  double q_cmax = 0.0;
  double parent_reward = 0.0;
};

struct TrainerHooks {
  std::function<void(const StepTrace&)> on_step;
  std::function<void(const CycleTrace&)> on_cycle;
};

/// Nested parent/child training: 6 macro-cycles of 2 child decisions per
/// episode. Deterministic for a fixed config.
TrainingLog run_ndrl(const RunConfig& config, const TrainerHooks& hooks = {});

/// Single DQN over the 12 dates with a global (I, N) grid at the parent step.
TrainingLog run_flat_dqn(const RunConfig& config, const TrainerHooks& hooks = {});

struct Evaluation {
  SeasonResult season;
  MetricsRow row;
};

Evaluation evaluate_schedule(const Schedule& schedule, YearProfile profile, const SoilParams& params,
                             std::uint64_t weather_seed, const std::string& label = "Schedule");

/// Writes training_log.csv, best_schedule.csv, reward_curve.csv and
/// run_meta.json into config.out_dir.
void write_run_outputs(const RunConfig& config, const std::string& method, const TrainingLog& log);

}  // namespace ndrl
