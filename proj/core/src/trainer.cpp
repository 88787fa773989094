#include "ndrl/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "ndrl/child_agent.hpp"
#include "ndrl/error.hpp"
#include "ndrl/parent_agent.hpp"
#include "ndrl/policy.hpp"
#include "ndrl/rewards.hpp"

namespace ndrl {

namespace {

constexpr std::size_t kCycles = kEventCount / 2;

/// Budget and schedule bookkeeping shared by both trainers.
class EpisodeAccounting {
 public:
  void record(std::size_t event, int date, Amounts applied) {
    schedule_.events.at(event) = {date, applied.irrigation, applied.nitrogen};
    total_i_ += applied.irrigation;
    total_n_ += applied.nitrogen;
    ++steps_;
  }

  double total_i() const { return total_i_; }
  double total_n() const { return total_n_; }

  EpisodeRecord finish(std::size_t episode, double yield, double reward, const Budget& budget) const {
    EpisodeRecord r;
    r.episode = episode;
    r.schedule = schedule_;
    r.yield = yield;
    r.total_i = total_i_;
    r.total_n = total_n_;
    r.reward = reward;
    r.action_steps = steps_;
    r.budget_violated = total_i_ > budget.i_total || total_n_ > budget.n_total;
    return r;
  }

 private:
  Schedule schedule_;
  double total_i_ = 0.0;
  double total_n_ = 0.0;
  int steps_ = 0;
};

ChildState observe(const CropEnv& env, int date) {
  const CropState& s = env.state();
  return {date, binarize_stress(s.wsf_raw), binarize_stress(s.nsf_raw), s.lai};
}

ChildFeatures features_of(const CropEnv& env, const ChildState& state) {
  return encode_child_state(state, env.season_start_doy(), env.season_length());
}

/// Observation after an executed event: the next event date, or the
/// current day when the season has no events left.
ChildState next_observation(CropEnv& env) {
  if (env.events_done()) return observe(env, env.state().day);
  env.advance_to_next_event();
  return observe(env, env.event_date(env.next_event()));
}

ParentAction quantized(const std::array<Amounts, 2>& executed, const RunConfig& cfg) {
  auto q = [&](double v) { return quantize_to_grid(v, cfg.parent_max, cfg.parent_step); };
  return {q(executed[0].irrigation), q(executed[0].nitrogen), q(executed[1].irrigation), q(executed[1].nitrogen)};
}

double max_of(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end());
}

}  // namespace

TrainingLog run_ndrl(const RunConfig& cfg, const TrainerHooks& hooks) {
  cfg.validate();
  TrainingLog log;
  if (cfg.episodes == 0) return log;
  const auto started = std::chrono::steady_clock::now();

  CropEnv env = CropEnv::for_profile(cfg.year_profile, cfg.weather_seed, cfg.soil);
  const std::vector<ParentAction> grid = parent_action_grid(cfg.parent_max, cfg.parent_step);
  std::vector<std::size_t> all_actions(grid.size());
  std::iota(all_actions.begin(), all_actions.end(), std::size_t{0});

  QTable qtable(cfg.lr_parent, cfg.gamma_parent);
  DqnAgent child(ChildActionSpace::size(), cfg.dqn, cfg.reward_scale, cfg.seed);
  Rng parent_rng = Rng::stream(cfg.seed, "parent");
  Rng child_rng = Rng::stream(cfg.seed, "child");

  const CompletionPolicy completion = CompletionPolicy::per_event_average(cfg.budget.i_total, cfg.budget.n_total);
  const Amounts delta{cfg.delta, cfg.delta};
  const Amounts bounds{cfg.parent_max, cfg.parent_max};
  const Amounts sigma = cfg.mixture.sigma(delta);

  // Quantized amounts last executed at each cycle's dates; zero before the first visit.
  std::array<ParentAction, kCycles> applied_at{};

  for (std::size_t episode = 0; episode < cfg.episodes; ++episode) {
    const double eps_parent = cfg.mixture.epsilon_parent.at(episode, cfg.episodes);
    const double eps_child = cfg.mixture.epsilon_child.at(episode, cfg.episodes);
    env.reset();
    EpisodeAccounting accounting;
    double episode_reward = 0.0;

    for (std::size_t cycle = 0; cycle < kCycles; ++cycle) {
      const std::size_t first_event = 2 * cycle;
      const ParentState parent_state{
          {env.event_date(first_event), env.event_date(first_event + 1)}, applied_at[cycle], static_cast<int>(cycle + 1)};
      const ParentStateKey key = key_of(parent_state);

      env.advance_to_next_event();
      const EnvSnapshot before = env.snapshot();
      const std::vector<double> q_row = qtable.row(key, grid.size());

      std::vector<double> predicted;
      std::size_t candidate_count = 0;
      auto candidates = [&] {
        predicted.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) predicted[i] = env.predict_yield(before, grid[i], completion);
        auto set = candidate_set(predicted, cfg.mixture.eta);
        candidate_count = set.size();
        return set;
      };
      const std::size_t action = select_parent_action(q_row, candidates, eps_parent, parent_rng);
      const bool explored = !predicted.empty();
      const ParentAction macro = grid[action];
      const double h_p = explored ? predicted[action] : env.predict_yield(before, macro, completion);

      double h_c = -std::numeric_limits<double>::infinity();
      std::array<Amounts, 2> executed{};
      std::array<ChildFeatures, 2> decision_features{};
      for (std::size_t micro = 0; micro < 2; ++micro) {
        const std::size_t event = first_event + micro;
        env.advance_to_next_event();
        const ChildState state = observe(env, env.event_date(event));
        const ChildFeatures features = features_of(env, state);
        decision_features[micro] = features;

        const ChildActionSpace space = child_action_space(macro.at(micro), delta, bounds);
        const ActionDistribution dist = mixed_probs(gaussian_probs(space, sigma), cfg.mixture.alpha_mix);
        const std::size_t index = select_child_action(child.q_values(features), dist, eps_child, child_rng);
        const ChildAction chosen = space.at(index);
        const Amounts applied{chosen.irrigation, chosen.nitrogen};

        env.apply_event(applied);
        accounting.record(event, env.event_date(event), applied);
        executed[micro] = applied;

        const double hwam = env.rollout_yield(env.snapshot(), {}, completion);
        const StressContext ctx{state.wsf, state.nsf, applied.irrigation, applied.nitrogen};
        const double reward = child_reward(hwam, ctx, cfg.weights, cfg.budget);
        episode_reward += reward;
        h_c = std::max(h_c, hwam);

        const ChildState next_state = next_observation(env);
        child.remember(features, index, reward, features_of(env, next_state), env.events_done());
        child.maybe_train();

        if (hooks.on_step) {
          hooks.on_step({episode, cycle, micro, macro, macro.at(micro), chosen, explored, reward});
        }
      }

      const double q_cmax =
          std::max(max_of(child.q_values(decision_features[0])), max_of(child.q_values(decision_features[1])));
      const double r_parent =
          parent_reward(accounting.total_i(), accounting.total_n(), h_c, h_p, q_cmax, cfg.budget);
      applied_at[cycle] = quantized(executed, cfg);
      std::optional<ParentStateKey> next_key;
      if (cycle + 1 < kCycles) {
        next_key = key_of(ParentState{{env.event_date(first_event + 2), env.event_date(first_event + 3)},
                                      applied_at[cycle + 1],
                                      static_cast<int>(cycle + 2)});
      }
      qtable.update(key, action, r_parent, next_key, all_actions);

      if (hooks.on_cycle) {
        hooks.on_cycle({episode, cycle, explored, explored ? grid.size() : 0, candidate_count, h_p, h_c, q_cmax,
                        r_parent});
      }
    }

    const double yield = env.finish();
    log.add(accounting.finish(episode, yield, episode_reward, cfg.budget));
  }

  log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return log;
}

TrainingLog run_flat_dqn(const RunConfig& cfg, const TrainerHooks& hooks) {
  cfg.validate();
  TrainingLog log;
  if (cfg.episodes == 0) return log;
  const auto started = std::chrono::steady_clock::now();

  CropEnv env = CropEnv::for_profile(cfg.year_profile, cfg.weather_seed, cfg.soil);
  // Global (I, N) grid at the parent step: irrigation-major.
  std::vector<Amounts> actions;
  const auto levels = static_cast<std::size_t>(std::lround(cfg.parent_max / cfg.parent_step)) + 1;
  for (std::size_t i = 0; i < levels; ++i)
    for (std::size_t n = 0; n < levels; ++n) {
      actions.push_back({static_cast<double>(i) * cfg.parent_step, static_cast<double>(n) * cfg.parent_step});
    }

  DqnAgent agent(actions.size(), cfg.dqn, cfg.reward_scale, cfg.seed);
  Rng rng = Rng::stream(cfg.seed, "flat-dqn");
  const CompletionPolicy completion = CompletionPolicy::per_event_average(cfg.budget.i_total, cfg.budget.n_total);
  const ActionDistribution uniform = ActionDistribution::uniform(actions.size());

  for (std::size_t episode = 0; episode < cfg.episodes; ++episode) {
    const double epsilon = cfg.mixture.epsilon_child.at(episode, cfg.episodes);
    env.reset();
    EpisodeAccounting accounting;
    double episode_reward = 0.0;

    for (std::size_t event = 0; event < kEventCount; ++event) {
      env.advance_to_next_event();
      const ChildState state = observe(env, env.event_date(event));
      const ChildFeatures features = features_of(env, state);
      const std::size_t index = select_child_action(agent.q_values(features), uniform, epsilon, rng);
      const Amounts applied = actions[index];

      env.apply_event(applied);
      accounting.record(event, env.event_date(event), applied);

      const double hwam = env.rollout_yield(env.snapshot(), {}, completion);
      const StressContext ctx{state.wsf, state.nsf, applied.irrigation, applied.nitrogen};
      const double reward = child_reward(hwam, ctx, cfg.weights, cfg.budget);
      episode_reward += reward;

      const ChildState next_state = next_observation(env);
      agent.remember(features, index, reward, features_of(env, next_state), env.events_done());
      agent.maybe_train();

      if (hooks.on_step) {
        hooks.on_step({episode, event / 2, event % 2, ParentAction{}, applied,
                       ChildAction{applied.irrigation, applied.nitrogen, index}, false, reward});
      }
    }

    const double yield = env.finish();
    log.add(accounting.finish(episode, yield, episode_reward, cfg.budget));
  }

  log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return log;
}

Evaluation evaluate_schedule(const Schedule& schedule, YearProfile profile, const SoilParams& params,
                             std::uint64_t weather_seed, const std::string& label) {
  const auto weather = generate_weather(weather_seed, profile);
  Evaluation ev;
  ev.season = run_season(schedule, weather, params);
  ev.row = make_metrics_row(label, calendar_for(profile).year, ev.season.total_irrigation, ev.season.total_nitrogen,
                            ev.season.yield);
  return ev;
}

void write_run_outputs(const RunConfig& config, const std::string& method, const TrainingLog& log) {
  const auto& dir = config.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": cannot create output directory: " + ec.message());

  write_training_log_csv(dir / "training_log.csv", log);
  if (log.best_schedule) {
    save_schedule(dir / "best_schedule.csv", *log.best_schedule);
  } else {
    std::ofstream(dir / "best_schedule.csv") << "date,irrigation_mm,nitrogen_kgha\n";
  }

  {
    std::ofstream curve(dir / "reward_curve.csv", std::ios::binary);
    if (!curve) throw DataError((dir / "reward_curve.csv").string() + ": cannot write");
    curve << "episode,avg_reward,cyasr,best_yield\n";
    const auto avg = avg_cumulative_reward(log, 50);
    char buf[160];
    for (std::size_t i = 0; i < log.episodes.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, avg[i], cyasr(log, i + 1), log.best_so_far[i]);
      curve << buf;
    }
  }

  nlohmann::ordered_json meta;
  meta["method"] = method;
  meta["seed"] = config.seed;
  meta["year_profile"] = std::string(profile_name(config.year_profile));
  nlohmann::ordered_json cfg_json;
  for (const auto& [k, v] : to_key_values(config)) cfg_json[k] = v;
  meta["config"] = cfg_json;
  nlohmann::ordered_json soil;
  soil["water_capacity"] = config.soil.water_capacity;
  soil["init_water"] = config.soil.init_water;
  soil["init_n"] = config.soil.init_n;
  soil["yield_potential"] = config.soil.yield_potential;
  soil["water_sensitivity"] = config.soil.water_sensitivity;
  soil["nitrogen_sensitivity"] = config.soil.nitrogen_sensitivity;
  meta["soil"] = soil;
  meta["episodes"] = log.episodes.size();
  meta["best_yield"] = log.best_yield;
  meta["duration_seconds"] = log.wall_seconds;
  meta["version"] = "0.1.0";
#if defined(__clang__)
  meta["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  meta["compiler"] = std::string("gcc ") + __VERSION__;
#endif
  std::ofstream(dir / "run_meta.json") << meta.dump(2) << '\n';
}

}  // namespace ndrl
