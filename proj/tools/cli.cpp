#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ndrl/calibration.hpp"
#include "ndrl/config.hpp"
#include "ndrl/error.hpp"
#include "ndrl/fixtures.hpp"
#include "ndrl/metrics.hpp"
#include "ndrl/trainer.hpp"

namespace ndrl::cli {

namespace {

void add_run_flags(CLI::App& app, CliCommand& cmd) {
  app.add_option("--config", cmd.config, "key = value config file")->required()->check(CLI::ExistingFile);
  auto* seed = app.add_option("--seed", cmd.seed, "RL seed");
  auto* seeds = app.add_option_function<std::string>(
      "--seeds", [&cmd](const std::string& text) { cmd.seeds = parse_seed_list(text); },
      "several seeds, e.g. 1..5 or 1,3,9; one output directory per seed");
  seed->excludes(seeds);
  app.add_option("--episodes", cmd.episodes, "episode count");
  app.add_option("--year-profile", cmd.year_profile, "dry2023 or wet2024");
  app.add_option("--weather-seed", cmd.weather_seed, "seed of the generated season weather");
  app.add_option("--set", cmd.overrides, "config override key=value (repeatable)");
  app.add_option("--out", cmd.out, "output directory");
}

std::optional<double> best_row(const TrainingLog& log, EpisodeRecord& out) {
  std::optional<double> best;
  for (const auto& e : log.episodes) {
    if (e.budget_violated) continue;
    if (!best || e.yield > *best) {
      best = e.yield;
      out = e;
    }
  }
  return best;
}

RunConfig resolve_config(const CliCommand& cmd) {
  RunConfig config;
  if (cmd.config) apply_key_values(config, read_key_values(*cmd.config));
  KeyValues flags;
  for (const auto& kv : cmd.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    flags[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  apply_key_values(config, flags);
  if (cmd.seed) config.seed = *cmd.seed;
  if (cmd.episodes) config.episodes = *cmd.episodes;
  if (cmd.year_profile) config.year_profile = parse_profile(*cmd.year_profile);
  if (cmd.weather_seed) config.weather_seed = *cmd.weather_seed;
  config.out_dir = resolve_out_dir(cmd);
  config.validate();
  return config;
}

void print_row(const MetricsRow& r) {
  auto ratio = [](const std::optional<double>& v) {
    char buf[32];
    if (!v) return std::string("--");
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  std::printf("%-12s %d  I=%.0f mm  N=%.0f kg/ha  yield=%.0f kg/ha  IWP=%s  NPFP=%s\n", r.label.c_str(), r.year,
              r.irrigation, r.fertilizer_n, r.yield, ratio(r.iwp).c_str(), ratio(r.npfp).c_str());
}

int cmd_train(const CliCommand& cmd, bool flat) {
  const RunConfig base = resolve_config(cmd);
  const std::string method = flat ? "DQN" : "NDRL";
  auto run = [&](RunConfig cfg) {
    TrainingLog log = flat ? run_flat_dqn(cfg) : run_ndrl(cfg);
    write_run_outputs(cfg, method, log);
    return log;
  };

  if (cmd.seeds.empty()) {
    const TrainingLog log = run(base);
    std::printf("%s seed %llu: best within-budget yield %.1f kg/ha (%.1f s) -> %s\n", method.c_str(),
                static_cast<unsigned long long>(base.seed), log.best_yield, log.wall_seconds,
                base.out_dir.string().c_str());
    return kExitOk;
  }

  std::vector<TrainingLog> logs(cmd.seeds.size());
  std::vector<std::string> errors(cmd.seeds.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < cmd.seeds.size(); ++i) {
    RunConfig cfg = base;
    cfg.seed = cmd.seeds[i];
    cfg.out_dir = base.out_dir / ("seed_" + std::to_string(cfg.seed));
    workers.emplace_back([&, i, cfg] {
      try {
        logs[i] = run(cfg);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw std::runtime_error("seed " + std::to_string(cmd.seeds[i]) + ": " + errors[i]);
  }

  std::ofstream summary(base.out_dir / "summary.csv");
  if (!summary) throw DataError((base.out_dir / "summary.csv").string() + ": cannot write");
  summary << "method,seed,best_yield,total_i,total_n,violated_episodes,wall_seconds\n";
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto& log = logs[i];
    std::size_t violated = 0;
    for (const auto& e : log.episodes) violated += e.budget_violated ? 1 : 0;
    const double ti = log.best_schedule ? log.best_schedule->total_irrigation() : 0.0;
    const double tn = log.best_schedule ? log.best_schedule->total_nitrogen() : 0.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%llu,%.17g,%.17g,%.17g,%zu,%.3f\n", method.c_str(),
                  static_cast<unsigned long long>(cmd.seeds[i]), log.best_yield, ti, tn, violated, log.wall_seconds);
    summary << buf;
    std::printf("%s seed %llu: best within-budget yield %.1f kg/ha\n", method.c_str(),
                static_cast<unsigned long long>(cmd.seeds[i]), log.best_yield);
  }
  std::printf("summary -> %s\n", (base.out_dir / "summary.csv").string().c_str());
  return kExitOk;
}

std::vector<Treatment> treatments_for(const CliCommand& cmd) {
  if (!cmd.fixtures) return field_treatments();
  if (!std::filesystem::exists(*cmd.fixtures)) throw DataError(cmd.fixtures->string() + ": fixture file not found");
  return load_treatments_csv(*cmd.fixtures);
}

int cmd_calibrate(const CliCommand& cmd) {
  const auto treatments = treatments_for(cmd);
  const ParamGrid grid = cmd.grid ? ParamGrid::load(*cmd.grid) : ParamGrid::default_grid();
  const std::uint64_t weather_seed = cmd.weather_seed.value_or(kDefaultWeatherSeed);
  const auto observations = to_observations(treatments);
  const CalibrationResult result = calibrate(grid, observations, profile_weather(weather_seed));

  const auto out = resolve_out_dir(cmd);
  std::filesystem::create_directories(out);
  save_soil_params(out / "soil_params.txt", result.params);

  nlohmann::ordered_json report;
  report["grid_points"] = grid.size();
  report["grid_index"] = result.grid_index;
  report["weather_seed"] = weather_seed;
  report["nrmse_percent"] = result.nrmse;
  report["d_index"] = d_index(result.observed, result.simulated);
  report["r_squared"] = r_squared(result.observed, result.simulated);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < observations.size(); ++i) {
    rows.push_back({{"treatment", observations[i].label},
                    {"observed", result.observed[i]},
                    {"simulated", result.simulated[i]}});
  }
  report["treatments"] = rows;
  std::ofstream(out / "calibration_report.json") << report.dump(2) << '\n';

  std::printf("calibrated over %zu grid points: nRMSE %.2f%%  d %.3f  R2 %.3f\n", grid.size(), result.nrmse,
              report["d_index"].get<double>(), report["r_squared"].get<double>());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    std::printf("  %-8s observed %6.0f  simulated %6.0f\n", observations[i].label.c_str(), result.observed[i],
                result.simulated[i]);
  }
  std::printf("-> %s\n", out.string().c_str());
  return kExitOk;
}

int cmd_evaluate(const CliCommand& cmd) {
  const Schedule schedule = load_schedule(*cmd.schedule);
  const YearProfile profile = parse_profile(cmd.year_profile.value_or("dry2023"));
  const SoilParams params = cmd.soil_params ? load_soil_params(*cmd.soil_params) : default_soil_params();
  const Evaluation ev =
      evaluate_schedule(schedule, profile, params, cmd.weather_seed.value_or(kDefaultWeatherSeed), cmd.label);
  print_row(ev.row);
  if (cmd.out) {
    std::filesystem::create_directories(*cmd.out);
    const std::vector<MetricsRow> rows{ev.row};
    write_comparison_csv(*cmd.out / "evaluation.csv", rows);
  }
  return kExitOk;
}

std::filesystem::path log_path(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) throw DataError(p.string() + ": training log not found");
  return std::filesystem::is_directory(p) ? p / "training_log.csv" : p;
}

int cmd_compare(const CliCommand& cmd) {
  const auto treatments = treatments_for(cmd);
  const YearProfile profile = parse_profile(cmd.year_profile.value_or("dry2023"));
  const int year = calendar_for(profile).year;

  std::vector<MetricsRow> rows;
  for (const auto& t : treatments) {
    if (t.name.rfind("Tr0_", 0) != 0) continue;
    rows.push_back(make_metrics_row("Field Data", calendar_for(t.profile).year, t.schedule.total_irrigation(),
                                    t.schedule.total_nitrogen(), t.yield));
  }

  nlohmann::ordered_json metrics;
  auto add_method = [&](const std::string& label, const std::filesystem::path& given) {
    const auto path = log_path(given);
    const TrainingLog log = read_training_log_csv(path);
    if (log.episodes.empty()) throw DataError(path.string() + ": training log has no episodes");
    EpisodeRecord best;
    nlohmann::ordered_json m;
    m["log"] = path.string();
    m["episodes"] = log.episodes.size();
    if (best_row(log, best)) {
      const MetricsRow row = make_metrics_row(label, year, best.total_i, best.total_n, best.yield);
      rows.push_back(row);
      m["best_episode"] = best.episode;
      m["best_yield"] = best.yield;
      m["irrigation"] = best.total_i;
      m["nitrogen"] = best.total_n;
      m["iwp"] = row.iwp ? nlohmann::ordered_json(*row.iwp) : nlohmann::ordered_json(nullptr);
      m["npfp"] = row.npfp ? nlohmann::ordered_json(*row.npfp) : nlohmann::ordered_json(nullptr);
    } else {
      m["best_yield"] = nullptr;
    }
    m["cyasr"] = cyasr(log, log.episodes.size());
    m["final_avg_reward"] = avg_cumulative_reward(log, 50).back();
    metrics[label] = m;
  };
  add_method("NDRL", *cmd.ndrl_log);
  add_method("DQN", *cmd.dqn_log);

  const auto out = resolve_out_dir(cmd);
  std::filesystem::create_directories(out);
  write_comparison_csv(out / "comparison_table.csv", rows);
  std::ofstream(out / "metrics.json") << metrics.dump(2) << '\n';
  for (const auto& r : rows) print_row(r);
  std::printf("-> %s\n", (out / "comparison_table.csv").string().c_str());
  return kExitOk;
}

int cmd_export_fixtures(const CliCommand& cmd) {
  const auto out = resolve_out_dir(cmd);
  const std::uint64_t weather_seed = cmd.weather_seed.value_or(kDefaultWeatherSeed);
  std::filesystem::create_directories(out / "schedules");
  const auto& treatments = field_treatments();
  save_treatments_csv(out / "field_treatments.csv", treatments);
  for (const auto& t : treatments) save_schedule(out / "schedules" / (t.name + ".csv"), t.schedule);
  for (auto p : {YearProfile::Dry2023, YearProfile::Wet2024}) {
    save_weather(out / ("weather_" + std::string(profile_name(p)) + ".csv"), generate_weather(weather_seed, p));
  }
  ToyMdp::shipped().save(out / "toy_mdp.txt");
  ParamGrid::default_grid().save(out / "calibration_grid.txt");
  save_soil_params(out / "soil_params.txt", default_soil_params());

  RunConfig defaults;
  defaults.weather_seed = weather_seed;
  std::ofstream config(out / "default_config.txt");
  config << "# ndrl run configuration\n";
  for (const auto& [k, v] : to_key_values(defaults)) {
    if (k == "out") continue;
    config << k << " = " << v << '\n';
  }
  std::printf("fixtures -> %s\n", out.string().c_str());
  return kExitOk;
}

}  // namespace

std::string subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::Calibrate: return "calibrate";
    case Subcommand::Train: return "train";
    case Subcommand::Baseline: return "baseline";
    case Subcommand::Evaluate: return "evaluate";
    case Subcommand::Compare: return "compare";
    case Subcommand::ExportFixtures: return "export-fixtures";
  }
  return "?";
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad seed list '" + text + "'");
    }
    return static_cast<std::uint64_t>(std::stoull(s));
  };
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = number(text.substr(0, dots));
    const auto hi = number(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty seed range '" + text + "'");
    if (hi - lo >= 1000) throw std::invalid_argument("seed range too large '" + text + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) seeds.push_back(number(item));
  if (seeds.empty()) throw std::invalid_argument("empty seed list");
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (seeds[i] == seeds[j]) throw std::invalid_argument("duplicate seed in '" + text + "'");
  return seeds;
}

std::filesystem::path resolve_out_dir(const CliCommand& command) {
  if (command.out) return *command.out;
  const char* root = std::getenv("NDRL_OUT");
  const std::filesystem::path base = root && *root ? root : "runs";
  return base / subcommand_name(command.subcommand);
}

ParseResult parse_args(const std::vector<std::string>& argv) {
  CLI::App app{"Nested dual-agent irrigation and nitrogen scheduling", "ndrl"};
  app.require_subcommand(1);
  CliCommand cmd;

  auto* calibrate = app.add_subcommand("calibrate", "grid-search the surrogate against field treatments");
  calibrate->add_option("--fixtures", cmd.fixtures, "treatments CSV (default: built-in table)");
  calibrate->add_option("--grid", cmd.grid, "calibration grid file")->check(CLI::ExistingFile);
  calibrate->add_option("--weather-seed", cmd.weather_seed, "seed of the generated season weather");
  calibrate->add_option("--out", cmd.out, "output directory");

  auto* train = app.add_subcommand("train", "train the nested parent/child agents");
  add_run_flags(*train, cmd);
  auto* baseline = app.add_subcommand("baseline", "train the flat DQN baseline");
  add_run_flags(*baseline, cmd);

  auto* evaluate = app.add_subcommand("evaluate", "simulate one schedule and report IWP/NPFP");
  evaluate->add_option("--schedule", cmd.schedule, "12-event schedule CSV")->required();
  evaluate->add_option("--year-profile", cmd.year_profile, "dry2023 or wet2024");
  evaluate->add_option("--soil-params", cmd.soil_params, "surrogate parameter file");
  evaluate->add_option("--weather-seed", cmd.weather_seed, "seed of the generated season weather");
  evaluate->add_option("--label", cmd.label, "row label");
  evaluate->add_option("--out", cmd.out, "directory for evaluation.csv");

  auto* compare = app.add_subcommand("compare", "tabulate field data against trained runs");
  compare->add_option("--ndrl", cmd.ndrl_log, "NDRL run directory or training_log.csv")->required();
  compare->add_option("--dqn", cmd.dqn_log, "DQN run directory or training_log.csv")->required();
  compare->add_option("--fixtures", cmd.fixtures, "treatments CSV (default: built-in table)");
  compare->add_option("--year-profile", cmd.year_profile, "season the runs were trained on");
  compare->add_option("--out", cmd.out, "output directory");

  auto* export_fixtures = app.add_subcommand("export-fixtures", "write the shipped fixtures and defaults");
  export_fixtures->add_option("--weather-seed", cmd.weather_seed, "seed of the generated season weather");
  export_fixtures->add_option("--out", cmd.out, "output directory");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  ParseResult result;
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    result.output = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.output = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kExitUsage;
    result.output = std::string(e.what()) + "\nRun with --help for usage.";
    return result;
  } catch (const std::invalid_argument& e) {
    result.exit_code = kExitUsage;
    result.output = e.what();
    return result;
  }

  const std::pair<CLI::App*, Subcommand> table[] = {
      {calibrate, Subcommand::Calibrate}, {train, Subcommand::Train},     {baseline, Subcommand::Baseline},
      {evaluate, Subcommand::Evaluate},   {compare, Subcommand::Compare}, {export_fixtures, Subcommand::ExportFixtures},
  };
  for (const auto& [sub, kind] : table) {
    if (sub->parsed()) cmd.subcommand = kind;
  }
  result.command = cmd;
  return result;
}

int run_command(const CliCommand& command) {
  try {
    switch (command.subcommand) {
      case Subcommand::Calibrate: return cmd_calibrate(command);
      case Subcommand::Train: return cmd_train(command, false);
      case Subcommand::Baseline: return cmd_train(command, true);
      case Subcommand::Evaluate: return cmd_evaluate(command);
      case Subcommand::Compare: return cmd_compare(command);
      case Subcommand::ExportFixtures: return cmd_export_fixtures(command);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ndrl::cli
