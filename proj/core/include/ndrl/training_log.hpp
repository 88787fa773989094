#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "ndrl/schedule.hpp"

namespace ndrl {

struct EpisodeRecord {
  std::size_t episode = 0;
  Schedule schedule;  // the 12 executed events
  double yield = 0.0;
  double total_i = 0.0;
  double total_n = 0.0;
  double reward = 0.0;  // sum of child rewards over the episode
  int action_steps = 0;
  bool budget_violated = false;  // a total exceeded its budget

  bool operator==(const EpisodeRecord&) const = default;
};

struct TrainingLog {
  std::vector<EpisodeRecord> episodes;
  std::optional<Schedule> best_schedule;  // best yield among within-budget episodes
  double best_yield = 0.0;
  std::vector<double> best_so_far;  // best_yield after each episode
  double wall_seconds = 0.0;

  /// Append an episode and update the best-so-far tracking.
  void add(const EpisodeRecord& record);
};

/// `episode,reward,yield,total_i,total_n,steps,violated`, values in %.17g.
void write_training_log_csv(const std::filesystem::path& path, const TrainingLog& log);
/// Reads the per-episode columns back (schedules are not stored in the CSV).
/// Throws DataError naming the path and line for malformed content.
TrainingLog read_training_log_csv(const std::filesystem::path& path);

}  // namespace ndrl
