#include "ndrl/training_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ndrl/error.hpp"

namespace ndrl {

namespace {
constexpr std::string_view kLogHeader = "episode,reward,yield,total_i,total_n,steps,violated";
}

void TrainingLog::add(const EpisodeRecord& record) {
  episodes.push_back(record);
  if (!record.budget_violated && (!best_schedule || record.yield > best_yield)) {
    best_yield = record.yield;
    best_schedule = record.schedule;
  }
  best_so_far.push_back(best_yield);
}

void write_training_log_csv(const std::filesystem::path& path, const TrainingLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string() + ": cannot write training log");
  out << kLogHeader << '\n';
  char buf[256];
  for (const auto& e : log.episodes) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%d,%d\n", e.episode, e.reward, e.yield, e.total_i,
                  e.total_n, e.action_steps, e.budget_violated ? 1 : 0);
    out << buf;
  }
}

TrainingLog read_training_log_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open training log");
  std::string line;
  std::size_t line_no = 0;
  TrainingLog log;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kLogHeader) throw DataError(path.string() + ": line 1: unexpected training log header");
      continue;
    }
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f[7];
    std::string extra;
    bool ok = true;
    for (auto& field : f) ok = ok && static_cast<bool>(std::getline(row, field, ','));
    if (!ok || std::getline(row, extra, ',')) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected 7 fields");
    }
    try {
      EpisodeRecord e;
      e.episode = static_cast<std::size_t>(std::stoull(f[0]));
      e.reward = std::stod(f[1]);
      e.yield = std::stod(f[2]);
      e.total_i = std::stod(f[3]);
      e.total_n = std::stod(f[4]);
      e.action_steps = std::stoi(f[5]);
      const int violated = std::stoi(f[6]);
      if (violated != 0 && violated != 1) throw std::invalid_argument("violated");
      e.budget_violated = violated == 1;
      log.add(e);
    } catch (const std::exception&) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": malformed row");
    }
  }
  if (line_no == 0) throw DataError(path.string() + ": empty training log");
  // Schedules are not part of the CSV.
  log.best_schedule.reset();
  return log;
}

}  // namespace ndrl
