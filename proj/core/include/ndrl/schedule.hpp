#pragma once

#include <array>
#include <filesystem>
#include <span>

#include "ndrl/weather.hpp"

namespace ndrl {

struct ScheduleEvent {
  int date = 0;             // YYDDD
  double irrigation = 0.0;  // mm
  double nitrogen = 0.0;    // kg/ha

  bool operator==(const ScheduleEvent&) const = default;
};

/// Twelve dated irrigation + nitrogen events for one season.
struct Schedule {
  std::array<ScheduleEvent, kEventCount> events{};

  /// Throws std::invalid_argument unless dates strictly increase and all
  /// amounts are non-negative.
  void validate() const;
  double total_irrigation() const;
  double total_nitrogen() const;

  bool operator==(const Schedule&) const = default;
};

/// Schedule with the given amounts on a season calendar's event dates.
Schedule make_schedule(const SeasonCalendar& calendar,
                       std::span<const double> irrigation,
                       std::span<const double> nitrogen);

/// CSV with header `date,irrigation_mm,nitrogen_kgha` and exactly 12 rows.
Schedule load_schedule(const std::filesystem::path& path);
void save_schedule(const std::filesystem::path& path, const Schedule& schedule);

}  // namespace ndrl
