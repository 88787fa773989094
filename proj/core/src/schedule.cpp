#include "ndrl/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndrl/error.hpp"

namespace ndrl {

namespace {
constexpr std::string_view kScheduleHeader = "date,irrigation_mm,nitrogen_kgha";
}

void Schedule::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (!(e.irrigation >= 0.0) || !(e.nitrogen >= 0.0) || !std::isfinite(e.irrigation) ||
        !std::isfinite(e.nitrogen)) {
      throw std::invalid_argument("schedule event " + std::to_string(i + 1) + ": amounts must be non-negative");
    }
    if (i > 0 && e.date <= events[i - 1].date) {
      throw std::invalid_argument("schedule event " + std::to_string(i + 1) + ": dates must strictly increase");
    }
  }
}

double Schedule::total_irrigation() const {
  double sum = 0.0;
  for (const auto& e : events) sum += e.irrigation;
  return sum;
}

double Schedule::total_nitrogen() const {
  double sum = 0.0;
  for (const auto& e : events) sum += e.nitrogen;
  return sum;
}

Schedule make_schedule(const SeasonCalendar& calendar, std::span<const double> irrigation,
                       std::span<const double> nitrogen) {
  if (irrigation.size() != kEventCount || nitrogen.size() != kEventCount) {
    throw std::invalid_argument("make_schedule: need exactly 12 irrigation and nitrogen amounts");
  }
  Schedule s;
  for (std::size_t i = 0; i < kEventCount; ++i) {
    s.events[i] = {calendar.date_code(calendar.event_doys[i]), irrigation[i], nitrogen[i]};
  }
  s.validate();
  return s;
}

Schedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open schedule file");
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<ScheduleEvent> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kScheduleHeader) {
        throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected header '" +
                        std::string(kScheduleHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string date, irr, nit, extra;
    if (!std::getline(row, date, ',') || !std::getline(row, irr, ',') || !std::getline(row, nit, ',') ||
        std::getline(row, extra, ',')) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      std::size_t used = 0;
      ScheduleEvent e;
      e.date = std::stoi(date, &used);
      if (used != date.size()) throw std::invalid_argument("date");
      e.irrigation = std::stod(irr, &used);
      if (used != irr.size()) throw std::invalid_argument("irrigation");
      e.nitrogen = std::stod(nit, &used);
      if (used != nit.size()) throw std::invalid_argument("nitrogen");
      events.push_back(e);
    } catch (const std::exception&) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": malformed row '" + line + "'");
    }
  }
  if (events.size() != kEventCount) {
    throw DataError(path.string() + ": expected 12 events, got " + std::to_string(events.size()));
  }
  Schedule s;
  std::copy(events.begin(), events.end(), s.events.begin());
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return s;
}

void save_schedule(const std::filesystem::path& path, const Schedule& schedule) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write schedule file");
  out << kScheduleHeader << '\n';
  out.precision(17);
  for (const auto& e : schedule.events) out << e.date << ',' << e.irrigation << ',' << e.nitrogen << '\n';
}

}  // namespace ndrl
