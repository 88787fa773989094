#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ndrl {

struct WeatherDay {
  int doy = 1;        // day of year, 1-366
  double tmax = 0.0;  // degC
  double tmin = 0.0;  // degC
  double rain = 0.0;  // mm
  double srad = 0.0;  // MJ/m2/day
  double et0 = 0.0;   // reference evapotranspiration, mm/day
};

inline constexpr std::size_t kEventCount = 12;

enum class YearProfile { Dry2023, Wet2024 };

/// "dry2023" / "wet2024". Throws std::invalid_argument on anything else.
YearProfile parse_profile(std::string_view id);
std::string_view profile_name(YearProfile profile);

/// Season layout of one experiment year: planting day, season length and the
/// twelve irrigation/fertilization dates of the field treatments.
struct SeasonCalendar {
  int year = 2023;
  int start_doy = 1;
  int length = 0;
  std::array<int, kEventCount> event_doys{};

  int year_code() const { return year % 100; }
  /// YYDDD date code for a day of year.
  int date_code(int doy) const { return year_code() * 1000 + doy; }
};

const SeasonCalendar& calendar_for(YearProfile profile);

/// Reads `doy,tmax,tmin,rain,srad,et0`. Throws DataError naming the
/// offending line for malformed or inconsistent rows.
std::vector<WeatherDay> load_weather(const std::filesystem::path& path);
void save_weather(const std::filesystem::path& path, std::span<const WeatherDay> days);

/// Deterministic synthetic season for a profile. The wet profile draws from
/// the same stream as the dry one with more frequent, heavier rain, so for a
/// fixed seed its seasonal rain total is always strictly larger.
std::vector<WeatherDay> generate_weather(std::uint64_t seed, YearProfile profile);

double total_rain(std::span<const WeatherDay> days);

}  // namespace ndrl
