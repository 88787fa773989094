#include "ndrl/weather.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ndrl/error.hpp"
#include "ndrl/rng.hpp"

namespace ndrl {

namespace {

constexpr std::string_view kWeatherHeader = "doy,tmax,tmin,rain,srad,et0";

struct ProfileClimate {
  double rain_probability;
  double rain_mean;        // mm per rain event
  double temp_offset;      // degC relative to the shared seasonal curve
  double guaranteed_rain;  // mm added on season day 5
};

ProfileClimate climate_for(YearProfile profile) {
  switch (profile) {
    case YearProfile::Dry2023:
      return {0.06, 6.0, 0.0, 0.0};
    case YearProfile::Wet2024:
      return {0.13, 8.0, -0.8, 6.0};
  }
  throw std::invalid_argument("unknown year profile");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw DataError(where + "bad number '" + text + "'");
  }
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

YearProfile parse_profile(std::string_view id) {
  if (id == "dry2023") return YearProfile::Dry2023;
  if (id == "wet2024") return YearProfile::Wet2024;
  throw std::invalid_argument("unknown year profile '" + std::string(id) + "' (expected dry2023 or wet2024)");
}

std::string_view profile_name(YearProfile profile) {
  return profile == YearProfile::Dry2023 ? "dry2023" : "wet2024";
}

const SeasonCalendar& calendar_for(YearProfile profile) {
  // Planting day plus 160 days; event dates are the field trial dates.
  static const SeasonCalendar dry{2023, 110, 160, {110, 160, 170, 180, 190, 195, 202, 209, 216, 223, 230, 237}};
  static const SeasonCalendar wet{2024, 122, 160, {122, 159, 171, 181, 191, 196, 204, 212, 220, 224, 234, 238}};
  return profile == YearProfile::Dry2023 ? dry : wet;
}

std::vector<WeatherDay> load_weather(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open weather file");

  std::string line;
  std::size_t line_no = 0;
  std::vector<WeatherDay> days;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (line != kWeatherHeader) {
        throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected header '" +
                        std::string(kWeatherHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const std::string where = path.string() + ": row " + std::to_string(days.size() + 1) + " (line " +
                              std::to_string(line_no) + "): ";
    const auto fields = split_csv(line);
    if (fields.size() != 6) throw DataError(where + "expected 6 fields, got " + std::to_string(fields.size()));
    WeatherDay day;
    const double doy = parse_number(fields[0], where);
    if (doy != std::floor(doy) || doy < 1 || doy > 366) throw DataError(where + "doy out of range");
    day.doy = static_cast<int>(doy);
    day.tmax = parse_number(fields[1], where);
    day.tmin = parse_number(fields[2], where);
    day.rain = parse_number(fields[3], where);
    day.srad = parse_number(fields[4], where);
    day.et0 = parse_number(fields[5], where);
    if (day.tmax < day.tmin) throw DataError(where + "tmax < tmin");
    if (day.rain < 0) throw DataError(where + "negative rain");
    if (day.srad < 0) throw DataError(where + "negative srad");
    if (day.et0 < 0) throw DataError(where + "negative et0");
    if (!days.empty() && day.doy != days.back().doy + 1) {
      throw DataError(where + "non-contiguous day " + std::to_string(day.doy) + " after " +
                      std::to_string(days.back().doy));
    }
    days.push_back(day);
  }
  if (days.empty()) throw DataError(path.string() + ": no weather data");
  return days;
}

void save_weather(const std::filesystem::path& path, std::span<const WeatherDay> days) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write weather file");
  out << kWeatherHeader << '\n';
  out.precision(17);
  for (const auto& d : days) {
    out << d.doy << ',' << d.tmax << ',' << d.tmin << ',' << d.rain << ',' << d.srad << ',' << d.et0 << '\n';
  }
}

std::vector<WeatherDay> generate_weather(std::uint64_t seed, YearProfile profile) {
  const SeasonCalendar& cal = calendar_for(profile);
  const ProfileClimate climate = climate_for(profile);
  // Both profiles consume the same draws in the same order; only the
  // thresholds and scales differ.
  Rng rng = Rng::stream(seed, "weather");

  std::vector<WeatherDay> days;
  days.reserve(static_cast<std::size_t>(cal.length));
  for (int i = 0; i < cal.length; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(cal.length - 1);
    const double seasonal = std::sin(std::numbers::pi * f);
    const double temp_noise = rng.normal();
    const double occurrence = rng.uniform();
    const double amount = rng.uniform_open();

    double rain = 0.0;
    if (occurrence < climate.rain_probability) rain = -climate.rain_mean * std::log(amount);
    if (i == 5) rain += climate.guaranteed_rain;

    WeatherDay d;
    d.doy = cal.start_doy + i;
    const double tmean = 14.0 + 12.0 * seasonal + climate.temp_offset + 1.8 * temp_noise;
    const double range = rain > 0.0 ? 9.0 : 13.0;
    d.tmax = tmean + range / 2.0;
    d.tmin = tmean - range / 2.0;
    d.srad = (17.0 + 9.0 * seasonal) * (rain > 0.0 ? 0.6 : 1.0);
    d.rain = rain;
    // Hargreaves-Samani radiation form, MJ converted to mm of water.
    d.et0 = std::max(0.0, 0.0135 * (tmean + 17.8) * d.srad * 0.408);
    days.push_back(d);
  }
  return days;
}

double total_rain(std::span<const WeatherDay> days) {
  double sum = 0.0;
  for (const auto& d : days) sum += d.rain;
  return sum;
}

}  // namespace ndrl
