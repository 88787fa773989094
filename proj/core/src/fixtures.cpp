#include "ndrl/fixtures.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ndrl/config.hpp"
#include "ndrl/error.hpp"

namespace ndrl {

namespace {

Treatment make_treatment(std::string name, YearProfile profile, std::array<double, 12> irrigation,
                         std::array<double, 12> nitrogen, double yield) {
  return {std::move(name), profile, make_schedule(calendar_for(profile), irrigation, nitrogen), yield};
}

constexpr std::string_view kTreatmentHeader = "treatment,year,event,date,irrigation_mm,nitrogen_kgha,yield_kgha";

}  // namespace

const std::vector<Treatment>& field_treatments() {
  using P = YearProfile;
  static const std::array<double, 12> n23{0, 16, 25, 27, 33, 41, 53, 53, 0, 2, 0, 0};
  static const std::array<double, 12> n24{0, 15, 8, 24, 45, 45, 45, 53, 15, 0, 0, 0};
  static const std::array<double, 12> i24{45, 52, 37, 37, 45, 37, 60, 52, 52, 45, 45, 30};
  static const std::vector<Treatment> treatments{
      make_treatment("Tr0_23", P::Dry2023, {45, 52, 37, 37, 45, 37, 60, 52, 52, 45, 45, 30}, n23, 6110),
      make_treatment("Tr1_23", P::Dry2023, {40, 47, 33, 33, 41, 33, 54, 47, 47, 41, 41, 27}, n23, 5469),
      make_treatment("Tr2_23", P::Dry2023, {38, 44, 31, 31, 38, 31, 51, 44, 44, 38, 38, 26}, n23, 5670),
      make_treatment("Tr3_23", P::Dry2023, {36, 41, 30, 30, 36, 30, 48, 41, 41, 36, 36, 24}, n23, 4875),
      make_treatment("Tr0_24", P::Wet2024, i24, n24, 7414),
      make_treatment("Tr1_24", P::Wet2024, i24, {0, 13, 7, 22, 41, 41, 41, 47, 13, 0, 0, 0}, 6872),
      make_treatment("Tr2_24", P::Wet2024, {45, 46, 33, 40, 47, 47, 40, 40, 47, 33, 27, 0}, n24, 6829),
      make_treatment("Tr3_24", P::Wet2024, {45, 46, 33, 28, 46, 46, 40, 40, 46, 33, 27, 0}, n24, 6699),
  };
  return treatments;
}

const Treatment& find_treatment(const std::string& name) {
  for (const auto& t : field_treatments()) {
    if (t.name == name) return t;
  }
  throw std::invalid_argument("unknown treatment '" + name + "'");
}

void save_treatments_csv(const std::filesystem::path& path, std::span<const Treatment> treatments) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write treatments file");
  out << kTreatmentHeader << '\n';
  for (const auto& t : treatments) {
    const int year = calendar_for(t.profile).year;
    for (std::size_t i = 0; i < kEventCount; ++i) {
      const auto& e = t.schedule.events[i];
      out << t.name << ',' << year << ',' << i + 1 << ',' << e.date << ',' << e.irrigation << ',' << e.nitrogen
          << ',' << t.yield << '\n';
    }
  }
}

std::vector<Treatment> load_treatments_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open treatments file");
  std::string line;
  std::size_t line_no = 0;
  std::vector<Treatment> out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::size_t> filled;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kTreatmentHeader) throw DataError(path.string() + ": line 1: unexpected header");
      continue;
    }
    std::vector<std::string> f;
    std::istringstream row(line);
    std::string item;
    while (std::getline(row, item, ',')) f.push_back(item);
    const std::string where = path.string() + ": line " + std::to_string(line_no) + ": ";
    if (f.size() != 7) throw DataError(where + "expected 7 fields");
    try {
      const std::string& name = f[0];
      const int year = std::stoi(f[1]);
      const int event = std::stoi(f[2]);
      if (event < 1 || event > static_cast<int>(kEventCount)) throw DataError(where + "event out of range");
      auto it = index.find(name);
      if (it == index.end()) {
        Treatment t;
        t.name = name;
        t.profile = year == 2024 ? YearProfile::Wet2024 : YearProfile::Dry2023;
        if (year != 2023 && year != 2024) throw DataError(where + "year must be 2023 or 2024");
        t.yield = std::stod(f[6]);
        it = index.emplace(name, out.size()).first;
        out.push_back(t);
      }
      auto& e = out[it->second].schedule.events[static_cast<std::size_t>(event - 1)];
      e.date = std::stoi(f[3]);
      e.irrigation = std::stod(f[4]);
      e.nitrogen = std::stod(f[5]);
      ++filled[name];
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      throw DataError(where + "malformed row");
    }
  }
  if (out.empty()) throw DataError(path.string() + ": no treatments");
  for (const auto& t : out) {
    if (filled[t.name] != kEventCount) {
      throw DataError(path.string() + ": treatment " + t.name + " does not have 12 events");
    }
    try {
      t.schedule.validate();
    } catch (const std::invalid_argument& e) {
      throw DataError(path.string() + ": treatment " + t.name + ": " + e.what());
    }
  }
  return out;
}

std::vector<CalibrationObservation> to_observations(std::span<const Treatment> treatments) {
  std::vector<CalibrationObservation> obs;
  for (const auto& t : treatments) obs.push_back({t.name, t.schedule, t.yield});
  return obs;
}

WeatherByYear profile_weather(std::uint64_t weather_seed) {
  WeatherByYear w;
  for (auto p : {YearProfile::Dry2023, YearProfile::Wet2024}) {
    w[calendar_for(p).year_code()] = generate_weather(weather_seed, p);
  }
  return w;
}

ToyMdp ToyMdp::shipped() {
  ToyMdp m;
  m.states = 2;
  m.actions = 4;
  m.gamma = 0.9;
  m.reward = {{1.0, 4.0, -2.0, 0.5}, {3.0, -1.0, 2.0, 6.0}};
  // Actions 0-2 cross to the other state, action 3 stays.
  m.next = {{1, 1, 1, 0}, {0, 0, 0, 1}};
  return m;
}

void ToyMdp::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write toy MDP");
  out << "# toy MDP: states actions gamma, then one 'state action reward next' line per pair\n";
  out << states << ' ' << actions << ' ' << format_number(gamma) << '\n';
  for (std::size_t s = 0; s < states; ++s)
    for (std::size_t a = 0; a < actions; ++a) out << s << ' ' << a << ' ' << format_number(reward[s][a]) << ' ' << next[s][a] << '\n';
}

ToyMdp ToyMdp::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open toy MDP");
  std::string line;
  ToyMdp m;
  bool header = false;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    if (!header) {
      if (!(row >> m.states >> m.actions >> m.gamma)) throw DataError(path.string() + ": bad toy MDP header");
      m.reward.assign(m.states, std::vector<double>(m.actions, 0.0));
      m.next.assign(m.states, std::vector<std::size_t>(m.actions, 0));
      header = true;
      continue;
    }
    std::size_t s = 0, a = 0, n = 0;
    double r = 0.0;
    if (!(row >> s >> a >> r >> n) || s >= m.states || a >= m.actions || n >= m.states) {
      throw DataError(path.string() + ": bad toy MDP row '" + line + "'");
    }
    m.reward[s][a] = r;
    m.next[s][a] = n;
    ++rows;
  }
  if (!header || rows != m.states * m.actions) throw DataError(path.string() + ": incomplete toy MDP");
  return m;
}

}  // namespace ndrl
