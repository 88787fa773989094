#include "ndrl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "ndrl/error.hpp"

namespace ndrl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double as_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t as_count(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("config key '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}


struct Key {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Member>
Key number(Member member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) { member(c) = as_double(k, v); },
          [member](const RunConfig& c) { return format_number(member(c)); }};
}

template <typename Member>
Key count(Member member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) {
            member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(as_count(k, v));
          },
          [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

#define NDRL_FIELD(expr) [](auto& c) -> auto& { return expr; }

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table{
      {"year_profile",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.year_profile = parse_profile(v); },
        [](const RunConfig& c) { return std::string(profile_name(c.year_profile)); }}},
      {"seed", count(NDRL_FIELD(c.seed))},
      {"weather_seed", count(NDRL_FIELD(c.weather_seed))},
      {"episodes", count(NDRL_FIELD(c.episodes))},
      {"eta", number(NDRL_FIELD(c.mixture.eta))},
      {"alpha_mix", number(NDRL_FIELD(c.mixture.alpha_mix))},
      {"sigma_ratio", number(NDRL_FIELD(c.mixture.sigma_ratio))},
      {"epsilon_parent_start", number(NDRL_FIELD(c.mixture.epsilon_parent.start))},
      {"epsilon_parent_end", number(NDRL_FIELD(c.mixture.epsilon_parent.end))},
      {"epsilon_parent_decay", number(NDRL_FIELD(c.mixture.epsilon_parent.decay_fraction))},
      {"epsilon_child_start", number(NDRL_FIELD(c.mixture.epsilon_child.start))},
      {"epsilon_child_end", number(NDRL_FIELD(c.mixture.epsilon_child.end))},
      {"epsilon_child_decay", number(NDRL_FIELD(c.mixture.epsilon_child.decay_fraction))},
      {"lr_parent", number(NDRL_FIELD(c.lr_parent))},
      {"gamma", number(NDRL_FIELD(c.gamma_parent))},
      {"lr_child", number(NDRL_FIELD(c.dqn.lr))},
      {"gamma_child", number(NDRL_FIELD(c.dqn.gamma))},
      {"batch_size", count(NDRL_FIELD(c.dqn.batch_size))},
      {"buffer_capacity", count(NDRL_FIELD(c.dqn.buffer_capacity))},
      {"target_sync", count(NDRL_FIELD(c.dqn.target_sync_interval))},
      {"hidden", count(NDRL_FIELD(c.dqn.hidden))},
      {"reward_scale", number(NDRL_FIELD(c.reward_scale))},
      {"i_total", number(NDRL_FIELD(c.budget.i_total))},
      {"n_total", number(NDRL_FIELD(c.budget.n_total))},
      {"w_i", number(NDRL_FIELD(c.weights.w_i))},
      {"w_n", number(NDRL_FIELD(c.weights.w_n))},
      {"parent_max", number(NDRL_FIELD(c.parent_max))},
      {"parent_step", number(NDRL_FIELD(c.parent_step))},
      {"delta", number(NDRL_FIELD(c.delta))},
      {"soil_params",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.soil = load_soil_params(v); },
        [](const RunConfig&) { return std::string(); }}},
      {"out",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
        [](const RunConfig& c) { return c.out_dir.string(); }}},
  };
  return table;
}

#undef NDRL_FIELD

}  // namespace

std::string format_number(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void RunConfig::validate() const {
  mixture.validate();
  dqn.validate();
  budget.validate();
  soil.validate();
  if (!(lr_parent >= 0.0 && lr_parent <= 1.0)) throw std::invalid_argument("lr_parent must lie in [0, 1]");
  if (!(gamma_parent >= 0.0 && gamma_parent <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(reward_scale > 0.0)) throw std::invalid_argument("reward_scale must be positive");
  if (weights.w_i < 0.0 || weights.w_n < 0.0) throw std::invalid_argument("reward weights must be non-negative");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  // Throws on a bad grid spec.
  (void)parent_action_grid(parent_max, parent_step);
}

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // blank, comment or TOML table header
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(origin + ": line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw DataError(origin + ": line " + std::to_string(line_no) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_key_values(text.str(), path.string());
}

void apply_key_values(RunConfig& config, const KeyValues& values) {
  const auto& table = keys();
  for (const auto& [key, value] : values) {
    auto it = table.find(key);
    if (it == table.end()) throw std::invalid_argument("unknown config key '" + key + "'");
    it->second.set(config, key, value);
  }
}

KeyValues to_key_values(const RunConfig& config) {
  KeyValues kv;
  for (const auto& [key, k] : keys()) {
    if (key == "soil_params") continue;
    kv[key] = k.get(config);
  }
  return kv;
}

}  // namespace ndrl
