#include "ndrl/parent_agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ndrl/error.hpp"

namespace ndrl {

ParentStateKey key_of(const ParentState& state) {
  const auto& a = state.p_act_dis;
  return {state.cycle_index,
          {static_cast<int>(std::lround(a.i1)), static_cast<int>(std::lround(a.n1)),
           static_cast<int>(std::lround(a.i2)), static_cast<int>(std::lround(a.n2))}};
}

QTable::QTable(double lr, double gamma) : lr_(lr), gamma_(gamma) {
  if (!(lr >= 0.0 && lr <= 1.0)) throw std::invalid_argument("QTable: learning rate must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("QTable: gamma must lie in [0, 1]");
}

double QTable::lookup(const ParentStateKey& state, std::size_t action) const {
  auto it = entries_.find({state, action});
  return it == entries_.end() ? 0.0 : it->second;
}

void QTable::store(const ParentStateKey& state, std::size_t action, double value) {
  entries_[{state, action}] = value;
}

std::vector<double> QTable::row(const ParentStateKey& state, std::size_t n_actions) const {
  std::vector<double> out(n_actions, 0.0);
  auto it = entries_.lower_bound({state, 0});
  for (; it != entries_.end() && it->first.first == state; ++it) {
    if (it->first.second < n_actions) out[it->first.second] = it->second;
  }
  return out;
}

double QTable::max_value(const ParentStateKey& state, std::span<const std::size_t> actions) const {
  if (actions.empty()) return 0.0;
  double best = lookup(state, actions.front());
  for (std::size_t a : actions.subspan(1)) best = std::max(best, lookup(state, a));
  return best;
}

double QTable::update(const ParentStateKey& state, std::size_t action, double reward,
                      const std::optional<ParentStateKey>& next, std::span<const std::size_t> next_actions) {
  const double bootstrap = next ? max_value(*next, next_actions) : 0.0;
  const double current = lookup(state, action);
  const double updated = current + lr_ * (reward + gamma_ * bootstrap - current);
  store(state, action, updated);
  return updated;
}

void QTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write q-table");
  out.precision(17);
  out << "# ndrl-qtable v1 lr " << lr_ << " gamma " << gamma_ << '\n';
  out << "# cycle i1 n1 i2 n2 action value\n";
  for (const auto& [key, value] : entries_) {
    const auto& [s, a] = key;
    out << s.cycle << ' ' << s.p_act[0] << ' ' << s.p_act[1] << ' ' << s.p_act[2] << ' ' << s.p_act[3] << ' ' << a
        << ' ' << value << '\n';
  }
}

QTable QTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open q-table");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty q-table file");
  std::istringstream head(line);
  std::string hash, magic, version, lr_word, gamma_word;
  double lr = 0.0, gamma = 0.0;
  if (!(head >> hash >> magic >> version >> lr_word >> lr >> gamma_word >> gamma) || magic != "ndrl-qtable" ||
      version != "v1") {
    throw DataError(path.string() + ": not an ndrl q-table");
  }
  QTable table(lr, gamma);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    ParentStateKey key;
    std::size_t action = 0;
    double value = 0.0;
    if (!(row >> key.cycle >> key.p_act[0] >> key.p_act[1] >> key.p_act[2] >> key.p_act[3] >> action >> value)) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": malformed q-table row");
    }
    table.store(key, action, value);
  }
  return table;
}

}  // namespace ndrl
