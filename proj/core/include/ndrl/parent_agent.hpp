#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ndrl/spaces.hpp"

namespace ndrl {

/// Table key of a parent state: the cycle and the previous amounts, rounded
/// to whole units. Dates are implied by the cycle on a fixed calendar.
struct ParentStateKey {
  int cycle = 1;
  std::array<int, 4> p_act{};

  auto operator<=>(const ParentStateKey&) const = default;
};

ParentStateKey key_of(const ParentState& state);

/// Tabular action values over (parent state, parent-grid action index).
class QTable {
 public:
  explicit QTable(double lr = 0.1, double gamma = 0.95);

  double lr() const { return lr_; }
  double gamma() const { return gamma_; }

  /// Stored value or 0. Never inserts.
  double lookup(const ParentStateKey& state, std::size_t action) const;
  void store(const ParentStateKey& state, std::size_t action, double value);

  /// Values for actions 0..n-1 of a state.
  std::vector<double> row(const ParentStateKey& state, std::size_t n_actions) const;
  /// max over `actions`; 0 for an empty list.
  double max_value(const ParentStateKey& state, std::span<const std::size_t> actions) const;

  /// One Q-learning backup. `next` empty means terminal (no bootstrap).
  /// Returns the new value of (state, action).
  double update(const ParentStateKey& state, std::size_t action, double reward,
                const std::optional<ParentStateKey>& next, std::span<const std::size_t> next_actions);

  std::size_t size() const { return entries_.size(); }

  /// Sorted text dump: `cycle i1 n1 i2 n2 action value` per line, after a
  /// header carrying lr and gamma. Values round-trip exactly.
  void save(const std::filesystem::path& path) const;
  static QTable load(const std::filesystem::path& path);

  bool operator==(const QTable&) const = default;

 private:
  double lr_;
  double gamma_;
  std::map<std::pair<ParentStateKey, std::size_t>, double> entries_;
};

}  // namespace ndrl
