#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <vector>

namespace ndrl {

/// An (irrigation mm, nitrogen kg/ha) pair.
struct Amounts {
  double irrigation = 0.0;
  double nitrogen = 0.0;

  auto operator<=>(const Amounts&) const = default;
};

/// Macro action for one two-date cycle: amounts on the first and second date.
struct ParentAction {
  double i1 = 0.0;
  double n1 = 0.0;
  double i2 = 0.0;
  double n2 = 0.0;

  Amounts first() const { return {i1, n1}; }
  Amounts second() const { return {i2, n2}; }
  Amounts at(std::size_t micro_step) const { return micro_step == 0 ? first() : second(); }

  auto operator<=>(const ParentAction&) const = default;
};

struct ParentState {
  std::array<int, 2> days{};  // YYDDD of the cycle's two event dates
  ParentAction p_act_dis;     // amounts previously applied, on the parent grid
  int cycle_index = 1;        // 1..6
};

/// Observation the child agent acts on at one event date.
struct ChildState {
  int day = 0;        // YYDDD
  int wsf = 0;        // 1 = water stress
  int nsf = 0;        // 1 = nitrogen stress
  double laid = 0.0;  // leaf area index
};

struct ChildAction {
  double irrigation = 0.0;
  double nitrogen = 0.0;
  std::size_t index = 0;
};

inline constexpr std::size_t kChildAxisPoints = 5;
inline constexpr std::size_t kChildActions = kChildAxisPoints * kChildAxisPoints;
inline constexpr double kLaiNormalization = 6.0;

/// The 5x5 grid of refinements around a daily macro action, clipped to the
/// parent bounds. Index = irrigation_index * 5 + nitrogen_index.
class ChildActionSpace {
 public:
  ChildActionSpace(Amounts center, Amounts delta, Amounts bounds);

  const Amounts& center() const { return center_; }
  const Amounts& delta() const { return delta_; }
  const Amounts& bounds() const { return bounds_; }
  const std::array<double, kChildAxisPoints>& irrigation_axis() const { return irrigation_axis_; }
  const std::array<double, kChildAxisPoints>& nitrogen_axis() const { return nitrogen_axis_; }

  static constexpr std::size_t size() { return kChildActions; }
  ChildAction at(std::size_t index) const;
  bool contains(const ChildAction& action) const;

 private:
  Amounts center_;
  Amounts delta_;
  Amounts bounds_;
  std::array<double, kChildAxisPoints> irrigation_axis_{};
  std::array<double, kChildAxisPoints> nitrogen_axis_{};
};

/// Cartesian product {0, step, ..., range_max}^4 in lexicographic
/// (i1, n1, i2, n2) order. Throws std::invalid_argument if step <= 0 or
/// range_max is not a multiple of step.
std::vector<ParentAction> parent_action_grid(double range_max, double step);

/// Position of an on-grid action in parent_action_grid(range_max, step).
std::size_t parent_action_index(const ParentAction& action, double range_max, double step);

/// Throws std::invalid_argument if center lies outside [0, bounds].
ChildActionSpace child_action_space(Amounts center, Amounts delta, Amounts bounds);

using ChildFeatures = std::array<double, 4>;

/// (season position, wsf, nsf, laid / 6 clipped to 1).
ChildFeatures encode_child_state(const ChildState& state, int season_start_doy, int season_length);

/// 1 if raw > threshold else 0. Throws std::invalid_argument if raw is outside [0, 1].
int binarize_stress(double raw, double threshold = 0.0);

/// Snap an amount to the nearest multiple of step within [0, range_max].
double quantize_to_grid(double amount, double range_max, double step);

}  // namespace ndrl
