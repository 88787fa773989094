#include "ndrl/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ndrl {

namespace {

std::size_t grid_levels(double range_max, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("parent grid step must be positive");
  if (!(range_max >= 0.0)) throw std::invalid_argument("parent grid range must be non-negative");
  const double levels = std::round(range_max / step);
  if (std::abs(levels * step - range_max) > 1e-9 * std::max(1.0, range_max)) {
    throw std::invalid_argument("parent grid range " + std::to_string(range_max) + " is not a multiple of step " +
                                std::to_string(step));
  }
  return static_cast<std::size_t>(levels) + 1;
}

std::array<double, kChildAxisPoints> axis(double center, double delta, double upper) {
  const double lo = std::max(center - delta, 0.0);
  const double hi = std::min(center + delta, upper);
  std::array<double, kChildAxisPoints> points{};
  const double half = static_cast<double>(kChildAxisPoints - 1) / 2.0;
  if (lo == center - delta && hi == center + delta) {
    for (std::size_t k = 0; k < kChildAxisPoints; ++k) {
      points[k] = center + delta * (static_cast<double>(k) - half) / half;
    }
    return points;
  }
  const double span = hi - lo;
  for (std::size_t k = 0; k < kChildAxisPoints; ++k) {
    points[k] = lo + span * static_cast<double>(k) / static_cast<double>(kChildAxisPoints - 1);
  }
  points.back() = hi;
  return points;
}

}  // namespace

ChildActionSpace::ChildActionSpace(Amounts center, Amounts delta, Amounts bounds)
    : center_(center), delta_(delta), bounds_(bounds) {
  if (delta.irrigation < 0.0 || delta.nitrogen < 0.0) {
    throw std::invalid_argument("child action space: delta must be non-negative");
  }
  if (center.irrigation < 0.0 || center.nitrogen < 0.0 || center.irrigation > bounds.irrigation ||
      center.nitrogen > bounds.nitrogen) {
    throw std::invalid_argument("child action space: center (" + std::to_string(center.irrigation) + ", " +
                                std::to_string(center.nitrogen) + ") outside bounds");
  }
  irrigation_axis_ = axis(center.irrigation, delta.irrigation, bounds.irrigation);
  nitrogen_axis_ = axis(center.nitrogen, delta.nitrogen, bounds.nitrogen);
}

ChildAction ChildActionSpace::at(std::size_t index) const {
  if (index >= kChildActions) throw std::out_of_range("child action index " + std::to_string(index));
  return {irrigation_axis_[index / kChildAxisPoints], nitrogen_axis_[index % kChildAxisPoints], index};
}

bool ChildActionSpace::contains(const ChildAction& action) const {
  if (action.index >= kChildActions) return false;
  const ChildAction expected = at(action.index);
  return expected.irrigation == action.irrigation && expected.nitrogen == action.nitrogen;
}

std::vector<ParentAction> parent_action_grid(double range_max, double step) {
  const std::size_t levels = grid_levels(range_max, step);
  std::vector<ParentAction> grid;
  grid.reserve(levels * levels * levels * levels);
  for (std::size_t a = 0; a < levels; ++a)
    for (std::size_t b = 0; b < levels; ++b)
      for (std::size_t c = 0; c < levels; ++c)
        for (std::size_t d = 0; d < levels; ++d) {
          grid.push_back({static_cast<double>(a) * step, static_cast<double>(b) * step,
                          static_cast<double>(c) * step, static_cast<double>(d) * step});
        }
  return grid;
}

std::size_t parent_action_index(const ParentAction& action, double range_max, double step) {
  const std::size_t levels = grid_levels(range_max, step);
  std::size_t index = 0;
  for (double v : {action.i1, action.n1, action.i2, action.n2}) {
    const double level = std::round(v / step);
    if (level < 0 || level >= static_cast<double>(levels) || std::abs(level * step - v) > 1e-9) {
      throw std::invalid_argument("amount " + std::to_string(v) + " is not on the parent grid");
    }
    index = index * levels + static_cast<std::size_t>(level);
  }
  return index;
}

ChildActionSpace child_action_space(Amounts center, Amounts delta, Amounts bounds) {
  return ChildActionSpace(center, delta, bounds);
}

ChildFeatures encode_child_state(const ChildState& state, int season_start_doy, int season_length) {
  const int doy = state.day % 1000;
  double position = season_length > 0
                        ? static_cast<double>(doy - season_start_doy) / static_cast<double>(season_length)
                        : 0.0;
  position = std::clamp(position, 0.0, 1.0);
  const double laid = std::clamp(state.laid / kLaiNormalization, 0.0, 1.0);
  return {position, static_cast<double>(state.wsf), static_cast<double>(state.nsf), laid};
}

int binarize_stress(double raw, double threshold) {
  if (!(raw >= 0.0 && raw <= 1.0)) {
    throw std::invalid_argument("stress value " + std::to_string(raw) + " outside [0, 1]");
  }
  return raw > threshold ? 1 : 0;
}

double quantize_to_grid(double amount, double range_max, double step) {
  const double snapped = std::round(amount / step) * step;
  return std::clamp(snapped, 0.0, range_max);
}

}  // namespace ndrl
