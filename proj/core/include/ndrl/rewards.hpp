#pragma once

#include "ndrl/weather.hpp"

namespace ndrl {

/// Seasonal resource budget; the control treatment's totals by default.
struct Budget {
  double i_total = 537.0;  // mm
  double n_total = 250.0;  // kg/ha

  double avg_i() const { return i_total / static_cast<double>(kEventCount); }
  double avg_n() const { return n_total / static_cast<double>(kEventCount); }
  void validate() const;
};

struct RewardWeights {
  double w_i = 100.0;
  double w_n = 100.0;
};

enum class Resource { Irrigation, Nitrogen };

/// Binary stress flags at the decision date plus the amounts applied.
struct StressContext {
  int wsf = 0;
  int nsf = 0;
  double applied_i = 0.0;
  double applied_n = 0.0;

  double amount(Resource x) const { return x == Resource::Irrigation ? applied_i : applied_n; }
};

inline constexpr double kBudgetPenalty = -5370.0;

// The three clauses of each indicator are evaluated as written, so they can
// overlap: with WSF > 0, NSF = 0 and x above average both the penalty
// (third clause) and the reward (second clause) fire and cancel in
// child_reward.

/// 1 iff (WSF=0 and NSF=0 and x>avg) or (WSF>0 and NSF>0 and x<avg)
/// or ((WSF=0 or NSF=0) and x>avg).
int indicator_penalty(const StressContext& ctx, Resource x, const Budget& budget);

/// 1 iff (WSF>0 and NSF>0 and x>avg) or (WSF>0 and x>avg) or (NSF>0 and x>avg).
int indicator_reward(const StressContext& ctx, Resource x, const Budget& budget);

/// hwam + sum over I, N of w_x * (reward_x - penalty_x).
double child_reward(double hwam, const StressContext& ctx, const RewardWeights& weights, const Budget& budget);

/// Budget violation first (-5370), then the ineffective-child branch (0 when
/// h_c <= h_p), otherwise q_cmax.
double parent_reward(double cum_i, double cum_n, double h_c, double h_p, double q_cmax, const Budget& budget);

}  // namespace ndrl
