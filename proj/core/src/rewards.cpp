#include "ndrl/rewards.hpp"

#include <stdexcept>

namespace ndrl {

void Budget::validate() const {
  if (!(i_total > 0.0) || !(n_total > 0.0)) throw std::invalid_argument("budget totals must be positive");
}

namespace {
double average(Resource x, const Budget& budget) {
  return x == Resource::Irrigation ? budget.avg_i() : budget.avg_n();
}
}  // namespace

int indicator_penalty(const StressContext& ctx, Resource x, const Budget& budget) {
  const double v = ctx.amount(x);
  const double avg = average(x, budget);
  const bool wsf = ctx.wsf > 0;
  const bool nsf = ctx.nsf > 0;
  const bool fires = (!wsf && !nsf && v > avg) || (wsf && nsf && v < avg) || ((!wsf || !nsf) && v > avg);
  return fires ? 1 : 0;
}

int indicator_reward(const StressContext& ctx, Resource x, const Budget& budget) {
  const double v = ctx.amount(x);
  const double avg = average(x, budget);
  const bool wsf = ctx.wsf > 0;
  const bool nsf = ctx.nsf > 0;
  const bool fires = (wsf && nsf && v > avg) || (wsf && v > avg) || (nsf && v > avg);
  return fires ? 1 : 0;
}

double child_reward(double hwam, const StressContext& ctx, const RewardWeights& weights, const Budget& budget) {
  double r = hwam;
  r += weights.w_i * (indicator_reward(ctx, Resource::Irrigation, budget) -
                      indicator_penalty(ctx, Resource::Irrigation, budget));
  r += weights.w_n * (indicator_reward(ctx, Resource::Nitrogen, budget) -
                      indicator_penalty(ctx, Resource::Nitrogen, budget));
  return r;
}

double parent_reward(double cum_i, double cum_n, double h_c, double h_p, double q_cmax, const Budget& budget) {
  if (cum_i >= budget.i_total || cum_n >= budget.n_total) return kBudgetPenalty;
  if (h_c <= h_p) return 0.0;
  return q_cmax;
}

}  // namespace ndrl
