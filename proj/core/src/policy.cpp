#include "ndrl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ndrl {

double EpsilonSchedule::at(std::size_t episode, std::size_t total_episodes) const {
  const double horizon = decay_fraction * static_cast<double>(total_episodes);
  if (horizon <= 0.0) return end;
  const double t = static_cast<double>(episode) / horizon;
  if (t >= 1.0 - 1e-12) return end;
  return start + (end - start) * t;
}

void EpsilonSchedule::validate() const {
  if (!(start >= 0.0 && start <= 1.0) || !(end >= 0.0 && end <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (!(decay_fraction >= 0.0 && decay_fraction <= 1.0)) {
    throw std::invalid_argument("epsilon decay fraction must lie in [0, 1]");
  }
}

void MixtureParams::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  if (!(alpha_mix >= 0.0 && alpha_mix <= 1.0)) throw std::invalid_argument("alpha_mix must lie in [0, 1]");
  if (!(sigma_ratio > 0.0)) throw std::invalid_argument("sigma ratio must be positive");
  epsilon_parent.validate();
  epsilon_child.validate();
}

double ActionDistribution::sum() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

ActionDistribution ActionDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform distribution over zero actions");
  return {std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

std::vector<std::size_t> candidate_set(std::span<const double> predicted_yields, double eta) {
  if (predicted_yields.empty()) throw std::invalid_argument("candidate_set: no predicted yields");
  double best = 0.0;
  for (double y : predicted_yields) {
    if (!(y >= 0.0)) throw std::invalid_argument("candidate_set: yields must be non-negative");
    best = std::max(best, y);
  }
  const double threshold = eta * best;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < predicted_yields.size(); ++i) {
    // The argmax always qualifies, even if eta * best rounds above it.
    if (predicted_yields[i] >= threshold || predicted_yields[i] == best) out.push_back(i);
  }
  return out;
}

std::size_t sample_candidate(std::span<const std::size_t> candidates, Rng& rng) {
  if (candidates.empty()) throw std::invalid_argument("sample_candidate: empty candidate set");
  return candidates[rng.index(candidates.size())];
}

ActionDistribution gaussian_probs(const ChildActionSpace& space, Amounts sigma) {
  if (!(sigma.irrigation > 0.0) || !(sigma.nitrogen > 0.0)) {
    throw std::invalid_argument("gaussian_probs: sigma must be positive");
  }
  const Amounts c = space.center();
  ActionDistribution dist;
  dist.probs.resize(ChildActionSpace::size());
  double total = 0.0;
  for (std::size_t k = 0; k < ChildActionSpace::size(); ++k) {
    const ChildAction a = space.at(k);
    const double di = (a.irrigation - c.irrigation) / sigma.irrigation;
    const double dn = (a.nitrogen - c.nitrogen) / sigma.nitrogen;
    dist.probs[k] = std::exp(-0.5 * (di * di + dn * dn));
    total += dist.probs[k];
  }
  for (double& p : dist.probs) p /= total;
  return dist;
}

ActionDistribution mixed_probs(const ActionDistribution& gauss, double alpha_mix) {
  if (!(alpha_mix >= 0.0 && alpha_mix <= 1.0)) throw std::invalid_argument("mixed_probs: alpha outside [0, 1]");
  if (gauss.probs.empty()) throw std::invalid_argument("mixed_probs: empty distribution");
  const double uniform = 1.0 / static_cast<double>(gauss.probs.size());
  ActionDistribution out;
  out.probs.reserve(gauss.probs.size());
  for (double p : gauss.probs) out.probs.push_back((1.0 - alpha_mix) * p + alpha_mix * uniform);
  return out;
}

std::size_t sample_index(const ActionDistribution& dist, Rng& rng) {
  if (dist.probs.empty()) throw std::invalid_argument("sample_index: empty distribution");
  const double u = rng.uniform() * dist.sum();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    acc += dist.probs[i];
    if (u < acc) return i;
  }
  // Rounding left u at the very top; return the last index with mass.
  for (std::size_t i = dist.probs.size(); i-- > 0;) {
    if (dist.probs[i] > 0.0) return i;
  }
  return dist.probs.size() - 1;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t select_child_action(std::span<const double> q_values, const ActionDistribution& dist, double epsilon,
                                Rng& rng) {
  if (q_values.size() != dist.probs.size()) {
    throw std::invalid_argument("select_child_action: q-values and distribution differ in size");
  }
  if (rng.uniform() < epsilon) return sample_index(dist, rng);
  return argmax(q_values);
}

std::size_t select_parent_action(std::span<const double> q_row,
                                 const std::function<std::vector<std::size_t>()>& candidates, double epsilon,
                                 Rng& rng) {
  if (rng.uniform() < epsilon) {
    const std::vector<std::size_t> set = candidates();
    if (set.empty()) throw std::invalid_argument("select_parent_action: empty candidate set");
    return sample_candidate(set, rng);
  }
  return argmax(q_row);
}

std::size_t select_parent_action(std::span<const double> q_row, std::span<const std::size_t> candidates,
                                 double epsilon, Rng& rng) {
  const std::vector<std::size_t> set(candidates.begin(), candidates.end());
  return select_parent_action(q_row, [&set] { return set; }, epsilon, rng);
}

}  // namespace ndrl
