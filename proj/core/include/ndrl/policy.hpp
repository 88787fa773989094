#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ndrl/rng.hpp"
#include "ndrl/spaces.hpp"

namespace ndrl {

/// Linear decay from `start` to `end` over the first `decay_fraction` of
/// training, then flat.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay_fraction = 0.7;

  double at(std::size_t episode, std::size_t total_episodes) const;
  void validate() const;
};

struct MixtureParams {
  double eta = 0.8;        // candidate threshold as a fraction of the best predicted yield
  double alpha_mix = 0.6;  // uniform share of the child exploration distribution
  double sigma_ratio = 0.5;  // sigma = delta * sigma_ratio per axis
  EpsilonSchedule epsilon_parent;
  EpsilonSchedule epsilon_child;

  Amounts sigma(const Amounts& delta) const {
    return {delta.irrigation * sigma_ratio, delta.nitrogen * sigma_ratio};
  }
  void validate() const;
};

struct ActionDistribution {
  std::vector<double> probs;

  double sum() const;
  static ActionDistribution uniform(std::size_t n);
};

/// Indices a with Y(a) >= eta * max Y, ascending. Throws
/// std::invalid_argument on an empty input or negative yields.
std::vector<std::size_t> candidate_set(std::span<const double> predicted_yields, double eta);

/// Uniform pick from a non-empty candidate list.
std::size_t sample_candidate(std::span<const std::size_t> candidates, Rng& rng);

/// Discrete truncated Gaussian over the 25 points, centred on the space's
/// center and normalized over the (possibly clipped) grid.
ActionDistribution gaussian_probs(const ChildActionSpace& space, Amounts sigma);

/// (1 - alpha) * p + alpha / n.
ActionDistribution mixed_probs(const ActionDistribution& gauss, double alpha_mix);

/// Draw an index from a distribution by inverse CDF.
std::size_t sample_index(const ActionDistribution& dist, Rng& rng);

/// First index of the maximum.
std::size_t argmax(std::span<const double> values);

/// Greedy with probability 1 - epsilon, else a draw from `dist`.
std::size_t select_child_action(std::span<const double> q_values, const ActionDistribution& dist,
                                double epsilon, Rng& rng);

/// Greedy over the full q row with probability 1 - epsilon, else a uniform
/// candidate. `candidates` is only invoked on the exploration branch.
std::size_t select_parent_action(std::span<const double> q_row,
                                 const std::function<std::vector<std::size_t>()>& candidates,
                                 double epsilon, Rng& rng);

std::size_t select_parent_action(std::span<const double> q_row, std::span<const std::size_t> candidates,
                                 double epsilon, Rng& rng);

}  // namespace ndrl
