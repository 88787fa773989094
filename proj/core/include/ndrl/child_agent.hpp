#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ndrl/rng.hpp"
#include "ndrl/spaces.hpp"

namespace ndrl {

/// Fully connected Q-network: affine layers with ReLU between them and an
/// identity output. Parameters live in one flat buffer, layer by layer,
/// each layer as a row-major (out x in) weight matrix followed by its bias.
class QNetwork {
 public:
  /// Zero-initialized network. Needs at least an input and an output size.
  explicit QNetwork(std::vector<std::size_t> layer_sizes);

  /// Uniform init in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static QNetwork glorot(std::vector<std::size_t> layer_sizes, Rng& rng);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return sizes_.size() - 1; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  /// Weight (row, col) and bias views of layer l.
  double& weight(std::size_t layer, std::size_t row, std::size_t col);
  double& bias(std::size_t layer, std::size_t row);

  std::vector<double> forward(std::span<const double> input) const;

  /// Mean over samples of (target - Q(s, a))^2 and its gradient with respect
  /// to every parameter (same layout as parameters()).
  double loss_and_gradient(std::span<const std::vector<double>> inputs,
                           std::span<const std::size_t> actions, std::span<const double> targets,
                           std::vector<double>& gradient) const;

  /// Text checkpoint: magic + version line, layer sizes, then every
  /// parameter in %.17g. load(save(x)) reproduces x exactly.
  void save(const std::filesystem::path& path) const;
  static QNetwork load(const std::filesystem::path& path);

  bool operator==(const QNetwork&) const = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer + 1] * sizes_[layer];
  }

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

struct Transition {
  ChildFeatures s{};
  std::size_t a = 0;
  double r = 0.0;
  ChildFeatures s_next{};
  bool terminal = false;
};

/// FIFO ring of transitions with its own sampling stream.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::uint64_t seed);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }
  void push(const Transition& t);
  /// n distinct stored transitions, uniformly. Throws std::invalid_argument
  /// if fewer than n are stored.
  std::vector<Transition> sample(std::size_t n);
  /// Stored transitions, oldest first.
  std::vector<Transition> contents() const;

 private:
  std::size_t capacity_;
  std::vector<Transition> items_;
  std::size_t head_ = 0;  // slot of the oldest item once full
  Rng rng_;
};

struct DqnHyperparams {
  double lr = 1e-3;
  double gamma = 0.95;
  std::size_t batch_size = 32;
  std::size_t target_sync_interval = 100;
  std::size_t buffer_capacity = 10000;
  std::size_t hidden = 64;

  void validate() const;
};

inline constexpr double kDivergenceLimit = 1e12;

/// r + gamma * max_a' Q(s', a'; target), or r for terminal samples.
std::vector<double> td_targets(std::span<const Transition> batch, const QNetwork& target_net, double gamma);

/// One plain SGD step on the mean squared TD error. Returns the loss before
/// the step. Throws DivergenceError if the loss is non-finite or above
/// kDivergenceLimit; parameters are left untouched in that case.
double train_batch(QNetwork& net, const QNetwork& target_net, std::span<const Transition> batch,
                   const DqnHyperparams& hyper);

/// target <- deep copy of net. Throws std::invalid_argument if the layer
/// sizes differ.
void sync_target(const QNetwork& net, QNetwork& target_net);

/// Online/target pair plus replay, trained on rewards divided by
/// `reward_scale`. q_values() reports values back in reward units.
class DqnAgent {
 public:
  DqnAgent(std::size_t n_actions, const DqnHyperparams& hyper, double reward_scale, std::uint64_t seed);

  std::vector<double> q_values(const ChildFeatures& features) const;
  /// Store a transition (reward in natural units).
  void remember(const ChildFeatures& s, std::size_t a, double reward, const ChildFeatures& s_next,
                bool terminal);
  /// Train once if the buffer holds a batch. Returns true if a step was taken.
  bool maybe_train();

  const QNetwork& online() const { return online_; }
  const QNetwork& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  std::size_t updates() const { return updates_; }
  double last_loss() const { return last_loss_; }

 private:
  DqnHyperparams hyper_;
  double reward_scale_;
  QNetwork online_;
  QNetwork target_;
  ReplayBuffer buffer_;
  std::size_t updates_ = 0;
  double last_loss_ = 0.0;
};

}  // namespace ndrl
