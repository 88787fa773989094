#include "ndrl/child_agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ndrl/error.hpp"

namespace ndrl {

QNetwork::QNetwork(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("QNetwork: need input and output sizes");
  for (std::size_t s : sizes_) {
    if (s == 0) throw std::invalid_argument("QNetwork: layer sizes must be positive");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

QNetwork QNetwork::glorot(std::vector<std::size_t> layer_sizes, Rng& rng) {
  QNetwork net(std::move(layer_sizes));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const std::size_t in = net.sizes_[l];
    const std::size_t out = net.sizes_[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    double* w = net.params_.data() + net.weight_offset(l);
    for (std::size_t k = 0; k < in * out; ++k) w[k] = rng.uniform(-limit, limit);
  }
  return net;
}

double& QNetwork::weight(std::size_t layer, std::size_t row, std::size_t col) {
  return params_.at(weight_offset(layer) + row * sizes_.at(layer) + col);
}

double& QNetwork::bias(std::size_t layer, std::size_t row) {
  return params_.at(bias_offset(layer) + row);
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
  if (input.size() != input_size()) throw std::invalid_argument("QNetwork::forward: input size mismatch");
  std::vector<double> a(input.begin(), input.end());
  std::vector<double> z;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    z.assign(out, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      double acc = b[r];
      const double* wr = w + r * in;
      for (std::size_t c = 0; c < in; ++c) acc += wr[c] * a[c];
      z[r] = acc;
    }
    if (l + 1 < layer_count()) {
      for (double& v : z) v = std::max(0.0, v);
    }
    a.swap(z);
  }
  return a;
}

double QNetwork::loss_and_gradient(std::span<const std::vector<double>> inputs, std::span<const std::size_t> actions,
                                   std::span<const double> targets, std::vector<double>& gradient) const {
  const std::size_t n = inputs.size();
  if (n == 0 || actions.size() != n || targets.size() != n) {
    throw std::invalid_argument("QNetwork::loss_and_gradient: inconsistent batch");
  }
  gradient.assign(params_.size(), 0.0);
  const std::size_t layers = layer_count();
  // activations[l] is the input to layer l; activations[layers] is the output.
  std::vector<std::vector<double>> activations(layers + 1);
  std::vector<double> delta;
  std::vector<double> prev_delta;
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t s = 0; s < n; ++s) {
    if (inputs[s].size() != input_size()) throw std::invalid_argument("QNetwork: input size mismatch");
    if (actions[s] >= output_size()) throw std::invalid_argument("QNetwork: action index out of range");
    activations[0] = inputs[s];
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t in = sizes_[l];
      const std::size_t out = sizes_[l + 1];
      const double* w = params_.data() + weight_offset(l);
      const double* b = params_.data() + bias_offset(l);
      auto& next = activations[l + 1];
      next.assign(out, 0.0);
      for (std::size_t r = 0; r < out; ++r) {
        double acc = b[r];
        for (std::size_t c = 0; c < in; ++c) acc += w[r * in + c] * activations[l][c];
        next[r] = (l + 1 < layers) ? std::max(0.0, acc) : acc;
      }
    }
    const double err = activations[layers][actions[s]] - targets[s];
    loss += err * err * inv_n;

    delta.assign(output_size(), 0.0);
    delta[actions[s]] = 2.0 * err * inv_n;
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = sizes_[l];
      const std::size_t out = sizes_[l + 1];
      const double* w = params_.data() + weight_offset(l);
      double* gw = gradient.data() + weight_offset(l);
      double* gb = gradient.data() + bias_offset(l);
      const auto& a_in = activations[l];
      for (std::size_t r = 0; r < out; ++r) {
        const double d = delta[r];
        if (d == 0.0) continue;
        gb[r] += d;
        for (std::size_t c = 0; c < in; ++c) gw[r * in + c] += d * a_in[c];
      }
      if (l == 0) break;
      prev_delta.assign(in, 0.0);
      for (std::size_t r = 0; r < out; ++r) {
        const double d = delta[r];
        if (d == 0.0) continue;
        for (std::size_t c = 0; c < in; ++c) prev_delta[c] += w[r * in + c] * d;
      }
      // ReLU derivative: the stored activation is positive iff the unit was active.
      for (std::size_t c = 0; c < in; ++c) {
        if (a_in[c] <= 0.0) prev_delta[c] = 0.0;
      }
      delta.swap(prev_delta);
    }
  }
  return loss;
}

void QNetwork::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write network checkpoint");
  out << "ndrl-qnet 1\nlayers " << sizes_.size();
  for (std::size_t s : sizes_) out << ' ' << s;
  out << '\n';
  char buf[40];
  for (double p : params_) {
    std::snprintf(buf, sizeof buf, "%.17g\n", p);
    out << buf;
  }
}

QNetwork QNetwork::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open network checkpoint");
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "ndrl-qnet") throw DataError(path.string() + ": not a network checkpoint");
  if (version != 1) throw DataError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> count) || word != "layers" || count < 2 || count > 64) {
    throw DataError(path.string() + ": bad layer header");
  }
  std::vector<std::size_t> sizes(count);
  for (auto& s : sizes) {
    if (!(in >> s)) throw DataError(path.string() + ": bad layer sizes");
  }
  QNetwork net(sizes);
  std::string token;
  for (double& p : net.params_) {
    if (!(in >> token)) throw DataError(path.string() + ": truncated parameters");
    try {
      p = std::stod(token);
    } catch (const std::exception&) {
      throw DataError(path.string() + ": bad parameter '" + token + "'");
    }
  }
  if (in >> token) throw DataError(path.string() + ": trailing data after parameters");
  return net;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), rng_(Rng::stream(seed, "replay")) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(const Transition& t) {
  if (items_.size() < capacity_) {
    items_.push_back(t);
    return;
  }
  items_[head_] = t;
  head_ = (head_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n) {
  if (n > items_.size()) {
    throw std::invalid_argument("ReplayBuffer: cannot sample " + std::to_string(n) + " from " +
                                std::to_string(items_.size()) + " transitions");
  }
  // Partial Fisher-Yates over slot indices.
  std::vector<std::size_t> slots(items_.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng_.index(slots.size() - i);
    std::swap(slots[i], slots[j]);
    out.push_back(items_[slots[i]]);
  }
  return out;
}

std::vector<Transition> ReplayBuffer::contents() const {
  std::vector<Transition> out;
  out.reserve(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) out.push_back(items_[(head_ + i) % items_.size()]);
  return out;
}

void DqnHyperparams::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("dqn: lr must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("dqn: gamma must lie in [0, 1]");
  if (batch_size == 0 || target_sync_interval == 0 || buffer_capacity == 0 || hidden == 0) {
    throw std::invalid_argument("dqn: batch size, sync interval, capacity and hidden width must be positive");
  }
  if (batch_size > buffer_capacity) throw std::invalid_argument("dqn: batch size exceeds buffer capacity");
}

std::vector<double> td_targets(std::span<const Transition> batch, const QNetwork& target_net, double gamma) {
  if (batch.empty()) throw std::invalid_argument("td_targets: empty batch");
  std::vector<double> targets;
  targets.reserve(batch.size());
  for (const auto& t : batch) {
    if (t.terminal) {
      targets.push_back(t.r);
      continue;
    }
    const auto q = target_net.forward(t.s_next);
    targets.push_back(t.r + gamma * *std::max_element(q.begin(), q.end()));
  }
  return targets;
}

double train_batch(QNetwork& net, const QNetwork& target_net, std::span<const Transition> batch,
                   const DqnHyperparams& hyper) {
  const auto targets = td_targets(batch, target_net, hyper.gamma);
  std::vector<std::vector<double>> inputs;
  std::vector<std::size_t> actions;
  inputs.reserve(batch.size());
  actions.reserve(batch.size());
  for (const auto& t : batch) {
    inputs.emplace_back(t.s.begin(), t.s.end());
    actions.push_back(t.a);
  }
  std::vector<double> gradient;
  const double loss = net.loss_and_gradient(inputs, actions, targets, gradient);
  if (!std::isfinite(loss) || loss > kDivergenceLimit) {
    throw DivergenceError("child network diverged: loss " + std::to_string(loss));
  }
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= hyper.lr * gradient[i];
  return loss;
}

void sync_target(const QNetwork& net, QNetwork& target_net) {
  if (net.layer_sizes() != target_net.layer_sizes()) {
    throw std::invalid_argument("sync_target: architecture mismatch");
  }
  target_net = net;
}

DqnAgent::DqnAgent(std::size_t n_actions, const DqnHyperparams& hyper, double reward_scale, std::uint64_t seed)
    : hyper_(hyper),
      reward_scale_(reward_scale),
      online_([&] {
        hyper.validate();
        Rng init = Rng::stream(seed, "qnet-init");
        return QNetwork::glorot({4, hyper.hidden, hyper.hidden, n_actions}, init);
      }()),
      target_(online_),
      buffer_(hyper.buffer_capacity, seed) {
  if (!(reward_scale > 0.0)) throw std::invalid_argument("DqnAgent: reward scale must be positive");
}

std::vector<double> DqnAgent::q_values(const ChildFeatures& features) const {
  auto q = online_.forward(features);
  for (double& v : q) v *= reward_scale_;
  return q;
}

void DqnAgent::remember(const ChildFeatures& s, std::size_t a, double reward, const ChildFeatures& s_next,
                        bool terminal) {
  buffer_.push({s, a, reward / reward_scale_, s_next, terminal});
}

bool DqnAgent::maybe_train() {
  if (buffer_.size() < hyper_.batch_size) return false;
  const auto batch = buffer_.sample(hyper_.batch_size);
  last_loss_ = train_batch(online_, target_, batch, hyper_);
  ++updates_;
  if (updates_ % hyper_.target_sync_interval == 0) sync_target(online_, target_);
  return true;
}

}  // namespace ndrl
