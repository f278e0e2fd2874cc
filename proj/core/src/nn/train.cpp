#include "gaitlrp/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gaitlrp/error.hpp"
#include "gaitlrp/nn/loss.hpp"

namespace gaitlrp::nn {
namespace {

void apply_update(Network& network, const Gradients& grads, double step, bool use_bias) {
  auto& layers = network.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Tensor* w = nullptr;
    Tensor* b = nullptr;
    if (auto* c = std::get_if<Conv1D>(&layers[i])) {
      w = &c->weight;
      b = &c->bias;
    } else if (auto* d = std::get_if<Dense>(&layers[i])) {
      w = &d->weight;
      b = &d->bias;
    } else {
      continue;
    }
    auto wd = w->data();
    const auto gw = grads.weight[i].data();
    for (std::size_t j = 0; j < wd.size(); ++j) wd[j] -= step * gw[j];
    if (use_bias) {
      auto bd = b->data();
      const auto gb = grads.bias[i].data();
      for (std::size_t j = 0; j < bd.size(); ++j) bd[j] -= step * gb[j];
    }
  }
}

void zero_biases(Network& network) {
  for (Layer& l : network.layers()) {
    if (auto* c = std::get_if<Conv1D>(&l)) c->bias.fill(0.0);
    if (auto* d = std::get_if<Dense>(&l)) d->bias.fill(0.0);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw std::invalid_argument("learning rate must be finite and >= 0");
  }
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
}

TrainResult train(Network& network, const std::vector<Tensor>& samples,
                  const std::vector<int>& labels, const TrainConfig& config) {
  config.validate();
  if (samples.empty()) throw std::invalid_argument("no training samples");
  if (samples.size() != labels.size()) {
    throw std::invalid_argument("sample and label counts differ");
  }

  initialize(network, config.init, config.seed);
  if (!config.use_bias) zero_biases(network);

  // Separate stream for shuffling so initialization and ordering stay independent.
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  result.epoch_loss.reserve(static_cast<std::size_t>(config.epochs));
  const auto batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      Gradients acc = Gradients::zeros_like(network);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t idx = order[b];
        const Trace trace = forward(network, samples[idx]);
        const LossResult lr = softmax_cross_entropy(trace.logits(), labels[idx]);
        if (!std::isfinite(lr.loss)) throw DivergenceError(epoch);
        loss_sum += lr.loss;
        acc += backward(network, trace, lr.gradient);
      }
      apply_update(network, acc, config.learning_rate / static_cast<double>(end - start),
                   config.use_bias);
    }
    const double mean_loss = loss_sum / static_cast<double>(samples.size());
    if (!std::isfinite(mean_loss)) throw DivergenceError(epoch);
    result.epoch_loss.push_back(mean_loss);
  }
  return result;
}

}  // namespace gaitlrp::nn
