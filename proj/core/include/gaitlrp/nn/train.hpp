#pragma once

#include <cstdint>
#include <vector>

#include "gaitlrp/nn/network.hpp"

namespace gaitlrp::nn {

struct TrainConfig {
  double learning_rate = 0.01;
  int batch_size = 16;
  int epochs = 100;
  std::uint64_t seed = 1;
  InitRule init = InitRule::GlorotUniform;
  // When false, biases are zeroed and never updated (bias-free models keep
  // LRP conservation exact).
  bool use_bias = true;

  // Throws std::invalid_argument: learning_rate < 0 or non-finite, batch_size < 1, epochs < 1.
  void validate() const;
};

struct TrainResult {
  std::vector<double> epoch_loss;  // mean training loss of each epoch, in epoch order
};

// Mini-batch gradient descent on softmax cross-entropy. Initializes with
// config.init, then shuffles with config.seed each epoch. Batch gradients are
// averaged over the batch. Throws DivergenceError (1-based epoch) on a
// non-finite loss.
TrainResult train(Network& network, const std::vector<Tensor>& samples,
                  const std::vector<int>& labels, const TrainConfig& config);

}  // namespace gaitlrp::nn
