#pragma once

#include <span>

#include "gaitlrp/nn/tensor.hpp"

namespace gaitlrp::nn {

// Numerically stable softmax (max subtracted first).
std::vector<double> softmax(std::span<const double> logits);

struct LossResult {
  double loss = 0.0;
  Tensor gradient;  // softmax(logits) - one_hot(label)
};

// -log softmax(logits)[label]. Throws std::out_of_range for a bad label.
LossResult softmax_cross_entropy(const Tensor& logits, int label);

}  // namespace gaitlrp::nn
