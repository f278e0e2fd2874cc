#include "gaitlrp/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaitlrp::nn {

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

LossResult softmax_cross_entropy(const Tensor& logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    throw std::out_of_range("label " + std::to_string(label) + " outside [0, " +
                            std::to_string(logits.size()) + ")");
  }
  const auto x = logits.data();
  const double m = *std::max_element(x.begin(), x.end());
  double z = 0.0;
  for (double v : x) z += std::exp(v - m);
  const double log_z = m + std::log(z);

  LossResult r;
  r.loss = log_z - x[label];
  r.gradient = Tensor(logits.shape());
  for (std::size_t i = 0; i < x.size(); ++i) r.gradient[i] = std::exp(x[i] - log_z);
  r.gradient[label] -= 1.0;
  return r;
}

}  // namespace gaitlrp::nn
