#pragma once

#include <cstddef>
#include <vector>

#include "gaitlrp/nn/network.hpp"

namespace gaitlrp::lrp {

enum class Rule { Epsilon, AlphaBeta };

// Which logit to explain.
enum class Start { GroundTruth, Predicted };

struct LrpConfig {
  Rule rule = Rule::Epsilon;
  double epsilon = 1e-6;
  double alpha = 1.0;
  double beta = 0.0;
  Start start = Start::GroundTruth;

  // Throws std::invalid_argument: epsilon < 0, beta < 0 or alpha - beta != 1.
  void validate() const;

  static LrpConfig epsilon_rule(double eps) { return {Rule::Epsilon, eps, 1.0, 0.0, Start::GroundTruth}; }
  static LrpConfig alpha_beta(double alpha, double beta) {
    return {Rule::AlphaBeta, 0.0, alpha, beta, Start::GroundTruth};
  }
};

// Relevance of one (input, target class) explanation.
//
// layer_relevance[i] has the shape of layer i's input; layer_relevance[n] is
// the output seed. absorbed[i] is the relevance that layer i did not pass on
// to its input (bias share, epsilon share, and any output whose stabilized
// denominator was exactly zero), so for every layer
//   sum(layer_relevance[i + 1]) = sum(layer_relevance[i]) + absorbed[i].
struct RelevanceMap {
  std::vector<nn::Tensor> layer_relevance;
  std::vector<double> absorbed;
  int target_class = 0;
  double explained_logit = 0.0;

  const nn::Tensor& input_relevance() const { return layer_relevance.front(); }
  const nn::Tensor& output_relevance() const { return layer_relevance.back(); }
};

// Explains logits[target_class]: the seed is that logit placed at the target
// position, zero elsewhere.
//
// Dense/Conv1D, Epsilon: R_i = sum_j x_i w_ij / (z_j + eps * sign(z_j)) R_j,
//   z_j = sum_i x_i w_ij + b_j, sign(0) = +1.
// Dense/Conv1D, AlphaBeta: positive and negative contributions (bias counted
//   in the pool of its sign) are normalized separately and weighted alpha and
//   -beta.
// ReLU and Flatten pass relevance through; MaxPool1D routes it to the argmax.
//
// Throws ShapeError when the trace does not belong to the network and
// std::out_of_range for a bad target class.
RelevanceMap lrp_explain(const nn::Network& network, const nn::Trace& trace, int target_class,
                         const LrpConfig& config);

// Same propagation from an arbitrary output-shaped seed. explained_logit is
// set to the seed's sum and target_class to -1.
RelevanceMap lrp_propagate(const nn::Network& network, const nn::Trace& trace,
                           const nn::Tensor& seed, const LrpConfig& config);

struct ConservationReport {
  // Relevance sums of every layer input plus the output seed (last entry).
  std::vector<double> layer_sums;
  std::vector<double> layer_absorbed;
  double total_absorbed = 0.0;
  double explained_logit = 0.0;
  double input_sum = 0.0;

  // |input_sum - logit| / |logit|
  double conservation_error() const noexcept;
  // |input_sum + total_absorbed - logit| / |logit|
  double accounting_error() const noexcept;
};

ConservationReport conservation_report(const RelevanceMap& map);

}  // namespace gaitlrp::lrp
