#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaitlrp/nn/layers.hpp"
#include "gaitlrp/nn/tensor.hpp"

namespace gaitlrp::nn {

inline constexpr std::size_t kDefaultClasses = 3;

// Ordered layer stack ending in a Dense layer that produces the class logits.
class Network {
 public:
  Network() = default;
  // Validates that the layers compose for `input_shape`; throws ShapeError.
  Network(Shape input_shape, std::vector<Layer> layers);

  const Shape& input_shape() const noexcept { return input_shape_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }
  std::size_t num_classes() const;

  // Shapes of every activation: [input, after layer 0, ..., logits].
  std::vector<Shape> activation_shapes() const;

  std::size_t parameter_count() const noexcept;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  Shape input_shape_;
  std::vector<Layer> layers_;
};

// Conv1D(C->16, k5, p2) ReLU MaxPool(2,2) Conv1D(16->32, k5, p2) ReLU
// MaxPool(2,2) Flatten Dense(32*floor(floor(L/2)/2) -> 64) ReLU Dense(64 -> 3).
// Parameters are zero; call initialize().
Network make_default_network(std::size_t in_channels, std::size_t length,
                             std::size_t classes = kDefaultClasses);

enum class InitRule {
  GlorotUniform,  // weights U(-a, a), a = sqrt(6 / (fan_in + fan_out)); biases zero
  Keep,           // leave parameters untouched
};

void initialize(Network& network, InitRule rule, std::uint64_t seed);

// Everything forward() keeps: activations[0] is the input, activations[i+1]
// the output of layer i; logits() is the last activation. For max-pool layers
// `pool_argmax[i]` holds the flat input index chosen for each output element.
struct Trace {
  std::vector<Tensor> activations;
  std::vector<std::vector<std::size_t>> pool_argmax;

  const Tensor& input() const { return activations.front(); }
  const Tensor& logits() const { return activations.back(); }
  const Tensor& layer_input(std::size_t i) const { return activations.at(i); }
  const Tensor& layer_output(std::size_t i) const { return activations.at(i + 1); }
};

// Throws ShapeError naming the first layer whose input does not fit.
Trace forward(const Network& network, const Tensor& input);

// Runs layers [first_layer, end) on `activation` (the input of first_layer)
// and returns the logits.
Tensor forward_from(const Network& network, std::size_t first_layer, const Tensor& activation);

// Per-layer parameter gradients, parallel to Network::layers(). Parameterless
// layers have empty tensors.
struct Gradients {
  std::vector<Tensor> weight;
  std::vector<Tensor> bias;
  Tensor input;  // gradient with respect to the network input

  static Gradients zeros_like(const Network& network);
  Gradients& operator+=(const Gradients& other);
};

// Exact backpropagation of `logits_gradient` through `trace`. The trace must
// come from forward() on the same, unmodified network (unchecked).
Gradients backward(const Network& network, const Trace& trace, const Tensor& logits_gradient);

struct Prediction {
  int label = 0;
  std::vector<double> probabilities;
};

// argmax of the logits (first index on ties) and their softmax.
Prediction predict(const Network& network, const Tensor& input);
Prediction predict_from_logits(std::span<const double> logits);

}  // namespace gaitlrp::nn
