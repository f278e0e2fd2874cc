#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "gaitlrp/nn/tensor.hpp"

namespace gaitlrp::nn {

// Input (in_channels, L) -> output (out_channels, floor((L + 2p - k)/s) + 1).
// weight: (out_channels, in_channels, kernel_size), bias: (out_channels).
struct Conv1D {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_size = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  Tensor weight;
  Tensor bias;

  static Conv1D make(std::size_t in_channels, std::size_t out_channels, std::size_t kernel_size,
                     std::size_t stride = 1, std::size_t padding = 0);
  std::size_t output_length(std::size_t input_length) const;

  friend bool operator==(const Conv1D&, const Conv1D&) = default;
};

struct ReLU {
  friend bool operator==(const ReLU&, const ReLU&) = default;
};

// Input (C, L) -> (C, floor((L - window)/stride) + 1). Ties go to the first index.
struct MaxPool1D {
  std::size_t window = 2;
  std::size_t stride = 2;

  std::size_t output_length(std::size_t input_length) const;

  friend bool operator==(const MaxPool1D&, const MaxPool1D&) = default;
};

struct Flatten {
  friend bool operator==(const Flatten&, const Flatten&) = default;
};

// Input (in_features) -> (out_features). weight: (out_features, in_features).
struct Dense {
  std::size_t in_features = 0;
  std::size_t out_features = 0;
  Tensor weight;
  Tensor bias;

  static Dense make(std::size_t in_features, std::size_t out_features);

  friend bool operator==(const Dense&, const Dense&) = default;
};

using Layer = std::variant<Conv1D, ReLU, MaxPool1D, Flatten, Dense>;

std::string layer_name(const Layer& layer);
bool has_parameters(const Layer& layer) noexcept;

// Output shape of `layer` for `input`; throws ShapeError naming the layer.
Shape output_shape(const Layer& layer, const Shape& input, std::size_t layer_index);

}  // namespace gaitlrp::nn
