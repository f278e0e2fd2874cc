#include "gaitlrp/nn/layers.hpp"

#include <fmt/format.h>

#include "gaitlrp/error.hpp"

namespace gaitlrp::nn {

Conv1D Conv1D::make(std::size_t in_channels, std::size_t out_channels, std::size_t kernel_size,
                    std::size_t stride, std::size_t padding) {
  if (in_channels == 0 || out_channels == 0 || kernel_size == 0 || stride == 0) {
    throw ShapeError("conv1d dimensions must be positive");
  }
  Conv1D c;
  c.in_channels = in_channels;
  c.out_channels = out_channels;
  c.kernel_size = kernel_size;
  c.stride = stride;
  c.padding = padding;
  c.weight = Tensor({out_channels, in_channels, kernel_size});
  c.bias = Tensor({out_channels});
  return c;
}

std::size_t Conv1D::output_length(std::size_t input_length) const {
  const std::size_t padded = input_length + 2 * padding;
  if (padded < kernel_size) return 0;
  return (padded - kernel_size) / stride + 1;
}

std::size_t MaxPool1D::output_length(std::size_t input_length) const {
  if (input_length < window) return 0;
  return (input_length - window) / stride + 1;
}

Dense Dense::make(std::size_t in_features, std::size_t out_features) {
  if (in_features == 0 || out_features == 0) throw ShapeError("dense dimensions must be positive");
  Dense d;
  d.in_features = in_features;
  d.out_features = out_features;
  d.weight = Tensor({out_features, in_features});
  d.bias = Tensor({out_features});
  return d;
}

std::string layer_name(const Layer& layer) {
  struct Namer {
    std::string operator()(const Conv1D& c) const {
      return fmt::format("Conv1D({}->{}, k{}, s{}, p{})", c.in_channels, c.out_channels,
                         c.kernel_size, c.stride, c.padding);
    }
    std::string operator()(const ReLU&) const { return "ReLU"; }
    std::string operator()(const MaxPool1D& p) const {
      return fmt::format("MaxPool1D({}, {})", p.window, p.stride);
    }
    std::string operator()(const Flatten&) const { return "Flatten"; }
    std::string operator()(const Dense& d) const {
      return fmt::format("Dense({}->{})", d.in_features, d.out_features);
    }
  };
  return std::visit(Namer{}, layer);
}

bool has_parameters(const Layer& layer) noexcept {
  return std::holds_alternative<Conv1D>(layer) || std::holds_alternative<Dense>(layer);
}

Shape output_shape(const Layer& layer, const Shape& input, std::size_t layer_index) {
  auto fail = [&](const std::string& why) -> ShapeError {
    return ShapeError(fmt::format("layer {} {}: input {} {}", layer_index, layer_name(layer),
                                  shape_string(input), why));
  };
  if (const auto* c = std::get_if<Conv1D>(&layer)) {
    if (input.size() != 2 || input[0] != c->in_channels) {
      throw fail(fmt::format("does not match (in_channels={}, L)", c->in_channels));
    }
    if (c->weight.shape() != Shape{c->out_channels, c->in_channels, c->kernel_size} ||
        c->bias.shape() != Shape{c->out_channels}) {
      throw fail("parameter tensors do not match the declared dimensions");
    }
    const std::size_t out = c->output_length(input[1]);
    if (out == 0) throw fail("is shorter than the kernel");
    return {c->out_channels, out};
  }
  if (const auto* p = std::get_if<MaxPool1D>(&layer)) {
    if (input.size() != 2) throw fail("must be (C, L)");
    if (p->window == 0 || p->stride == 0) throw fail("has a zero window or stride");
    const std::size_t out = p->output_length(input[1]);
    if (out == 0) throw fail("is shorter than the pooling window");
    return {input[0], out};
  }
  if (std::holds_alternative<Flatten>(layer)) return {shape_size(input)};
  if (const auto* d = std::get_if<Dense>(&layer)) {
    if (input.size() != 1 || input[0] != d->in_features) {
      throw fail(fmt::format("does not match ({})", d->in_features));
    }
    if (d->weight.shape() != Shape{d->out_features, d->in_features} ||
        d->bias.shape() != Shape{d->out_features}) {
      throw fail("parameter tensors do not match the declared dimensions");
    }
    return {d->out_features};
  }
  return input;  // ReLU
}

}  // namespace gaitlrp::nn
