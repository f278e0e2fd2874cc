#include "gaitlrp/nn/network.hpp"

#include <algorithm>
#include <cstddef>
#include <cmath>
#include <random>

#include "gaitlrp/error.hpp"
#include "gaitlrp/nn/loss.hpp"

namespace gaitlrp::nn {
namespace {

// Output positions t whose receptive tap t*stride + k - padding falls inside
// [0, L): returns [first, last).
std::pair<std::size_t, std::size_t> valid_taps(std::size_t k, std::size_t stride, std::size_t padding,
                                               std::size_t L, std::size_t out_len) {
  std::size_t first = 0;
  if (padding > k) first = (padding - k + stride - 1) / stride;
  if (L + padding <= k) return {0, 0};
  const std::size_t last = std::min(out_len, (L - 1 + padding - k) / stride + 1);
  return {first, std::max(first, last)};
}

Tensor conv_forward(const Conv1D& c, const Tensor& x) {
  const std::size_t L = x.dim(1);
  const std::size_t out_len = c.output_length(L);
  Tensor y({c.out_channels, out_len});
  const double* xd = x.data().data();
  const double* wd = c.weight.data().data();
  double* yd = y.data().data();
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    double* yrow = yd + oc * out_len;
    std::fill(yrow, yrow + out_len, c.bias[oc]);
    for (std::size_t ic = 0; ic < c.in_channels; ++ic) {
      const double* xrow = xd + ic * L;
      const double* wrow = wd + (oc * c.in_channels + ic) * c.kernel_size;
      for (std::size_t k = 0; k < c.kernel_size; ++k) {
        const double w = wrow[k];
        const auto [t0, t1] = valid_taps(k, c.stride, c.padding, L, out_len);
        if (c.stride == 1) {
          const auto off = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(c.padding);
          for (auto t = static_cast<std::ptrdiff_t>(t0); t < static_cast<std::ptrdiff_t>(t1); ++t) {
            yrow[t] += w * xrow[t + off];
          }
        } else {
          for (std::size_t t = t0; t < t1; ++t) yrow[t] += w * xrow[t * c.stride + k - c.padding];
        }
      }
    }
  }
  return y;
}

void conv_backward(const Conv1D& c, const Tensor& x, const Tensor& gy, Tensor& gw, Tensor& gb,
                   Tensor& gx) {
  const std::size_t L = x.dim(1);
  const std::size_t out_len = gy.dim(1);
  const double* xd = x.data().data();
  const double* wd = c.weight.data().data();
  const double* gyd = gy.data().data();
  double* gwd = gw.data().data();
  double* gxd = gx.data().data();
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    const double* grow = gyd + oc * out_len;
    double bsum = 0.0;
    for (std::size_t t = 0; t < out_len; ++t) bsum += grow[t];
    gb[oc] += bsum;
    for (std::size_t ic = 0; ic < c.in_channels; ++ic) {
      const double* xrow = xd + ic * L;
      double* gxrow = gxd + ic * L;
      const std::size_t wbase = (oc * c.in_channels + ic) * c.kernel_size;
      for (std::size_t k = 0; k < c.kernel_size; ++k) {
        const double w = wd[wbase + k];
        const auto [t0, t1] = valid_taps(k, c.stride, c.padding, L, out_len);
        double acc = 0.0;
        for (std::size_t t = t0; t < t1; ++t) {
          const std::size_t i = t * c.stride + k - c.padding;
          acc += grow[t] * xrow[i];
          gxrow[i] += w * grow[t];
        }
        gwd[wbase + k] += acc;
      }
    }
  }
}

Tensor dense_forward(const Dense& d, const Tensor& x) {
  Tensor y({d.out_features});
  const double* xd = x.data().data();
  for (std::size_t j = 0; j < d.out_features; ++j) {
    const double* wrow = d.weight.data().data() + j * d.in_features;
    double acc = 0.0;
    for (std::size_t i = 0; i < d.in_features; ++i) acc += wrow[i] * xd[i];
    y[j] = acc + d.bias[j];
  }
  return y;
}

void dense_backward(const Dense& d, const Tensor& x, const Tensor& gy, Tensor& gw, Tensor& gb,
                    Tensor& gx) {
  const double* xd = x.data().data();
  for (std::size_t j = 0; j < d.out_features; ++j) {
    const double g = gy[j];
    gb[j] += g;
    const double* wrow = d.weight.data().data() + j * d.in_features;
    double* gwrow = gw.data().data() + j * d.in_features;
    for (std::size_t i = 0; i < d.in_features; ++i) {
      gwrow[i] += g * xd[i];
      gx[i] += wrow[i] * g;
    }
  }
}

Tensor pool_forward(const MaxPool1D& p, const Tensor& x, std::vector<std::size_t>& argmax) {
  const std::size_t C = x.dim(0);
  const std::size_t L = x.dim(1);
  const std::size_t out_len = p.output_length(L);
  Tensor y({C, out_len});
  argmax.assign(C * out_len, 0);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t t = 0; t < out_len; ++t) {
      std::size_t best = c * L + t * p.stride;
      for (std::size_t w = 1; w < p.window; ++w) {
        const std::size_t i = c * L + t * p.stride + w;
        if (x[i] > x[best]) best = i;
      }
      y.at(c, t) = x[best];
      argmax[c * out_len + t] = best;
    }
  }
  return y;
}

}  // namespace

Network::Network(Shape input_shape, std::vector<Layer> layers)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("network has no layers");
  if (!std::holds_alternative<Dense>(layers_.back())) {
    throw ShapeError("final layer must be Dense (class logits)");
  }
  activation_shapes();
}

std::size_t Network::num_classes() const { return std::get<Dense>(layers_.back()).out_features; }

std::vector<Shape> Network::activation_shapes() const {
  std::vector<Shape> shapes{input_shape_};
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    shapes.push_back(output_shape(layers_[i], shapes.back(), i));
  }
  return shapes;
}

std::size_t Network::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const Layer& l : layers_) {
    if (const auto* c = std::get_if<Conv1D>(&l)) n += c->weight.size() + c->bias.size();
    if (const auto* d = std::get_if<Dense>(&l)) n += d->weight.size() + d->bias.size();
  }
  return n;
}

Network make_default_network(std::size_t in_channels, std::size_t length, std::size_t classes) {
  const MaxPool1D pool{2, 2};
  Conv1D conv1 = Conv1D::make(in_channels, 16, 5, 1, 2);
  const std::size_t after1 = pool.output_length(conv1.output_length(length));
  Conv1D conv2 = Conv1D::make(16, 32, 5, 1, 2);
  const std::size_t after2 = pool.output_length(conv2.output_length(after1));
  if (after2 == 0) throw ShapeError("input length too short for the default architecture");
  std::vector<Layer> layers{conv1, ReLU{}, pool,
                            conv2, ReLU{}, pool,
                            Flatten{}, Dense::make(32 * after2, 64), ReLU{},
                            Dense::make(64, classes)};
  return Network({in_channels, length}, std::move(layers));
}

void initialize(Network& network, InitRule rule, std::uint64_t seed) {
  if (rule == InitRule::Keep) return;
  std::mt19937_64 rng(seed);
  auto glorot = [&](Tensor& w, std::size_t fan_in, std::size_t fan_out) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-a, a);
    for (double& v : w.data()) v = dist(rng);
  };
  for (Layer& l : network.layers()) {
    if (auto* c = std::get_if<Conv1D>(&l)) {
      glorot(c->weight, c->in_channels * c->kernel_size, c->out_channels * c->kernel_size);
      c->bias.fill(0.0);
    } else if (auto* d = std::get_if<Dense>(&l)) {
      glorot(d->weight, d->in_features, d->out_features);
      d->bias.fill(0.0);
    }
  }
}

static Tensor apply_layer(const Layer& layer, std::size_t index, const Tensor& x,
                   std::vector<std::size_t>& argmax) {
  output_shape(layer, x.shape(), index);  // throws ShapeError naming the layer
  if (const auto* c = std::get_if<Conv1D>(&layer)) return conv_forward(*c, x);
  if (std::holds_alternative<ReLU>(layer)) {
    Tensor y = x;
    for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
    return y;
  }
  if (const auto* p = std::get_if<MaxPool1D>(&layer)) return pool_forward(*p, x, argmax);
  if (std::holds_alternative<Flatten>(layer)) return x.reshaped({x.size()});
  return dense_forward(std::get<Dense>(layer), x);
}

Trace forward(const Network& network, const Tensor& input) {
  const auto& layers = network.layers();
  Trace trace;
  trace.activations.reserve(layers.size() + 1);
  trace.pool_argmax.resize(layers.size());
  trace.activations.push_back(input);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    trace.activations.push_back(apply_layer(layers[i], i, trace.activations.back(), trace.pool_argmax[i]));
  }
  return trace;
}

Tensor forward_from(const Network& network, std::size_t first_layer, const Tensor& activation) {
  const auto& layers = network.layers();
  Tensor x = activation;
  std::vector<std::size_t> argmax;
  for (std::size_t i = first_layer; i < layers.size(); ++i) x = apply_layer(layers[i], i, x, argmax);
  return x;
}

Gradients Gradients::zeros_like(const Network& network) {
  Gradients g;
  for (const Layer& l : network.layers()) {
    if (const auto* c = std::get_if<Conv1D>(&l)) {
      g.weight.emplace_back(c->weight.shape());
      g.bias.emplace_back(c->bias.shape());
    } else if (const auto* d = std::get_if<Dense>(&l)) {
      g.weight.emplace_back(d->weight.shape());
      g.bias.emplace_back(d->bias.shape());
    } else {
      g.weight.emplace_back();
      g.bias.emplace_back();
    }
  }
  g.input = Tensor(network.input_shape());
  return g;
}

Gradients& Gradients::operator+=(const Gradients& other) {
  for (std::size_t i = 0; i < weight.size(); ++i) {
    weight[i] += other.weight[i];
    bias[i] += other.bias[i];
  }
  input += other.input;
  return *this;
}

Gradients backward(const Network& network, const Trace& trace, const Tensor& logits_gradient) {
  const auto& layers = network.layers();
  Gradients grads = Gradients::zeros_like(network);
  if (logits_gradient.shape() != trace.logits().shape()) {
    throw ShapeError("logits gradient shape " + shape_string(logits_gradient.shape()) +
                     " does not match logits " + shape_string(trace.logits().shape()));
  }
  Tensor upstream = logits_gradient;
  for (std::size_t li = layers.size(); li-- > 0;) {
    const Tensor& x = trace.layer_input(li);
    Tensor gx(x.shape());
    if (const auto* c = std::get_if<Conv1D>(&layers[li])) {
      conv_backward(*c, x, upstream, grads.weight[li], grads.bias[li], gx);
    } else if (std::holds_alternative<ReLU>(layers[li])) {
      for (std::size_t i = 0; i < x.size(); ++i) gx[i] = x[i] > 0.0 ? upstream[i] : 0.0;
    } else if (std::holds_alternative<MaxPool1D>(layers[li])) {
      const auto& argmax = trace.pool_argmax[li];
      for (std::size_t o = 0; o < argmax.size(); ++o) gx[argmax[o]] += upstream[o];
    } else if (std::holds_alternative<Flatten>(layers[li])) {
      gx = upstream.reshaped(x.shape());
    } else {
      dense_backward(std::get<Dense>(layers[li]), x, upstream, grads.weight[li], grads.bias[li], gx);
    }
    upstream = std::move(gx);
  }
  grads.input = std::move(upstream);
  return grads;
}

Prediction predict_from_logits(std::span<const double> logits) {
  Prediction p;
  p.label = static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
  p.probabilities = softmax(logits);
  return p;
}

Prediction predict(const Network& network, const Tensor& input) {
  return predict_from_logits(forward(network, input).logits().data());
}

}  // namespace gaitlrp::nn
