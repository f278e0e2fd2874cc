#pragma once

// Reference forward pass written directly from the layer definitions, one
// output element at a time. Shares no code with gaitlrp::nn::forward.

#include <algorithm>
#include <cstddef>
#include <variant>
#include <vector>

#include "gaitlrp/nn/network.hpp"

namespace gaitlrp::oracle {

// out[oc][t] = b[oc] + sum_ic sum_k w[oc][ic][k] * xpad[ic][t*stride + k]
inline std::vector<std::vector<double>> direct_conv(const nn::Conv1D& c,
                                                    const std::vector<std::vector<double>>& x) {
  const long L = static_cast<long>(x.at(0).size());
  const long P = static_cast<long>(c.padding);
  const long K = static_cast<long>(c.kernel_size);
  const long S = static_cast<long>(c.stride);
  const long out_len = (L + 2 * P - K) / S + 1;
  std::vector<std::vector<double>> y(c.out_channels, std::vector<double>(out_len, 0.0));
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    for (long t = 0; t < out_len; ++t) {
      double acc = c.bias[oc];
      for (std::size_t ic = 0; ic < c.in_channels; ++ic) {
        for (long k = 0; k < K; ++k) {
          const long pos = t * S + k - P;
          const double v = (pos >= 0 && pos < L) ? x[ic][pos] : 0.0;
          acc += c.weight.at(oc, ic, static_cast<std::size_t>(k)) * v;
        }
      }
      y[oc][t] = acc;
    }
  }
  return y;
}

// Full forward pass; activations as nested vectors, logits returned flat.
inline std::vector<double> direct_forward(const nn::Network& net, const nn::Tensor& input) {
  std::vector<std::vector<double>> m(input.dim(0), std::vector<double>(input.dim(1)));
  for (std::size_t c = 0; c < input.dim(0); ++c) {
    for (std::size_t t = 0; t < input.dim(1); ++t) m[c][t] = input.at(c, t);
  }
  std::vector<double> v;
  bool flat = false;
  for (const nn::Layer& layer : net.layers()) {
    if (const auto* c = std::get_if<nn::Conv1D>(&layer)) {
      m = direct_conv(*c, m);
    } else if (std::holds_alternative<nn::ReLU>(layer)) {
      if (flat) {
        for (double& x : v) x = std::max(0.0, x);
      } else {
        for (auto& row : m) for (double& x : row) x = std::max(0.0, x);
      }
    } else if (const auto* p = std::get_if<nn::MaxPool1D>(&layer)) {
      for (auto& row : m) {
        const std::size_t out_len = (row.size() - p->window) / p->stride + 1;
        std::vector<double> pooled(out_len);
        for (std::size_t t = 0; t < out_len; ++t) {
          pooled[t] = *std::max_element(row.begin() + t * p->stride,
                                        row.begin() + t * p->stride + p->window);
        }
        row = pooled;
      }
    } else if (std::holds_alternative<nn::Flatten>(layer)) {
      v.clear();
      for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
      flat = true;
    } else {
      const auto& d = std::get<nn::Dense>(layer);
      std::vector<double> y(d.out_features);
      for (std::size_t j = 0; j < d.out_features; ++j) {
        double acc = d.bias[j];
        for (std::size_t i = 0; i < d.in_features; ++i) acc += d.weight.at(j, i) * v[i];
        y[j] = acc;
      }
      v = y;
    }
  }
  return v;
}

}  // namespace gaitlrp::oracle
