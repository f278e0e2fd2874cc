#pragma once

// Central finite differences of the softmax cross-entropy loss with respect to
// every network parameter. Uses only forward evaluation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "gaitlrp/nn/loss.hpp"
#include "gaitlrp/nn/network.hpp"

namespace gaitlrp::oracle {

struct ParamRef {
  std::size_t layer;
  bool is_bias;
  std::size_t index;
};

inline std::vector<ParamRef> all_parameters(const nn::Network& net) {
  std::vector<ParamRef> refs;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const nn::Tensor* w = nullptr;
    const nn::Tensor* b = nullptr;
    if (const auto* c = std::get_if<nn::Conv1D>(&net.layers()[l])) { w = &c->weight; b = &c->bias; }
    if (const auto* d = std::get_if<nn::Dense>(&net.layers()[l])) { w = &d->weight; b = &d->bias; }
    if (!w) continue;
    for (std::size_t i = 0; i < w->size(); ++i) refs.push_back({l, false, i});
    for (std::size_t i = 0; i < b->size(); ++i) refs.push_back({l, true, i});
  }
  return refs;
}

inline double& param(nn::Network& net, const ParamRef& r) {
  nn::Layer& layer = net.layers()[r.layer];
  if (auto* c = std::get_if<nn::Conv1D>(&layer)) return r.is_bias ? c->bias[r.index] : c->weight[r.index];
  auto& d = std::get<nn::Dense>(layer);
  return r.is_bias ? d.bias[r.index] : d.weight[r.index];
}

// Central differences around one (network, input, label) sample. Only the
// layers from the perturbed one onward are re-evaluated, as a separate "tail"
// network starting from the cached activation. Dense layers are linear in
// their parameters, so their perturbed output is the cached one with a single
// entry shifted by h * x_i (or h) and evaluation starts after them.
//
// derivative() returns nullopt when either step flips a ReLU sign or a
// max-pool winner downstream: the loss is not differentiable between the two
// evaluation points and the quotient means nothing there.
class FiniteDifference {
 public:
  FiniteDifference(const nn::Network& net, const nn::Trace& trace, int label, double h)
      : net_(net), trace_(trace), label_(label), h_(h) {
    const std::size_t n = net.layers().size();
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<nn::Layer> rest(net.layers().begin() + static_cast<std::ptrdiff_t>(s), net.layers().end());
      tails_.emplace_back(trace.layer_input(s).shape(), std::move(rest));
    }
  }

  std::optional<double> derivative(const ParamRef& r) {
    const std::size_t n = net_.layers().size();
    if (const auto* d = std::get_if<nn::Dense>(&net_.layers()[r.layer])) {
      const std::size_t in = d->weight.dim(1);
      const std::size_t j = r.is_bias ? r.index : r.index / in;
      const double step = r.is_bias ? h_ : h_ * trace_.layer_input(r.layer)[r.index % in];
      double loss[2];
      for (int side = 0; side < 2; ++side) {
        nn::Tensor z = trace_.layer_output(r.layer);
        z[j] += side == 0 ? step : -step;
        if (r.layer + 1 == n) {
          loss[side] = nn::softmax_cross_entropy(z, label_).loss;
          continue;
        }
        const nn::Trace t = nn::forward(tails_[r.layer + 1], z);
        if (!same_pattern(t, r.layer + 1)) return std::nullopt;
        loss[side] = nn::softmax_cross_entropy(t.logits(), label_).loss;
      }
      return (loss[0] - loss[1]) / (2.0 * h_);
    }
    nn::Network& tail = tails_[r.layer];
    double& p = param(tail, {0, r.is_bias, r.index});
    const double saved = p;
    double loss[2];
    bool kink = false;
    for (int side = 0; side < 2 && !kink; ++side) {
      p = saved + (side == 0 ? h_ : -h_);
      const nn::Trace t = nn::forward(tail, trace_.layer_input(r.layer));
      kink = !same_pattern(t, r.layer);
      loss[side] = nn::softmax_cross_entropy(t.logits(), label_).loss;
    }
    p = saved;
    if (kink) return std::nullopt;
    return (loss[0] - loss[1]) / (2.0 * h_);
  }

 private:
  // Tail trace `t` covers layers [first, n) of the full network.
  bool same_pattern(const nn::Trace& t, std::size_t first) const {
    for (std::size_t i = first; i < net_.layers().size(); ++i) {
      const std::size_t k = i - first;
      if (std::holds_alternative<nn::ReLU>(net_.layers()[i])) {
        const auto a = trace_.layer_input(i).data();
        const auto b = t.layer_input(k).data();
        for (std::size_t e = 0; e < a.size(); ++e) {
          if ((a[e] > 0.0) != (b[e] > 0.0)) return false;
        }
      } else if (std::holds_alternative<nn::MaxPool1D>(net_.layers()[i])) {
        if (trace_.pool_argmax[i] != t.pool_argmax[k]) return false;
      }
    }
    return true;
  }

  const nn::Network& net_;
  const nn::Trace& trace_;
  int label_;
  double h_;
  std::vector<nn::Network> tails_;
};

// |a - b| / max(|a|, |b|, floor); the floor keeps near-zero gradients from
// turning round-off into large relative errors.
inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace gaitlrp::oracle
