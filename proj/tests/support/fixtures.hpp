#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "gaitlrp/data/dataset.hpp"
#include "gaitlrp/nn/network.hpp"

namespace gaitlrp::testing {

// Dataset with the given number of subjects per class; every curve is a ramp
// offset by the trial index so channels are never degenerate.
inline data::Dataset make_dataset(std::array<int, 3> subjects_per_class, int trials_per_subject = 2,
                                  std::size_t T = 8) {
  static constexpr std::array<int, 3> kAges = {30, 50, 70};
  std::vector<data::GrfTrial> trials;
  for (int c = 0; c < 3; ++c) {
    for (int s = 0; s < subjects_per_class[c]; ++s) {
      for (int r = 0; r < trials_per_subject; ++r) {
        data::GrfTrial t;
        t.subject_id = fmt::format("c{}s{:03}", c, s);
        t.age_years = kAges[c];
        t.trial_number = r + 1;
        for (std::size_t ch = 0; ch < data::kNumChannels; ++ch) {
          t.channels[ch].resize(T);
          for (std::size_t i = 0; i < T; ++i) {
            t.channels[ch][i] = static_cast<double>(i) + 0.1 * r + static_cast<double>(ch);
          }
        }
        trials.push_back(std::move(t));
      }
    }
  }
  return data::Dataset(std::move(trials));
}

inline nn::Tensor random_tensor(const nn::Shape& shape, std::mt19937_64& rng, double lo = -1.0,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  nn::Tensor t(shape);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

inline void randomize(nn::Network& net, std::mt19937_64& rng, bool biases) {
  for (nn::Layer& l : net.layers()) {
    nn::Tensor* w = nullptr;
    nn::Tensor* b = nullptr;
    if (auto* c = std::get_if<nn::Conv1D>(&l)) { w = &c->weight; b = &c->bias; }
    if (auto* d = std::get_if<nn::Dense>(&l)) { w = &d->weight; b = &d->bias; }
    if (!w) continue;
    *w = random_tensor(w->shape(), rng, -0.5, 0.5);
    *b = biases ? random_tensor(b->shape(), rng, -0.2, 0.2) : nn::Tensor(b->shape());
  }
}

// Small conv net with random kernel/stride/padding drawn from seed.
inline nn::Network random_small_network(std::uint64_t seed, bool biases = true) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> ch(1, 4), k(1, 4), s(1, 2), p(0, 2), len(8, 16);
  const std::size_t in_c = ch(rng);
  const std::size_t L = len(rng);
  const auto conv = nn::Conv1D::make(in_c, ch(rng) + 1, k(rng), s(rng), p(rng));
  const std::size_t after_conv = conv.output_length(L);
  const nn::MaxPool1D pool{2, 2};
  const std::size_t after_pool = pool.output_length(after_conv);
  std::vector<nn::Layer> layers{conv, nn::ReLU{}};
  std::size_t features = conv.out_channels * after_conv;
  if (after_pool > 0) {
    layers.push_back(pool);
    features = conv.out_channels * after_pool;
  }
  layers.push_back(nn::Flatten{});
  layers.push_back(nn::Dense::make(features, 5));
  layers.push_back(nn::ReLU{});
  layers.push_back(nn::Dense::make(5, 3));
  nn::Network net({in_c, L}, std::move(layers));
  randomize(net, rng, biases);
  return net;
}

}  // namespace gaitlrp::testing
