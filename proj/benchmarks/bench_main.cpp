#include <random>

#include <benchmark/benchmark.h>

#include "gaitlrp/data/synth.hpp"
#include "gaitlrp/lrp/lrp.hpp"
#include "gaitlrp/nn/loss.hpp"
#include "gaitlrp/nn/network.hpp"
#include "gaitlrp/nn/train.hpp"

namespace {

using namespace gaitlrp;

nn::Tensor random_input(std::size_t channels, std::size_t length) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nn::Tensor x({channels, length});
  for (double& v : x.data()) v = u(rng);
  return x;
}

nn::Network default_net(std::size_t length) {
  nn::Network net = nn::make_default_network(6, length);
  nn::initialize(net, nn::InitRule::GlorotUniform, 1);
  return net;
}

void BM_Forward(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const nn::Network net = default_net(T);
  const nn::Tensor x = random_input(6, T);
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward(net, x));
}
BENCHMARK(BM_Forward)->Arg(100)->Arg(400);

void BM_Backward(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const nn::Network net = default_net(T);
  const nn::Trace tr = nn::forward(net, random_input(6, T));
  const nn::Tensor dl = nn::softmax_cross_entropy(tr.logits(), 1).gradient;
  for (auto _ : state) benchmark::DoNotOptimize(nn::backward(net, tr, dl));
}
BENCHMARK(BM_Backward)->Arg(100)->Arg(400);

void BM_LrpExplain(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const nn::Network net = default_net(T);
  const nn::Trace tr = nn::forward(net, random_input(6, T));
  const lrp::LrpConfig cfg = state.range(1) == 0 ? lrp::LrpConfig::epsilon_rule(1e-6) : lrp::LrpConfig::alpha_beta(2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(lrp::lrp_explain(net, tr, 0, cfg));
}
BENCHMARK(BM_LrpExplain)->Args({100, 0})->Args({100, 1})->Args({400, 0});

void BM_Conv1D(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto s = static_cast<std::size_t>(state.range(1));
  nn::Conv1D c = nn::Conv1D::make(16, 32, k, s, k / 2);
  const std::size_t out = c.output_length(200);
  nn::Network net({16, 200}, {c, nn::Flatten{}, nn::Dense::make(32 * out, 3)});
  nn::initialize(net, nn::InitRule::GlorotUniform, 2);
  const nn::Tensor x = random_input(16, 200);
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward_from(net, 0, x));
}
BENCHMARK(BM_Conv1D)->Args({5, 1})->Args({5, 2})->Args({3, 1});

void BM_TrainEpoch(benchmark::State& state) {
  const data::Dataset ds = data::synth_generate({10, 2, 100, 0.05}, 1);
  std::vector<nn::Tensor> samples;
  std::vector<int> labels;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    nn::Tensor x({6, 100});
    for (std::size_t c = 0; c < 6; ++c)
      for (std::size_t t = 0; t < 100; ++t) x.at(c, t) = ds.trial(i).channels[c][t];
    samples.push_back(std::move(x));
    labels.push_back(data::class_index(ds.label(i)));
  }
  nn::TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) {
    nn::Network net = nn::make_default_network(6, 100);
    benchmark::DoNotOptimize(nn::train(net, samples, labels, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
