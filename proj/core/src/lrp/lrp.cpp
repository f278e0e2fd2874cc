#include "gaitlrp/lrp/lrp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gaitlrp/error.hpp"

namespace gaitlrp::lrp {
namespace {

using nn::Conv1D;
using nn::Dense;
using nn::Tensor;

// Stabilized denominator; sign(0) counts as positive.
double stabilize(double z, double eps) noexcept { return z >= 0.0 ? z + eps : z - eps; }

// Epsilon rule for a dense layer. Returns the relevance absorbed by bias,
// epsilon and zero denominators.
double dense_epsilon(const Dense& d, const Tensor& x, const Tensor& z, const Tensor& r_out,
                     double eps, Tensor& r_in) {
  std::vector<double> s(d.out_features, 0.0);
  double absorbed = 0.0;
  for (std::size_t j = 0; j < d.out_features; ++j) {
    const double denom = stabilize(z[j], eps);
    if (denom == 0.0) {
      absorbed += r_out[j];
      continue;
    }
    s[j] = r_out[j] / denom;
    absorbed += s[j] * (d.bias[j] + (denom - z[j]));
  }
  std::vector<double> back(d.in_features, 0.0);
  for (std::size_t j = 0; j < d.out_features; ++j) {
    if (s[j] == 0.0) continue;
    const double* wrow = d.weight.data().data() + j * d.in_features;
    for (std::size_t i = 0; i < d.in_features; ++i) back[i] += wrow[i] * s[j];
  }
  for (std::size_t i = 0; i < d.in_features; ++i) r_in[i] = x[i] * back[i];
  return absorbed;
}

double dense_alpha_beta(const Dense& d, const Tensor& x, const Tensor& r_out, double alpha,
                        double beta, Tensor& r_in) {
  double absorbed = 0.0;
  for (std::size_t j = 0; j < d.out_features; ++j) {
    const double* wrow = d.weight.data().data() + j * d.in_features;
    const double b = d.bias[j];
    double zp = b > 0.0 ? b : 0.0;
    double zn = b < 0.0 ? b : 0.0;
    for (std::size_t i = 0; i < d.in_features; ++i) {
      const double zij = x[i] * wrow[i];
      if (zij > 0.0) zp += zij; else zn += zij;
    }
    const double ap = zp != 0.0 ? alpha * r_out[j] / zp : 0.0;
    const double an = zn != 0.0 ? beta * r_out[j] / zn : 0.0;
    for (std::size_t i = 0; i < d.in_features; ++i) {
      const double zij = x[i] * wrow[i];
      r_in[i] += zij > 0.0 ? zij * ap : -zij * an;
    }
    const double bp = b > 0.0 ? b : 0.0;
    const double bn = b < 0.0 ? b : 0.0;
    absorbed += r_out[j] - (ap * (zp - bp) - an * (zn - bn));
  }
  return absorbed;
}

// Visits every (output o=(oc,t), input i=(ic,pos), weight) triple of a conv.
template <typename F>
void for_each_tap(const Conv1D& c, std::size_t L, std::size_t out_len, F&& f) {
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    for (std::size_t ic = 0; ic < c.in_channels; ++ic) {
      for (std::size_t k = 0; k < c.kernel_size; ++k) {
        const double w = c.weight.at(oc, ic, k);
        for (std::size_t t = 0; t < out_len; ++t) {
          const std::size_t pos = t * c.stride + k;
          if (pos < c.padding || pos - c.padding >= L) continue;
          f(oc * out_len + t, ic * L + (pos - c.padding), w);
        }
      }
    }
  }
}

double conv_epsilon(const Conv1D& c, const Tensor& x, const Tensor& z, const Tensor& r_out,
                    double eps, Tensor& r_in) {
  const std::size_t L = x.dim(1);
  const std::size_t out_len = z.dim(1);
  std::vector<double> s(z.size(), 0.0);
  double absorbed = 0.0;
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    for (std::size_t t = 0; t < out_len; ++t) {
      const std::size_t o = oc * out_len + t;
      const double denom = stabilize(z[o], eps);
      if (denom == 0.0) {
        absorbed += r_out[o];
        continue;
      }
      s[o] = r_out[o] / denom;
      absorbed += s[o] * (c.bias[oc] + (denom - z[o]));
    }
  }
  std::vector<double> back(x.size(), 0.0);
  for_each_tap(c, L, out_len, [&](std::size_t o, std::size_t i, double w) { back[i] += w * s[o]; });
  for (std::size_t i = 0; i < x.size(); ++i) r_in[i] = x[i] * back[i];
  return absorbed;
}

double conv_alpha_beta(const Conv1D& c, const Tensor& x, const Tensor& z, const Tensor& r_out,
                       double alpha, double beta, Tensor& r_in) {
  const std::size_t L = x.dim(1);
  const std::size_t out_len = z.dim(1);
  std::vector<double> zp(z.size(), 0.0);
  std::vector<double> zn(z.size(), 0.0);
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    const double b = c.bias[oc];
    for (std::size_t t = 0; t < out_len; ++t) {
      zp[oc * out_len + t] = b > 0.0 ? b : 0.0;
      zn[oc * out_len + t] = b < 0.0 ? b : 0.0;
    }
  }
  for_each_tap(c, L, out_len, [&](std::size_t o, std::size_t i, double w) {
    const double zij = x[i] * w;
    if (zij > 0.0) zp[o] += zij; else zn[o] += zij;
  });
  std::vector<double> ap(z.size(), 0.0);
  std::vector<double> an(z.size(), 0.0);
  double absorbed = 0.0;
  for (std::size_t oc = 0; oc < c.out_channels; ++oc) {
    const double b = c.bias[oc];
    const double bp = b > 0.0 ? b : 0.0;
    const double bn = b < 0.0 ? b : 0.0;
    for (std::size_t t = 0; t < out_len; ++t) {
      const std::size_t o = oc * out_len + t;
      ap[o] = zp[o] != 0.0 ? alpha * r_out[o] / zp[o] : 0.0;
      an[o] = zn[o] != 0.0 ? beta * r_out[o] / zn[o] : 0.0;
      absorbed += r_out[o] - (ap[o] * (zp[o] - bp) - an[o] * (zn[o] - bn));
    }
  }
  for_each_tap(c, L, out_len, [&](std::size_t o, std::size_t i, double w) {
    const double zij = x[i] * w;
    r_in[i] += zij > 0.0 ? zij * ap[o] : -zij * an[o];
  });
  return absorbed;
}

void check_trace(const nn::Network& network, const nn::Trace& trace) {
  const auto& layers = network.layers();
  if (trace.activations.size() != layers.size() + 1 || trace.pool_argmax.size() != layers.size()) {
    throw ShapeError("trace has " + std::to_string(trace.activations.size()) +
                     " activations, network needs " + std::to_string(layers.size() + 1));
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const nn::Shape expected = nn::output_shape(layers[i], trace.layer_input(i).shape(), i);
    if (expected != trace.layer_output(i).shape()) {
      throw ShapeError("layer " + std::to_string(i) + " " + nn::layer_name(layers[i]) +
                       ": trace output " + nn::shape_string(trace.layer_output(i).shape()) +
                       " but layer produces " + nn::shape_string(expected));
    }
    if (std::holds_alternative<nn::MaxPool1D>(layers[i]) &&
        trace.pool_argmax[i].size() != trace.layer_output(i).size()) {
      throw ShapeError("layer " + std::to_string(i) + ": trace lacks max-pool indices");
    }
  }
}

}  // namespace

void LrpConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite and >= 0");
  }
  if (rule == Rule::AlphaBeta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    if (std::abs(alpha - beta - 1.0) > 1e-12) {
      throw std::invalid_argument("alpha - beta must equal 1");
    }
  }
}

RelevanceMap lrp_propagate(const nn::Network& network, const nn::Trace& trace, const Tensor& seed,
                           const LrpConfig& config) {
  config.validate();
  check_trace(network, trace);
  if (seed.shape() != trace.logits().shape()) {
    throw ShapeError("relevance seed " + nn::shape_string(seed.shape()) + " does not match logits " +
                     nn::shape_string(trace.logits().shape()));
  }

  const auto& layers = network.layers();
  const std::size_t n = layers.size();
  RelevanceMap map;
  map.layer_relevance.resize(n + 1);
  map.absorbed.assign(n, 0.0);
  map.layer_relevance[n] = seed;
  map.target_class = -1;
  map.explained_logit = seed.sum();

  for (std::size_t li = n; li-- > 0;) {
    const Tensor& x = trace.layer_input(li);
    const Tensor& r_out = map.layer_relevance[li + 1];
    Tensor r_in(x.shape());
    if (const auto* d = std::get_if<Dense>(&layers[li])) {
      map.absorbed[li] = config.rule == Rule::Epsilon
                             ? dense_epsilon(*d, x, trace.layer_output(li), r_out, config.epsilon, r_in)
                             : dense_alpha_beta(*d, x, r_out, config.alpha, config.beta, r_in);
    } else if (const auto* c = std::get_if<Conv1D>(&layers[li])) {
      map.absorbed[li] =
          config.rule == Rule::Epsilon
              ? conv_epsilon(*c, x, trace.layer_output(li), r_out, config.epsilon, r_in)
              : conv_alpha_beta(*c, x, trace.layer_output(li), r_out, config.alpha, config.beta, r_in);
    } else if (std::holds_alternative<nn::MaxPool1D>(layers[li])) {
      const auto& argmax = trace.pool_argmax[li];
      for (std::size_t o = 0; o < argmax.size(); ++o) r_in[argmax[o]] += r_out[o];
    } else {
      // ReLU and Flatten: pass-through.
      r_in = r_out.reshaped(x.shape());
    }
    map.layer_relevance[li] = std::move(r_in);
  }
  return map;
}

RelevanceMap lrp_explain(const nn::Network& network, const nn::Trace& trace, int target_class,
                         const LrpConfig& config) {
  const Tensor& logits = trace.logits();
  if (target_class < 0 || static_cast<std::size_t>(target_class) >= logits.size()) {
    throw std::out_of_range("target class " + std::to_string(target_class) + " outside [0, " +
                            std::to_string(logits.size()) + ")");
  }
  Tensor seed(logits.shape());
  seed[static_cast<std::size_t>(target_class)] = logits[static_cast<std::size_t>(target_class)];
  RelevanceMap map = lrp_propagate(network, trace, seed, config);
  map.target_class = target_class;
  map.explained_logit = logits[static_cast<std::size_t>(target_class)];
  return map;
}

double ConservationReport::conservation_error() const noexcept {
  const double diff = std::abs(input_sum - explained_logit);
  return explained_logit != 0.0 ? diff / std::abs(explained_logit) : diff;
}

double ConservationReport::accounting_error() const noexcept {
  const double diff = std::abs(input_sum + total_absorbed - explained_logit);
  return explained_logit != 0.0 ? diff / std::abs(explained_logit) : diff;
}

ConservationReport conservation_report(const RelevanceMap& map) {
  ConservationReport r;
  r.layer_sums.reserve(map.layer_relevance.size());
  for (const Tensor& t : map.layer_relevance) r.layer_sums.push_back(t.sum());
  r.layer_absorbed = map.absorbed;
  for (double a : map.absorbed) r.total_absorbed += a;
  r.explained_logit = map.explained_logit;
  r.input_sum = r.layer_sums.empty() ? 0.0 : r.layer_sums.front();
  return r;
}

}  // namespace gaitlrp::lrp
