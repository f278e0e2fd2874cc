#include "gaitlrp/data/normalize.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "gaitlrp/error.hpp"

namespace gaitlrp::data {

double ChannelRange::apply(double x) const noexcept {
  if (degenerate()) return 0.5;
  return (x - min_value) / (max_value - min_value);
}

NormParams fit_norm_params(const Dataset& dataset, std::span<const std::string> subject_ids) {
  if (subject_ids.empty()) throw EmptySelection();
  NormParams params;
  for (auto& r : params.channels) {
    r.min_value = std::numeric_limits<double>::infinity();
    r.max_value = -std::numeric_limits<double>::infinity();
  }
  for (const auto& id : subject_ids) {
    for (std::size_t t : dataset.trials_of(id)) {
      const GrfTrial& trial = dataset.trial(t);
      for (std::size_t c = 0; c < kNumChannels; ++c) {
        const auto [lo, hi] = std::minmax_element(trial.channels[c].begin(), trial.channels[c].end());
        params.channels[c].min_value = std::min(params.channels[c].min_value, *lo);
        params.channels[c].max_value = std::max(params.channels[c].max_value, *hi);
      }
    }
  }
  return params;
}

std::vector<double> normalize_and_concatenate(const GrfTrial& trial, const NormParams& params,
                                              std::span<const std::size_t> order) {
  static constexpr std::array<std::size_t, kNumChannels> kCanonical = {0, 1, 2, 3, 4, 5};
  if (order.empty()) order = kCanonical;
  const std::size_t n = trial.length();
  std::vector<double> out;
  out.reserve(order.size() * n);
  for (std::size_t c : order) {
    const ChannelRange& range = params.channels.at(c);
    for (double v : trial.channels.at(c)) out.push_back(range.apply(v));
  }
  return out;
}

std::string_view input_layout_name(InputLayout layout) noexcept {
  switch (layout) {
    case InputLayout::Channels: return "channels";
    case InputLayout::Flat: return "flat";
    case InputLayout::SideAveraged: return "side_averaged";
  }
  return "unknown";
}

InputLayout input_layout_from_name(std::string_view name) {
  if (name == "channels") return InputLayout::Channels;
  if (name == "flat") return InputLayout::Flat;
  if (name == "side_averaged") return InputLayout::SideAveraged;
  throw std::invalid_argument("unknown input layout '" + std::string(name) + "'");
}

std::size_t input_channels(InputLayout layout) noexcept {
  switch (layout) {
    case InputLayout::Channels: return kNumChannels;
    case InputLayout::Flat: return 1;
    case InputLayout::SideAveraged: return kNumComponents;
  }
  return 0;
}

std::size_t input_length(InputLayout layout, std::size_t T) noexcept {
  return layout == InputLayout::Flat ? kNumChannels * T : T;
}

std::vector<ChannelLabel> channel_labels(InputLayout layout) {
  std::vector<ChannelLabel> labels;
  if (layout == InputLayout::SideAveraged) {
    for (std::size_t c = 0; c < kNumComponents; ++c) {
      labels.push_back({"B", std::string(component_code(static_cast<Component>(c)))});
    }
    return labels;
  }
  for (std::size_t s = 0; s < kNumSides; ++s) {
    for (std::size_t c = 0; c < kNumComponents; ++c) {
      labels.push_back({std::string(side_code(static_cast<Side>(s))),
                        std::string(component_code(static_cast<Component>(c)))});
    }
  }
  return labels;
}

nn::Tensor make_input(const GrfTrial& trial, const NormParams& params, InputLayout layout) {
  const std::size_t T = trial.length();
  std::vector<double> flat = normalize_and_concatenate(trial, params);
  switch (layout) {
    case InputLayout::Channels: return nn::Tensor({kNumChannels, T}, std::move(flat));
    case InputLayout::Flat: return nn::Tensor({1, kNumChannels * T}, std::move(flat));
    case InputLayout::SideAveraged: {
      nn::Tensor out({kNumComponents, T});
      for (std::size_t c = 0; c < kNumComponents; ++c) {
        for (std::size_t t = 0; t < T; ++t) {
          out.at(c, t) = 0.5 * (flat[c * T + t] + flat[(kNumComponents + c) * T + t]);
        }
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown input layout");
}

nn::Tensor to_channel_rows(const nn::Tensor& input_like, InputLayout layout, std::size_t T) {
  const std::size_t channels = layout == InputLayout::SideAveraged ? kNumComponents : kNumChannels;
  return input_like.reshaped({channels, T});
}

}  // namespace gaitlrp::data
