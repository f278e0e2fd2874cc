#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gaitlrp/data/dataset.hpp"
#include "gaitlrp/nn/tensor.hpp"

namespace gaitlrp::data {

struct ChannelRange {
  double min_value = 0.0;
  double max_value = 0.0;

  bool degenerate() const noexcept { return max_value == min_value; }
  // (x - min) / (max - min); 0.5 for a degenerate range. Not clipped.
  double apply(double x) const noexcept;
};

struct NormParams {
  std::array<ChannelRange, kNumChannels> channels{};
};

// Per-channel extrema over every trial of the given subjects.
// Throws EmptySelection if `subject_ids` is empty, std::out_of_range for an
// unknown subject.
NormParams fit_norm_params(const Dataset& dataset, std::span<const std::string> subject_ids);

// Min-max maps each channel and concatenates them in `order` (canonical order
// when empty). Result length is order.size() * T.
std::vector<double> normalize_and_concatenate(const GrfTrial& trial, const NormParams& params,
                                              std::span<const std::size_t> order = {});

// How a normalized trial is laid out as network input.
enum class InputLayout {
  Channels,      // (6, T)
  Flat,          // (1, 6T), the literal concatenation
  SideAveraged,  // (3, T), left and right averaged after normalization
};

std::string_view input_layout_name(InputLayout layout) noexcept;
InputLayout input_layout_from_name(std::string_view name);

// Number of network input channels and their length for a layout.
std::size_t input_channels(InputLayout layout) noexcept;
std::size_t input_length(InputLayout layout, std::size_t T) noexcept;

// (side, component) label of each relevance/signal channel after mapping a
// network input back to time coordinates. SideAveraged channels use side "B".
struct ChannelLabel {
  std::string side;
  std::string component;
};
std::vector<ChannelLabel> channel_labels(InputLayout layout);

nn::Tensor make_input(const GrfTrial& trial, const NormParams& params, InputLayout layout);

// View any network-input-shaped tensor as (channels, T) rows, where channels
// follows channel_labels(layout). Returns a tensor of shape {channels, T}.
nn::Tensor to_channel_rows(const nn::Tensor& input_like, InputLayout layout, std::size_t T);

}  // namespace gaitlrp::data
