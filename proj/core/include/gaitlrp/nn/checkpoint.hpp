#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gaitlrp/data/normalize.hpp"
#include "gaitlrp/nn/network.hpp"

namespace gaitlrp::nn {

// Preprocessing a checkpoint needs to turn a raw trial back into model input.
struct Preprocessing {
  std::size_t length = 0;
  data::InputLayout layout = data::InputLayout::Channels;
  data::NormParams norm;
};

struct Checkpoint {
  Network network;
  std::optional<Preprocessing> preprocessing;
};

// JSON document:
//
//   {
//     "format": "gaitlrp-model", "version": 1,
//     "input_shape": [6, 100],
//     "layers": [
//       {"type": "conv1d", "in_channels": 6, "out_channels": 16, "kernel_size": 5,
//        "stride": 1, "padding": 2, "weight": [...], "bias": [...]},
//       {"type": "relu"}, {"type": "maxpool1d", "window": 2, "stride": 2},
//       {"type": "flatten"},
//       {"type": "dense", "in_features": 800, "out_features": 64, "weight": [...], "bias": [...]}
//     ],
//     "preprocessing": {"length": 100, "layout": "channels",
//                       "norm": [{"min": ..., "max": ...} x 6]}   // optional
//   }
//
// Parameter arrays are flat row-major decimal numbers written in shortest
// round-trip form, so save followed by load is bit-exact.
std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gaitlrp::nn
