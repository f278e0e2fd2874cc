#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "gaitlrp/data/normalize.hpp"
#include "gaitlrp/data/synth.hpp"
#include "gaitlrp/lrp/lrp.hpp"
#include "gaitlrp/nn/train.hpp"

namespace gaitlrp::cli {

// Thrown for bad flags or config contents; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SynthSource {
  data::CohortSpec cohort;
  std::uint64_t seed = 1;
};

// Everything a run needs. Config files are JSON objects whose keys mirror
// these fields; omitted keys keep the defaults below.
//
//   {"data": "cohort.csv" | "synth": {"per_class": 30, "trials": 5, "noise": 0.05, "seed": 7},
//    "T": 100, "k": 10, "seed": 1, "input_layout": "channels",   (or "flat_input": true)
//    "train": {"learning_rate": 0.01, "batch_size": 16, "epochs": 100, "seed": 1,
//              "init": "glorot_uniform", "use_bias": true},
//    "lrp": {"rule": "epsilon", "epsilon": 1e-6, "alpha": 1, "beta": 0, "start": "ground_truth"}}
struct RunConfig {
  std::optional<std::filesystem::path> data;
  std::optional<SynthSource> synth;
  std::size_t T = 100;
  int k = 10;
  std::uint64_t seed = 1;
  data::InputLayout layout = data::InputLayout::Channels;
  nn::TrainConfig train;
  lrp::LrpConfig lrp;

  // Range checks shared with the library; throws UsageError.
  void validate() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace gaitlrp::cli
