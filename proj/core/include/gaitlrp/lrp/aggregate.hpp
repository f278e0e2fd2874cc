#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "gaitlrp/data/age_group.hpp"
#include "gaitlrp/data/normalize.hpp"
#include "gaitlrp/nn/tensor.hpp"

namespace gaitlrp::lrp {

// One explained trial in time coordinates: both tensors have shape
// (channels, T) as produced by data::to_channel_rows.
struct ExplainedTrial {
  nn::Tensor relevance;
  nn::Tensor signal;
  data::AgeGroup label = data::AgeGroup::Young;
};

// Per-class summary. Every curve matrix has shape (channels, T). Positive
// relevance speaks for the class the trials were explained at.
struct ClassRelevanceProfile {
  data::AgeGroup group = data::AgeGroup::Young;
  std::size_t trial_count = 0;
  nn::Tensor mean_relevance;
  nn::Tensor mean_signal;
  nn::Tensor sd_signal;  // population SD (divisor N)
};

struct ClassRelevance {
  std::array<std::optional<ClassRelevanceProfile>, data::kNumClasses> profiles;
  // Signal mean/SD over all trials regardless of class (trial_count = total).
  std::optional<ClassRelevanceProfile> pooled;
  // Classes without any trial; their profile is omitted.
  std::vector<data::AgeGroup> missing;

  bool complete() const noexcept { return missing.empty(); }
};

// Throws ShapeError if the trials disagree in shape.
ClassRelevance aggregate_class_relevance(const std::vector<ExplainedTrial>& trials);

// Pointwise sum over classes of |mean relevance|; shape (channels, T).
// Throws MissingClass if a class profile is absent.
nn::Tensor total_relevance(const ClassRelevance& relevance);

}  // namespace gaitlrp::lrp
