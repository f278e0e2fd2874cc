#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "gaitlrp/data/age_group.hpp"
#include "gaitlrp/data/dataset.hpp"

namespace gaitlrp::eval {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  static constexpr int kSize = data::kNumClasses;

  void add(int true_class, int predicted_class, std::size_t count = 1);
  std::size_t at(int true_class, int predicted_class) const;
  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t row_sum(int true_class) const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::array<std::array<std::size_t, kSize>, kSize> counts_{};
};

// trace / total. Throws EmptyMatrix when total == 0.
double accuracy(const ConfusionMatrix& matrix);

// Share of the most frequent label; throws EmptyDataset.
double zero_rule(const data::Dataset& dataset);
double zero_rule(std::span<const data::AgeGroup> labels);

// Population mean and SD (divisor n) of a list of values.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
MeanSd mean_sd(std::span<const double> values);

}  // namespace gaitlrp::eval
