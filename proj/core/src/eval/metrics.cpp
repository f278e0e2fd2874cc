#include "gaitlrp/eval/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "gaitlrp/error.hpp"

namespace gaitlrp::eval {
namespace {

void check_class(int c) {
  if (c < 0 || c >= ConfusionMatrix::kSize) {
    throw std::out_of_range("class index " + std::to_string(c) + " outside [0, 3)");
  }
}

}  // namespace

void ConfusionMatrix::add(int true_class, int predicted_class, std::size_t count) {
  check_class(true_class);
  check_class(predicted_class);
  counts_[true_class][predicted_class] += count;
}

std::size_t ConfusionMatrix::at(int true_class, int predicted_class) const {
  check_class(true_class);
  check_class(predicted_class);
  return counts_[true_class][predicted_class];
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts_) {
    for (std::size_t v : row) n += v;
  }
  return n;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t n = 0;
  for (int i = 0; i < kSize; ++i) n += counts_[i][i];
  return n;
}

std::size_t ConfusionMatrix::row_sum(int true_class) const {
  check_class(true_class);
  std::size_t n = 0;
  for (std::size_t v : counts_[true_class]) n += v;
  return n;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) noexcept {
  for (int i = 0; i < kSize; ++i) {
    for (int j = 0; j < kSize; ++j) counts_[i][j] += other.counts_[i][j];
  }
  return *this;
}

double accuracy(const ConfusionMatrix& matrix) {
  const std::size_t total = matrix.total();
  if (total == 0) throw EmptyMatrix();
  return static_cast<double>(matrix.trace()) / static_cast<double>(total);
}

double zero_rule(std::span<const data::AgeGroup> labels) {
  if (labels.empty()) throw EmptyDataset();
  std::array<std::size_t, data::kNumClasses> counts{};
  for (data::AgeGroup g : labels) ++counts[data::class_index(g)];
  std::size_t best = 0;
  for (std::size_t c : counts) best = std::max(best, c);
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

double zero_rule(const data::Dataset& dataset) { return zero_rule(dataset.labels()); }

MeanSd mean_sd(std::span<const double> values) {
  MeanSd r;
  if (values.empty()) return r;
  const double n = static_cast<double>(values.size());
  for (double v : values) r.mean += v;
  r.mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.sd = std::sqrt(ss / n);
  return r;
}

}  // namespace gaitlrp::eval
