#include "gaitlrp/lrp/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "gaitlrp/error.hpp"

namespace gaitlrp::lrp {
namespace {

// Welford accumulator over (channels, T) matrices.
class Accumulator {
 public:
  explicit Accumulator(const nn::Shape& shape)
      : relevance_(shape), mean_(shape), m2_(shape) {}

  void add(const ExplainedTrial& trial) {
    ++count_;
    const double n = static_cast<double>(count_);
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      relevance_[i] += (trial.relevance[i] - relevance_[i]) / n;
      const double delta = trial.signal[i] - mean_[i];
      mean_[i] += delta / n;
      m2_[i] += delta * (trial.signal[i] - mean_[i]);
    }
  }

  std::size_t count() const noexcept { return count_; }

  ClassRelevanceProfile profile(data::AgeGroup group) const {
    ClassRelevanceProfile p;
    p.group = group;
    p.trial_count = count_;
    p.mean_relevance = relevance_;
    p.mean_signal = mean_;
    p.sd_signal = nn::Tensor(m2_.shape());
    for (std::size_t i = 0; i < m2_.size(); ++i) {
      p.sd_signal[i] = std::sqrt(std::max(0.0, m2_[i] / static_cast<double>(count_)));
    }
    return p;
  }

 private:
  std::size_t count_ = 0;
  nn::Tensor relevance_;
  nn::Tensor mean_;
  nn::Tensor m2_;
};

}  // namespace

ClassRelevance aggregate_class_relevance(const std::vector<ExplainedTrial>& trials) {
  ClassRelevance out;
  if (trials.empty()) {
    out.missing.assign(data::kAllAgeGroups.begin(), data::kAllAgeGroups.end());
    return out;
  }
  const nn::Shape shape = trials.front().signal.shape();
  if (shape.size() != 2) throw ShapeError("explained trials must be (channels, T) matrices");

  std::vector<Accumulator> per_class(data::kNumClasses, Accumulator(shape));
  Accumulator pooled(shape);
  for (const ExplainedTrial& t : trials) {
    if (t.signal.shape() != shape || t.relevance.shape() != shape) {
      throw ShapeError("explained trial of shape " + nn::shape_string(t.signal.shape()) +
                       " differs from " + nn::shape_string(shape));
    }
    per_class[data::class_index(t.label)].add(t);
    pooled.add(t);
  }
  for (data::AgeGroup g : data::kAllAgeGroups) {
    const auto& acc = per_class[data::class_index(g)];
    if (acc.count() == 0) {
      out.missing.push_back(g);
    } else {
      out.profiles[data::class_index(g)] = acc.profile(g);
    }
  }
  out.pooled = pooled.profile(data::AgeGroup::Young);
  return out;
}

nn::Tensor total_relevance(const ClassRelevance& relevance) {
  nn::Tensor total;
  for (int c = 0; c < data::kNumClasses; ++c) {
    const auto& p = relevance.profiles[c];
    if (!p) throw MissingClass(c);
    if (total.empty()) total = nn::Tensor(p->mean_relevance.shape());
    if (p->mean_relevance.shape() != total.shape()) {
      throw ShapeError("class relevance profiles differ in shape");
    }
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += std::abs(p->mean_relevance[i]);
  }
  return total;
}

}  // namespace gaitlrp::lrp
