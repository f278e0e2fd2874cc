#include "gaitlrp/data/folds.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "gaitlrp/error.hpp"

namespace gaitlrp::data {

std::vector<std::string> FoldSplit::training_subjects(int fold) const {
  std::vector<std::string> out;
  for (int f = 0; f < k(); ++f) {
    if (f == fold) continue;
    out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  return out;
}

FoldSplit stratified_subject_kfold(const Dataset& dataset, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");

  std::array<std::vector<std::string>, kNumClasses> by_class;
  for (const auto& id : dataset.subject_ids()) {
    by_class[class_index(dataset.subject_label(id))].push_back(id);
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (by_class[c].size() < static_cast<std::size_t>(k)) {
      throw InsufficientSubjects(c, by_class[c].size(), k);
    }
  }

  std::mt19937_64 rng(seed);
  FoldSplit split;
  split.folds.resize(k);
  std::size_t next = 0;
  for (auto& subjects : by_class) {
    std::shuffle(subjects.begin(), subjects.end(), rng);
    for (auto& id : subjects) {
      split.folds[next].push_back(std::move(id));
      next = (next + 1) % static_cast<std::size_t>(k);
    }
  }
  return split;
}

}  // namespace gaitlrp::data
