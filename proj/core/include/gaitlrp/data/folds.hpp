#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitlrp/data/dataset.hpp"

namespace gaitlrp::data {

struct FoldSplit {
  std::vector<std::vector<std::string>> folds;  // subject ids per fold

  int k() const noexcept { return static_cast<int>(folds.size()); }
  // Subjects of every fold except `fold`, in fold order.
  std::vector<std::string> training_subjects(int fold) const;
};

// Subject-level stratified k-fold split. Within each class, subjects (sorted
// by id) are shuffled with `seed` and dealt round-robin; the dealing position
// carries over from one class to the next so overall fold sizes stay
// balanced too.
//
// Throws std::invalid_argument for k < 2 and InsufficientSubjects when a class
// has fewer than k subjects.
FoldSplit stratified_subject_kfold(const Dataset& dataset, int k, std::uint64_t seed);

}  // namespace gaitlrp::data
