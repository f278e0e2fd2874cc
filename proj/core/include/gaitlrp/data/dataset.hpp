#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gaitlrp/data/age_group.hpp"
#include "gaitlrp/data/grf.hpp"

namespace gaitlrp::data {

// Immutable collection of labeled trials with a subject index.
//
// Invariants established by the constructor: every trial has `length()`
// samples per channel, every trial of a subject carries the same label, and
// the subject index partitions the trial list.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<GrfTrial> trials);

  const std::vector<GrfTrial>& trials() const noexcept { return trials_; }
  const std::vector<AgeGroup>& labels() const noexcept { return labels_; }
  const GrfTrial& trial(std::size_t i) const { return trials_.at(i); }
  AgeGroup label(std::size_t i) const { return labels_.at(i); }

  std::size_t size() const noexcept { return trials_.size(); }
  bool empty() const noexcept { return trials_.empty(); }
  std::size_t length() const noexcept { return length_; }

  // Subject ids in lexicographic order.
  std::vector<std::string> subject_ids() const;
  const std::vector<std::size_t>& trials_of(const std::string& subject_id) const;
  AgeGroup subject_label(const std::string& subject_id) const;
  bool has_subject(const std::string& subject_id) const;
  std::size_t subject_count() const noexcept { return subject_index_.size(); }

  // Trial indices (ascending) belonging to any of the given subjects.
  std::vector<std::size_t> trials_of(const std::vector<std::string>& subject_ids) const;

  std::array<std::size_t, kNumClasses> class_counts() const noexcept;

 private:
  std::vector<GrfTrial> trials_;
  std::vector<AgeGroup> labels_;
  std::map<std::string, std::vector<std::size_t>> subject_index_;
  std::size_t length_ = 0;
};

}  // namespace gaitlrp::data
