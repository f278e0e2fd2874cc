#include "gaitlrp/data/dataset.hpp"

#include <algorithm>
#include <stdexcept>

#include "gaitlrp/error.hpp"

namespace gaitlrp::data {

Dataset::Dataset(std::vector<GrfTrial> trials) : trials_(std::move(trials)) {
  labels_.reserve(trials_.size());
  for (std::size_t i = 0; i < trials_.size(); ++i) {
    const GrfTrial& t = trials_[i];
    validate_trial(t);
    if (i == 0) {
      length_ = t.length();
    } else if (t.length() != length_) {
      throw ParseError(0, "trial " + t.subject_id + "/" + std::to_string(t.trial_number) +
                              " has length " + std::to_string(t.length()) + ", expected " +
                              std::to_string(length_));
    }
    const AgeGroup label = assign_age_group(t.age_years);
    auto [it, inserted] = subject_index_.try_emplace(t.subject_id);
    if (!inserted && labels_[it->second.front()] != label) {
      throw ParseError(0, "subject " + t.subject_id + " has trials in different age groups");
    }
    it->second.push_back(i);
    labels_.push_back(label);
  }
}

std::vector<std::string> Dataset::subject_ids() const {
  std::vector<std::string> ids;
  ids.reserve(subject_index_.size());
  for (const auto& [id, _] : subject_index_) ids.push_back(id);
  return ids;
}

const std::vector<std::size_t>& Dataset::trials_of(const std::string& subject_id) const {
  auto it = subject_index_.find(subject_id);
  if (it == subject_index_.end()) throw std::out_of_range("unknown subject " + subject_id);
  return it->second;
}

std::vector<std::size_t> Dataset::trials_of(const std::vector<std::string>& subject_ids) const {
  std::vector<std::size_t> out;
  for (const auto& id : subject_ids) {
    const auto& t = trials_of(id);
    out.insert(out.end(), t.begin(), t.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

AgeGroup Dataset::subject_label(const std::string& subject_id) const {
  return labels_[trials_of(subject_id).front()];
}

bool Dataset::has_subject(const std::string& subject_id) const {
  return subject_index_.contains(subject_id);
}

std::array<std::size_t, kNumClasses> Dataset::class_counts() const noexcept {
  std::array<std::size_t, kNumClasses> counts{};
  for (AgeGroup g : labels_) ++counts[class_index(g)];
  return counts;
}

}  // namespace gaitlrp::data
