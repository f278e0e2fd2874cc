#include "gaitlrp/data/age_group.hpp"

#include <stdexcept>
#include <string>

#include "gaitlrp/error.hpp"

namespace gaitlrp::data {

AgeGroup assign_age_group(int age_years) {
  if (age_years < 20 || age_years > 79) throw OutOfRangeAge(age_years);
  if (age_years <= 39) return AgeGroup::Young;
  if (age_years <= 64) return AgeGroup::MiddleAged;
  return AgeGroup::Older;
}

AgeGroup age_group_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw std::out_of_range("class index " + std::to_string(index) + " not in [0, 3)");
  }
  return static_cast<AgeGroup>(index);
}

std::string_view age_group_name(AgeGroup g) noexcept {
  switch (g) {
    case AgeGroup::Young: return "young";
    case AgeGroup::MiddleAged: return "middle_aged";
    case AgeGroup::Older: return "older";
  }
  return "unknown";
}

std::array<int, 2> age_range(AgeGroup g) noexcept {
  switch (g) {
    case AgeGroup::Young: return {20, 39};
    case AgeGroup::MiddleAged: return {40, 64};
    case AgeGroup::Older: return {65, 79};
  }
  return {0, 0};
}

}  // namespace gaitlrp::data
