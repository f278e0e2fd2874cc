#pragma once

#include <array>
#include <string_view>

namespace gaitlrp::data {

// Class indices are fixed: Young = 0, MiddleAged = 1, Older = 2.
enum class AgeGroup : int { Young = 0, MiddleAged = 1, Older = 2 };

inline constexpr int kNumClasses = 3;

inline constexpr std::array<AgeGroup, kNumClasses> kAllAgeGroups = {
    AgeGroup::Young, AgeGroup::MiddleAged, AgeGroup::Older};

constexpr int class_index(AgeGroup g) noexcept { return static_cast<int>(g); }

// Young: 20-39, MiddleAged: 40-64, Older: 65-79. Throws OutOfRangeAge otherwise.
AgeGroup assign_age_group(int age_years);

AgeGroup age_group_from_index(int index);

// Lower-case identifier used in file names and exports ("young", "middle_aged", "older").
std::string_view age_group_name(AgeGroup g) noexcept;

// Inclusive age range of a group.
std::array<int, 2> age_range(AgeGroup g) noexcept;

}  // namespace gaitlrp::data
