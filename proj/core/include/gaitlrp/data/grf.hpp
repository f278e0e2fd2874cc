#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gaitlrp::data {

enum class Side : int { Left = 0, Right = 1 };
enum class Component : int { AP = 0, ML = 1, V = 2 };

inline constexpr std::size_t kNumSides = 2;
inline constexpr std::size_t kNumComponents = 3;
inline constexpr std::size_t kNumChannels = kNumSides * kNumComponents;

// Canonical channel order is (Left, Right) x (AP, ML, V).
constexpr std::size_t channel_index(Side s, Component c) noexcept {
  return static_cast<std::size_t>(s) * kNumComponents + static_cast<std::size_t>(c);
}

std::string_view side_code(Side s) noexcept;            // "L" / "R"
std::string_view component_code(Component c) noexcept;  // "AP" / "ML" / "V"

// One stance-phase recording: six force curves sharing the same length.
struct GrfTrial {
  std::string subject_id;
  int age_years = 0;
  int trial_number = 0;
  std::array<std::vector<double>, kNumChannels> channels;

  std::size_t length() const noexcept { return channels[0].size(); }

  std::span<const double> curve(Side s, Component c) const noexcept {
    return channels[channel_index(s, c)];
  }
  std::vector<double>& curve(Side s, Component c) noexcept {
    return channels[channel_index(s, c)];
  }
};

// Throws ParseError if the curves disagree in length, are shorter than 2, or
// contain a non-finite sample.
void validate_trial(const GrfTrial& trial);

}  // namespace gaitlrp::data
