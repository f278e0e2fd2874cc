#include "gaitlrp/data/grf.hpp"

#include <cmath>

#include "gaitlrp/error.hpp"

namespace gaitlrp::data {

std::string_view side_code(Side s) noexcept { return s == Side::Left ? "L" : "R"; }

std::string_view component_code(Component c) noexcept {
  switch (c) {
    case Component::AP: return "AP";
    case Component::ML: return "ML";
    case Component::V: return "V";
  }
  return "?";
}

void validate_trial(const GrfTrial& trial) {
  const std::size_t n = trial.length();
  if (n < 2) {
    throw ParseError(0, "trial " + trial.subject_id + "/" + std::to_string(trial.trial_number) +
                            " has curves shorter than 2 samples");
  }
  for (const auto& curve : trial.channels) {
    if (curve.size() != n) {
      throw ParseError(0, "trial " + trial.subject_id + "/" + std::to_string(trial.trial_number) +
                              " has curves of different lengths");
    }
    for (double v : curve) {
      if (!std::isfinite(v)) {
        throw ParseError(0, "trial " + trial.subject_id + "/" +
                                std::to_string(trial.trial_number) + " has a non-finite sample");
      }
    }
  }
}

}  // namespace gaitlrp::data
