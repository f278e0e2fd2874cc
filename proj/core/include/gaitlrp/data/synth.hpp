#pragma once

#include <cstddef>
#include <cstdint>

#include "gaitlrp/data/dataset.hpp"

namespace gaitlrp::data {

struct CohortSpec {
  int subjects_per_class = 30;
  int trials_per_subject = 5;
  std::size_t length = 100;
  double noise = 0.05;
};

// Shape constants of the synthetic cohort, in body-weight units. These are
// artifact choices, not measured values.
struct SynthShape {
  // V: two Gaussian bumps (M shape).
  static constexpr double kFirstPeakCenter = 0.25;
  static constexpr double kSecondPeakCenter = 0.75;
  static constexpr double kPeakWidth = 0.09;
  static constexpr double kFirstPeakAmplitude = 1.05;
  // Second V peak per class: Young, MiddleAged, Older.
  static constexpr double kSecondPeakAmplitude[3] = {1.30, 1.05, 0.80};
  // AP: braking trough then propulsive bump; propulsion per class.
  static constexpr double kBrakingAmplitude = 0.20;
  static constexpr double kPropulsionAmplitude[3] = {0.26, 0.21, 0.16};
  // ML: low-amplitude oscillation.
  static constexpr double kMediolateralAmplitude = 0.05;
  // Between-subject SD of class-dependent parameters, per class.
  static constexpr double kSubjectSpread[3] = {0.012, 0.02, 0.012};
  // Class-independent between-subject SD of the first V peak.
  static constexpr double kFirstPeakSpread = 0.06;
  // Within-subject, between-trial SD of peak amplitudes.
  static constexpr double kTrialSpread = 0.01;
};

// Deterministic synthetic cohort; a pure function of (spec, seed). Subject ids
// are "<class>_<nn>" and ages are drawn uniformly from each group's range.
//
// Throws std::invalid_argument when a count is < 1, length < 2 or noise < 0.
Dataset synth_generate(const CohortSpec& spec, std::uint64_t seed);

}  // namespace gaitlrp::data
