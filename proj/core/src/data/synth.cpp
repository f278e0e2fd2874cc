#include "gaitlrp/data/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace gaitlrp::data {
namespace {

double bump(double t, double center, double width) {
  const double d = (t - center) / width;
  return std::exp(-0.5 * d * d);
}

// Parameters shared by all trials of one subject.
struct SubjectShape {
  double first_peak = 0.0;
  double second_peak = 0.0;
  double propulsion = 0.0;
  double ml_phase = 0.0;
};

}  // namespace

Dataset synth_generate(const CohortSpec& spec, std::uint64_t seed) {
  if (spec.subjects_per_class < 1 || spec.trials_per_subject < 1) {
    throw std::invalid_argument("cohort counts must be >= 1");
  }
  if (spec.length < 2) throw std::invalid_argument("curve length must be >= 2");
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw std::invalid_argument("noise level must be finite and >= 0");
  }

  using S = SynthShape;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t T = spec.length;

  std::vector<GrfTrial> trials;
  trials.reserve(static_cast<std::size_t>(kNumClasses * spec.subjects_per_class *
                                          spec.trials_per_subject));

  for (AgeGroup group : kAllAgeGroups) {
    const int c = class_index(group);
    const auto [age_lo, age_hi] = age_range(group);
    std::uniform_int_distribution<int> age_dist(age_lo, age_hi);

    for (int s = 0; s < spec.subjects_per_class; ++s) {
      const std::string id = fmt::format("{}_{:03}", age_group_name(group), s);
      const int age = age_dist(rng);
      SubjectShape shape;
      shape.first_peak = S::kFirstPeakAmplitude + S::kFirstPeakSpread * normal(rng);
      shape.second_peak = S::kSecondPeakAmplitude[c] + S::kSubjectSpread[c] * normal(rng);
      shape.propulsion =
          S::kPropulsionAmplitude[c] + 0.2 * S::kSubjectSpread[c] * normal(rng);
      shape.ml_phase = 0.1 * normal(rng);

      for (int r = 0; r < spec.trials_per_subject; ++r) {
        GrfTrial trial;
        trial.subject_id = id;
        trial.age_years = age;
        trial.trial_number = r + 1;
        for (std::size_t side = 0; side < kNumSides; ++side) {
          const double p1 = shape.first_peak + S::kTrialSpread * normal(rng);
          const double p2 = shape.second_peak + S::kTrialSpread * normal(rng);
          const double prop = shape.propulsion + 0.2 * S::kTrialSpread * normal(rng);
          auto& ap = trial.curve(static_cast<Side>(side), Component::AP);
          auto& ml = trial.curve(static_cast<Side>(side), Component::ML);
          auto& v = trial.curve(static_cast<Side>(side), Component::V);
          ap.resize(T);
          ml.resize(T);
          v.resize(T);
          // Medial direction flips sign between feet.
          const double ml_sign = side == 0 ? 1.0 : -1.0;
          for (std::size_t i = 0; i < T; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(T - 1);
            v[i] = p1 * bump(t, S::kFirstPeakCenter, S::kPeakWidth) +
                   p2 * bump(t, S::kSecondPeakCenter, S::kPeakWidth);
            ap[i] = -S::kBrakingAmplitude * bump(t, 0.2, S::kPeakWidth) +
                    prop * bump(t, 0.8, S::kPeakWidth);
            ml[i] = ml_sign * S::kMediolateralAmplitude *
                    std::sin(2.0 * std::numbers::pi * t + shape.ml_phase) *
                    std::sin(std::numbers::pi * t);
          }
          if (spec.noise > 0.0) {
            for (auto* curve : {&ap, &ml, &v}) {
              for (double& x : *curve) x += spec.noise * normal(rng);
            }
          }
        }
        trials.push_back(std::move(trial));
      }
    }
  }
  return Dataset(std::move(trials));
}

}  // namespace gaitlrp::data
