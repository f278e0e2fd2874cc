#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "gaitlrp/data/normalize.hpp"
#include "gaitlrp/eval/crossval.hpp"
#include "gaitlrp/lrp/aggregate.hpp"

namespace gaitlrp::eval {

// --- metrics file ----------------------------------------------------------
//
//   accuracy_mean=<x>
//   accuracy_sd=<x>
//   zero_rule=<x>
//   subject_vote_accuracy=<x>
//   folds=<k>
//   fold_accuracy_<i>=<x>        (one line per fold)
//   trials=<n>
//   confusion_matrix=            (followed by C lines of C integers)
//   <c00> <c01> <c02>
//   ...
//
// Numbers use the shortest representation that round-trips exactly.
void write_metrics(std::ostream& out, const CvResult& result);

struct Metrics {
  double accuracy_mean = 0.0;
  double accuracy_sd = 0.0;
  double zero_rule = 0.0;
  double subject_vote_accuracy = 0.0;
  std::vector<double> fold_accuracies;
  std::size_t trials = 0;
  ConfusionMatrix confusion;
};
Metrics read_metrics(std::istream& in);

// --- relevance export ------------------------------------------------------
//
//   class,side,component,t,mean_signal,sd_signal,mean_relevance
//
// One row per (class, channel, t) for each class present, followed by rows
// with class TOTAL carrying the pooled signal statistics and the total
// relevance curve.
inline constexpr const char* kRelevanceHeader =
    "class,side,component,t,mean_signal,sd_signal,mean_relevance";

struct RelevanceTable {
  std::vector<data::ChannelLabel> channels;
  std::size_t length = 0;
  lrp::ClassRelevance relevance;
  nn::Tensor total;  // empty when absent
};

void write_relevance(std::ostream& out, const RelevanceTable& table);
RelevanceTable read_relevance(std::istream& in);

// Rows for a single explained trial, labeled with the explained class:
// mean_signal is the model input, sd_signal 0, mean_relevance the relevance.
void write_trial_relevance(std::ostream& out, const std::vector<data::ChannelLabel>& channels,
                           data::AgeGroup explained_class, const nn::Tensor& signal_rows,
                           const nn::Tensor& relevance_rows);

// --- colour scale ------------------------------------------------------------

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Diverging scale: -1 -> against colour (blue), 0 -> neutral, +1 -> in-favor
// colour (yellow). Linear in between.
struct ColorScale {
  static constexpr Rgb kAgainst{59, 76, 192};
  static constexpr Rgb kNeutral{242, 242, 242};
  static constexpr Rgb kInFavor{253, 200, 37};

  // Relevance is divided by `magnitude` and clamped to [-1, 1]; a zero
  // magnitude yields the neutral colour.
  static Rgb color(double relevance, double magnitude) noexcept;
};

std::string to_hex(Rgb c);

// --- SVG plots -----------------------------------------------------------------
//
// One file per class and channel, named class_<name>_<side>_<component>.svg:
// mean signal line, +-1 SD band split into per-sample segments filled by the
// colour of the mean relevance there, and an embedded colour bar. The colour
// magnitude is max |mean relevance| over all channels of that class. Plus
// total_relevance.svg with one panel per channel.
std::string render_class_svg(const lrp::ClassRelevanceProfile& profile, std::size_t channel,
                             const data::ChannelLabel& label);
std::string render_total_svg(const nn::Tensor& total,
                             const std::vector<data::ChannelLabel>& channels);
std::string class_svg_name(data::AgeGroup group, const data::ChannelLabel& label);

// Writes every SVG for the table into `directory` (created if needed).
void write_plots(const std::filesystem::path& directory, const RelevanceTable& table);

RelevanceTable relevance_table(const CvResult& result);

// Writes metrics.txt, relevance.csv and all SVG plots into `directory`.
// Throws IoError when the directory or a file cannot be written.
void export_report(const CvResult& result, const std::filesystem::path& directory);

}  // namespace gaitlrp::eval
