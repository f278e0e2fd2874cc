#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gaitlrp/data/synth.hpp"
#include "gaitlrp/error.hpp"
#include "gaitlrp/eval/crossval.hpp"
#include "gaitlrp/eval/metrics.hpp"
#include "gaitlrp/eval/report.hpp"

namespace gaitlrp::eval {
namespace {

using data::AgeGroup;
using testing::make_dataset;

TEST(ZeroRule, Examples) {
  EXPECT_EQ(zero_rule(make_dataset({2, 2, 2})), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(zero_rule(make_dataset({6, 3, 1}, 1)), 0.6);
  EXPECT_THROW(zero_rule(data::Dataset{}), EmptyDataset);
  EXPECT_THROW(zero_rule(std::span<const AgeGroup>{}), EmptyDataset);
}

TEST(ZeroRuleProperty, MatchesCounting) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    std::uniform_int_distribution<int> n(1, 40), c(0, 2);
    std::vector<AgeGroup> labels(static_cast<std::size_t>(n(rng)));
    for (auto& l : labels) l = data::age_group_from_index(c(rng));
    std::size_t best = 0;
    for (AgeGroup g : data::kAllAgeGroups)
      best = std::max<std::size_t>(best, std::count(labels.begin(), labels.end(), g));
    EXPECT_EQ(zero_rule(labels), static_cast<double>(best) / static_cast<double>(labels.size()));
  }
}

TEST(Accuracy, Examples) {
  ConfusionMatrix identity;
  for (int c = 0; c < 3; ++c) identity.add(c, c, 4);
  EXPECT_EQ(accuracy(identity), 1.0);

  ConfusionMatrix off;
  off.add(0, 1, 3);
  off.add(2, 0, 1);
  EXPECT_EQ(accuracy(off), 0.0);

  ConfusionMatrix m;
  m.add(0, 0, 5);
  m.add(1, 1, 3);
  m.add(2, 2, 2);
  m.add(0, 2, 4);
  m.add(1, 0, 6);
  EXPECT_EQ(m.total(), 20u);
  EXPECT_EQ(accuracy(m), 0.5);
  EXPECT_EQ(m.row_sum(1), 9u);

  EXPECT_THROW(accuracy(ConfusionMatrix{}), EmptyMatrix);
  EXPECT_THROW(m.add(3, 0), std::out_of_range);
}

TEST(MeanSd, Population) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const MeanSd r = mean_sd(v);
  EXPECT_EQ(r.mean, 5.0);
  EXPECT_EQ(r.sd, 2.0);
}

CvOptions small_options() {
  CvOptions o;
  o.k = 3;
  o.seed = 11;
  o.train.epochs = 3;
  o.train.batch_size = 4;
  o.train.learning_rate = 0.05;
  o.threads = 1;
  return o;
}

const data::Dataset& small_cohort() {
  static const data::Dataset ds = data::synth_generate({4, 2, 24, 0.05}, 7);
  return ds;
}

TEST(CrossValidation, Bookkeeping) {
  const CvResult r = run_cross_validation(small_cohort(), small_options());
  ASSERT_EQ(r.fold_accuracies.size(), 3u);
  EXPECT_EQ(r.confusion.total(), small_cohort().size());
  for (int c = 0; c < 3; ++c) EXPECT_EQ(r.confusion.row_sum(c), 8u);
  EXPECT_EQ(r.zero_rule, 1.0 / 3.0);
  EXPECT_EQ(r.length, 24u);
  const MeanSd ms = mean_sd(r.fold_accuracies);
  EXPECT_NEAR(r.accuracy_mean, ms.mean, 1e-12);
  EXPECT_NEAR(r.accuracy_sd, ms.sd, 1e-12);
  double manual = 0.0;
  for (double a : r.fold_accuracies) manual += a;
  EXPECT_NEAR(r.accuracy_mean, manual / 3.0, 1e-12);
  ASSERT_TRUE(r.relevance.complete());
  for (const auto& p : r.relevance.profiles) {
    EXPECT_EQ(p->trial_count, 8u);
    EXPECT_EQ(p->mean_relevance.shape(), (nn::Shape{6, 24}));
  }
  EXPECT_EQ(r.relevance.pooled->trial_count, 24u);
  for (const auto& losses : r.fold_loss) EXPECT_EQ(losses.size(), 3u);
}

TEST(CrossValidation, DeterministicAndThreadInvariant) {
  CvOptions o = small_options();
  const CvResult a = run_cross_validation(small_cohort(), o);
  o.threads = 3;
  const CvResult b = run_cross_validation(small_cohort(), o);
  EXPECT_EQ(a.fold_accuracies, b.fold_accuracies);
  EXPECT_EQ(a.confusion, b.confusion);
  EXPECT_EQ(a.fold_loss, b.fold_loss);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(a.relevance.profiles[c]->mean_relevance, b.relevance.profiles[c]->mean_relevance);
  }
  std::ostringstream ma, mb;
  write_metrics(ma, a);
  write_metrics(mb, b);
  EXPECT_EQ(ma.str(), mb.str());
}

TEST(CrossValidation, LayoutsChangeShapes) {
  CvOptions o = small_options();
  o.train.epochs = 1;
  o.layout = data::InputLayout::SideAveraged;
  const CvResult r = run_cross_validation(small_cohort(), o);
  EXPECT_EQ(r.relevance.profiles[0]->mean_relevance.shape(), (nn::Shape{3, 24}));
  o.layout = data::InputLayout::Flat;
  const CvResult f = run_cross_validation(small_cohort(), o);
  // Flat inputs are still reported per channel.
  EXPECT_EQ(f.relevance.profiles[0]->mean_relevance.shape(), (nn::Shape{6, 24}));
}

TEST(CrossValidation, Errors) {
  CvOptions o = small_options();
  o.k = 5;
  EXPECT_THROW(run_cross_validation(small_cohort(), o), InsufficientSubjects);
  o = small_options();
  o.train.learning_rate = 1e308;
  o.train.epochs = 20;
  try {
    run_cross_validation(small_cohort(), o);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_TRUE(e.fold().has_value());
  }
}

TEST(Metrics, RoundTripIsExact) {
  CvResult r;
  r.fold_accuracies = {0.1, 2.0 / 3.0, 1.0};
  const MeanSd ms = mean_sd(r.fold_accuracies);
  r.accuracy_mean = ms.mean;
  r.accuracy_sd = ms.sd;
  r.zero_rule = 0.373;
  r.subject_vote_accuracy = 1.0 / 7.0;
  r.confusion.add(0, 0, 5);
  r.confusion.add(1, 2, 3);
  r.confusion.add(2, 1, 12);
  std::stringstream s;
  write_metrics(s, r);
  const Metrics m = read_metrics(s);
  EXPECT_EQ(m.accuracy_mean, r.accuracy_mean);
  EXPECT_EQ(m.accuracy_sd, r.accuracy_sd);
  EXPECT_EQ(m.zero_rule, r.zero_rule);
  EXPECT_EQ(m.subject_vote_accuracy, r.subject_vote_accuracy);
  EXPECT_EQ(m.fold_accuracies, r.fold_accuracies);
  EXPECT_EQ(m.confusion, r.confusion);
  EXPECT_EQ(m.trials, 20u);
}

TEST(Relevance, CsvRoundTrip) {
  const CvResult r = run_cross_validation(small_cohort(), small_options());
  const RelevanceTable table = relevance_table(r);
  std::stringstream s;
  write_relevance(s, table);
  std::string header;
  std::getline(s, header);
  EXPECT_EQ(header, kRelevanceHeader);
  s.seekg(0);
  const RelevanceTable back = read_relevance(s);
  EXPECT_EQ(back.length, 24u);
  EXPECT_EQ(back.channels.size(), 6u);
  EXPECT_EQ(back.total, table.total);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(back.relevance.profiles[c]->mean_relevance, table.relevance.profiles[c]->mean_relevance);
    EXPECT_EQ(back.relevance.profiles[c]->mean_signal, table.relevance.profiles[c]->mean_signal);
    EXPECT_EQ(back.relevance.profiles[c]->sd_signal, table.relevance.profiles[c]->sd_signal);
  }
  std::stringstream again;
  write_relevance(again, back);
  std::stringstream first;
  write_relevance(first, table);
  EXPECT_EQ(again.str(), first.str());
}

TEST(ColorScale, Endpoints) {
  EXPECT_EQ(ColorScale::color(0.0, 1.0), ColorScale::kNeutral);
  EXPECT_EQ(ColorScale::color(1.0, 1.0), ColorScale::kInFavor);
  EXPECT_EQ(ColorScale::color(-2.0, 1.0), ColorScale::kAgainst);
  EXPECT_EQ(ColorScale::color(0.3, 0.0), ColorScale::kNeutral);
  EXPECT_EQ(to_hex(ColorScale::kNeutral), "#f2f2f2");
}

std::map<int, std::string> band_fills(const std::string& svg) {
  static const std::regex re("<polygon data-t=\"(\\d+)\" fill=\"(#[0-9a-f]{6})\"");
  std::map<int, std::string> fills;
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) {
    fills[std::stoi((*it)[1])] = (*it)[2];
  }
  return fills;
}

lrp::ClassRelevanceProfile profile_with(std::vector<double> relevance) {
  const std::size_t T = relevance.size();
  lrp::ClassRelevanceProfile p;
  p.group = AgeGroup::Young;
  p.trial_count = 1;
  p.mean_relevance = nn::Tensor({1, T}, std::move(relevance));
  p.mean_signal = nn::Tensor({1, T}, 1.0);
  p.sd_signal = nn::Tensor({1, T}, 0.1);
  return p;
}

TEST(Svg, ZeroRelevanceIsNeutral) {
  const std::string svg = render_class_svg(profile_with(std::vector<double>(10, 0.0)), 0, {"L", "V"});
  const auto fills = band_fills(svg);
  ASSERT_EQ(fills.size(), 10u);
  for (const auto& [t, fill] : fills) EXPECT_EQ(fill, "#f2f2f2") << t;
}

TEST(Svg, MaximumMapsToInFavorEndpoint) {
  const std::string svg =
      render_class_svg(profile_with({0.0, 0.1, 0.4, -0.2, 0.0}), 0, {"R", "AP"});
  const auto fills = band_fills(svg);
  EXPECT_EQ(fills.at(2), to_hex(ColorScale::kInFavor));
  EXPECT_EQ(fills.at(0), "#f2f2f2");
  EXPECT_NE(fills.at(3), "#f2f2f2");
  EXPECT_EQ(svg.find("NaN"), std::string::npos);
}

TEST(Report, ExportWritesExpectedFiles) {
  const CvResult r = run_cross_validation(small_cohort(), small_options());
  const auto dir = std::filesystem::temp_directory_path() / "gaitlrp_eval_test_export";
  std::filesystem::remove_all(dir);
  export_report(r, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "metrics.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "relevance.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "total_relevance.svg"));
  EXPECT_TRUE(std::filesystem::exists(dir / "class_middle_aged_L_ML.svg"));
  int svgs = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) svgs += e.path().extension() == ".svg";
  EXPECT_EQ(svgs, 19);
  std::ifstream in(dir / "relevance.csv");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 1u + 4u * 6u * 24u);
  std::filesystem::remove_all(dir);

  const auto blocked = std::filesystem::temp_directory_path() / "gaitlrp_eval_test_blocker";
  std::ofstream(blocked) << "x";
  EXPECT_THROW(export_report(r, blocked / "sub"), IoError);
  std::filesystem::remove(blocked);
}

}  // namespace
}  // namespace gaitlrp::eval
