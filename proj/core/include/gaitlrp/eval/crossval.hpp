#pragma once

#include <cstdint>
#include <vector>

#include "gaitlrp/data/dataset.hpp"
#include "gaitlrp/data/folds.hpp"
#include "gaitlrp/data/normalize.hpp"
#include "gaitlrp/eval/metrics.hpp"
#include "gaitlrp/lrp/aggregate.hpp"
#include "gaitlrp/lrp/lrp.hpp"
#include "gaitlrp/nn/train.hpp"

namespace gaitlrp::eval {

struct CvOptions {
  int k = 10;
  std::uint64_t seed = 1;
  data::InputLayout layout = data::InputLayout::Channels;
  nn::TrainConfig train;
  lrp::LrpConfig lrp;
  // Upper bound on folds trained concurrently; 0 = hardware concurrency.
  unsigned threads = 0;
};

struct CvResult {
  data::InputLayout layout = data::InputLayout::Channels;
  std::size_t length = 0;
  std::vector<double> fold_accuracies;
  double accuracy_mean = 0.0;
  double accuracy_sd = 0.0;  // population SD over folds
  ConfusionMatrix confusion;
  double zero_rule = 0.0;
  // Majority vote over each subject's test trials (ties to the lower class).
  double subject_vote_accuracy = 0.0;
  lrp::ClassRelevance relevance;
  std::vector<std::vector<double>> fold_loss;  // per fold, per epoch
};

// For every fold: fit normalization on the other folds' subjects, train a
// fresh network seeded with seed ^ fold, predict and explain each test trial,
// then reduce in fold order. Results do not depend on `threads`.
//
// DivergenceError is rethrown with the fold attached; other failures become
// FoldError.
CvResult run_cross_validation(const data::Dataset& dataset, const CvOptions& options);

// Thread count from GAITLRP_THREADS, falling back to hardware concurrency.
unsigned default_thread_count();

}  // namespace gaitlrp::eval
