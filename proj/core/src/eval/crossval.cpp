#include "gaitlrp/eval/crossval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "gaitlrp/error.hpp"

namespace gaitlrp::eval {
namespace {

struct FoldOutcome {
  ConfusionMatrix confusion;
  std::vector<lrp::ExplainedTrial> explained;
  // (trial index, predicted class) for every test trial of the fold.
  std::vector<std::pair<std::size_t, int>> predictions;
  std::vector<double> loss;
};

FoldOutcome run_fold(const data::Dataset& dataset, const data::FoldSplit& split, int fold,
                     const CvOptions& options) {
  const std::size_t T = dataset.length();
  const auto train_subjects = split.training_subjects(fold);
  const data::NormParams norm = data::fit_norm_params(dataset, train_subjects);

  std::vector<nn::Tensor> samples;
  std::vector<int> labels;
  for (std::size_t idx : dataset.trials_of(train_subjects)) {
    samples.push_back(data::make_input(dataset.trial(idx), norm, options.layout));
    labels.push_back(data::class_index(dataset.label(idx)));
  }

  nn::Network network = nn::make_default_network(data::input_channels(options.layout),
                                                  data::input_length(options.layout, T));
  nn::TrainConfig train_cfg = options.train;
  train_cfg.seed = options.seed ^ static_cast<std::uint64_t>(fold);

  FoldOutcome out;
  out.loss = nn::train(network, samples, labels, train_cfg).epoch_loss;

  for (std::size_t idx : dataset.trials_of(split.folds[fold])) {
    const nn::Tensor input = data::make_input(dataset.trial(idx), norm, options.layout);
    const nn::Trace trace = nn::forward(network, input);
    const nn::Prediction pred = nn::predict_from_logits(trace.logits().data());
    const int truth = data::class_index(dataset.label(idx));
    out.confusion.add(truth, pred.label);
    out.predictions.emplace_back(idx, pred.label);

    const int target = options.lrp.start == lrp::Start::GroundTruth ? truth : pred.label;
    const lrp::RelevanceMap map = lrp::lrp_explain(network, trace, target, options.lrp);
    out.explained.push_back({data::to_channel_rows(map.input_relevance(), options.layout, T),
                             data::to_channel_rows(input, options.layout, T),
                             data::age_group_from_index(truth)});
  }
  return out;
}

double subject_vote_accuracy(const data::Dataset& dataset,
                             const std::vector<std::pair<std::size_t, int>>& predictions) {
  std::map<std::string, std::array<int, data::kNumClasses>> votes;
  for (const auto& [idx, predicted] : predictions) {
    ++votes[dataset.trial(idx).subject_id][predicted];
  }
  std::size_t correct = 0;
  for (const auto& [subject, v] : votes) {
    const int winner = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    if (winner == data::class_index(dataset.subject_label(subject))) ++correct;
  }
  return votes.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(votes.size());
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("GAITLRP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

CvResult run_cross_validation(const data::Dataset& dataset, const CvOptions& options) {
  options.train.validate();
  options.lrp.validate();
  const data::FoldSplit split = data::stratified_subject_kfold(dataset, options.k, options.seed);
  const int k = split.k();

  std::vector<FoldOutcome> outcomes(static_cast<std::size_t>(k));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int f = next++; f < k; f = next++) {
      try {
        outcomes[f] = run_fold(dataset, split, f, options);
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };

  const unsigned requested = options.threads == 0 ? default_thread_count() : options.threads;
  const unsigned threads = std::min<unsigned>(requested, static_cast<unsigned>(k));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (int f = 0; f < k; ++f) {
    if (!errors[f]) continue;
    try {
      std::rethrow_exception(errors[f]);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.epoch(), f);
    } catch (const std::exception& e) {
      throw FoldError(f, e.what());
    }
  }

  CvResult result;
  result.layout = options.layout;
  result.length = dataset.length();
  result.zero_rule = zero_rule(dataset);
  std::vector<lrp::ExplainedTrial> explained;
  std::vector<std::pair<std::size_t, int>> predictions;
  for (FoldOutcome& o : outcomes) {
    result.fold_accuracies.push_back(accuracy(o.confusion));
    result.confusion += o.confusion;
    std::move(o.explained.begin(), o.explained.end(), std::back_inserter(explained));
    predictions.insert(predictions.end(), o.predictions.begin(), o.predictions.end());
    result.fold_loss.push_back(std::move(o.loss));
  }
  const MeanSd stats = mean_sd(result.fold_accuracies);
  result.accuracy_mean = stats.mean;
  result.accuracy_sd = stats.sd;
  result.subject_vote_accuracy = subject_vote_accuracy(dataset, predictions);
  result.relevance = lrp::aggregate_class_relevance(explained);
  return result;
}

}  // namespace gaitlrp::eval
