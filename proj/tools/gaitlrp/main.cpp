#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gaitlrp/data/csv.hpp"
#include "gaitlrp/error.hpp"
#include "gaitlrp/eval/crossval.hpp"
#include "gaitlrp/eval/report.hpp"
#include "gaitlrp/nn/checkpoint.hpp"
#include "run_config.hpp"

namespace gaitlrp::cli {
namespace {

enum ExitCode { kOk = 0, kInternal = 1, kInput = 2, kDivergence = 3 };

// Flag values; optionals override whatever the config file says.
struct Flags {
  std::string config;
  std::string data;
  std::string out;
  std::optional<std::size_t> T;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> layout;

  int per_class = 30;
  int trials = 5;
  double noise = 0.05;

  std::string model;
  std::optional<std::size_t> trial;
  std::optional<int> target_class;
  std::optional<double> epsilon;

  std::string relevance;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (!f.data.empty()) {
    cfg.data = f.data;
    cfg.synth.reset();
  }
  if (f.T) cfg.T = *f.T;
  if (f.k) cfg.k = *f.k;
  if (f.layout) {
    try {
      cfg.layout = data::input_layout_from_name(*f.layout);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (f.epsilon) cfg.lrp.epsilon = *f.epsilon;
  cfg.validate();
  return cfg;
}

data::Dataset load_input(const RunConfig& cfg) {
  if (cfg.data) return data::load_dataset(*cfg.data, cfg.T);
  if (cfg.synth) {
    data::CohortSpec spec = cfg.synth->cohort;
    spec.length = cfg.T;
    return data::synth_generate(spec, cfg.synth->seed);
  }
  throw UsageError("no input: pass --data or a config with \"data\" or \"synth\"");
}

void print_counts(const data::Dataset& ds) {
  const auto counts = ds.class_counts();
  fmt::print("subjects={}\ntrials={}\nlength={}\n", ds.subject_count(), ds.size(), ds.length());
  for (data::AgeGroup g : data::kAllAgeGroups) {
    fmt::print("trials_{}={}\n", data::age_group_name(g), counts[data::class_index(g)]);
  }
}

int cmd_synth(const Flags& f, std::uint64_t seed) {
  const data::CohortSpec spec{f.per_class, f.trials, f.T.value_or(data::kDefaultLength), f.noise};
  if (spec.length < 2) throw UsageError("--T must be at least 2");
  const data::Dataset ds = data::synth_generate(spec, seed);
  data::save_dataset(f.out, ds);
  print_counts(ds);
  return kOk;
}

int cmd_crossval(const Flags& f) {
  RunConfig cfg = resolve(f);
  if (f.seed) cfg.seed = *f.seed;
  const data::Dataset ds = load_input(cfg);

  eval::CvOptions opts;
  opts.k = cfg.k;
  opts.seed = cfg.seed;
  opts.layout = cfg.layout;
  opts.train = cfg.train;
  opts.lrp = cfg.lrp;
  opts.threads = eval::default_thread_count();
  fmt::print(stderr, "crossval: {} trials, k={}, layout={}, {} thread(s)\n", ds.size(), opts.k,
             data::input_layout_name(opts.layout), opts.threads);

  const eval::CvResult result = eval::run_cross_validation(ds, opts);
  eval::export_report(result, f.out);
  eval::write_metrics(std::cout, result);
  return kOk;
}

int cmd_train(const Flags& f) {
  RunConfig cfg = resolve(f);
  if (f.seed) cfg.train.seed = *f.seed;
  const data::Dataset ds = load_input(cfg);

  const auto subjects = ds.subject_ids();
  nn::Preprocessing prep{ds.length(), cfg.layout, data::fit_norm_params(ds, subjects)};
  std::vector<nn::Tensor> samples;
  std::vector<int> labels;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    samples.push_back(data::make_input(ds.trial(i), prep.norm, prep.layout));
    labels.push_back(data::class_index(ds.label(i)));
  }
  nn::Network net = nn::make_default_network(data::input_channels(cfg.layout),
                                              data::input_length(cfg.layout, ds.length()));
  const nn::TrainResult tr = nn::train(net, samples, labels, cfg.train);

  std::size_t correct = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    correct += nn::predict(net, samples[i]).label == labels[i];
  }
  nn::save_checkpoint(f.out, {net, prep});
  fmt::print("epochs={}\nfinal_loss={}\ntraining_accuracy={}\nparameters={}\n", tr.epoch_loss.size(),
             tr.epoch_loss.back(), static_cast<double>(correct) / static_cast<double>(samples.size()),
             net.parameter_count());
  return kOk;
}

int cmd_explain(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (f.epsilon) cfg.lrp.epsilon = *f.epsilon;
  cfg.validate();

  const nn::Checkpoint cp = nn::load_checkpoint(f.model);
  if (!cp.preprocessing) throw ParseError(0, "model has no preprocessing section");
  const nn::Preprocessing& prep = *cp.preprocessing;
  const data::Dataset ds = data::load_dataset(f.data, prep.length);
  if (*f.trial >= ds.size()) {
    throw UsageError(fmt::format("--trial {} out of range (dataset has {} trials)", *f.trial, ds.size()));
  }
  const data::GrfTrial& trial = ds.trial(*f.trial);
  const nn::Tensor input = data::make_input(trial, prep.norm, prep.layout);
  const nn::Trace trace = nn::forward(cp.network, input);
  const nn::Prediction pred = nn::predict_from_logits(trace.logits().data());
  const int truth = data::class_index(ds.label(*f.trial));
  int target = cfg.lrp.start == lrp::Start::GroundTruth ? truth : pred.label;
  if (f.target_class) target = *f.target_class;

  const lrp::RelevanceMap map = lrp::lrp_explain(cp.network, trace, target, cfg.lrp);
  {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write {}", f.out));
    eval::write_trial_relevance(out, data::channel_labels(prep.layout), data::age_group_from_index(target),
                                data::to_channel_rows(input, prep.layout, prep.length),
                                data::to_channel_rows(map.input_relevance(), prep.layout, prep.length));
    if (!out) throw IoError(fmt::format("cannot write {}", f.out));
  }

  const lrp::ConservationReport rep = lrp::conservation_report(map);
  fmt::print("trial={} subject={} label={} predicted={}\n", *f.trial, trial.subject_id,
             data::age_group_name(data::age_group_from_index(truth)),
             data::age_group_name(data::age_group_from_index(pred.label)));
  fmt::print("explained_class={}\nexplained_logit={}\n", data::age_group_name(data::age_group_from_index(target)),
             rep.explained_logit);
  const auto& layers = cp.network.layers();
  for (std::size_t i = layers.size(); i-- > 0;) {
    fmt::print("layer_{} {} relevance_in={} absorbed={}\n", i, nn::layer_name(layers[i]), rep.layer_sums[i],
               rep.layer_absorbed[i]);
  }
  fmt::print("input_sum={}\ntotal_absorbed={}\nconservation_error={}\naccounting_error={}\n", rep.input_sum,
             rep.total_absorbed, rep.conservation_error(), rep.accounting_error());
  return kOk;
}

int cmd_plot(const Flags& f) {
  std::ifstream in(f.relevance);
  if (!in) throw IoError(fmt::format("cannot open {}", f.relevance));
  const eval::RelevanceTable table = eval::read_relevance(in);
  eval::write_plots(f.out, table);
  fmt::print("plots written to {}\n", f.out);
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Gait age classification with layer-wise relevance propagation"};
  app.require_subcommand(1);
  Flags f;
  std::uint64_t synth_seed = 1;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic GRF cohort as CSV");
  synth->add_option("--per-class", f.per_class, "Subjects per age group")->check(CLI::PositiveNumber);
  synth->add_option("--trials", f.trials, "Trials per subject")->check(CLI::PositiveNumber);
  synth->add_option("--T", f.T, "Samples per curve")->check(CLI::Range(2, 1'000'000));
  synth->add_option("--noise", f.noise, "Per-sample noise SD")->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", f.out, "Output CSV")->required();

  auto* crossval = app.add_subcommand("crossval", "Stratified subject-level k-fold evaluation with LRP");
  crossval->add_option("--data", f.data, "Dataset CSV (overrides the config source)");
  crossval->add_option("--config", f.config, "JSON run config");
  crossval->add_option("--k", f.k, "Number of folds")->check(CLI::Range(2, 1'000'000));
  crossval->add_option("--seed", f.seed, "Fold and training seed");
  crossval->add_option("--T", f.T, "Resample curves to this length")->check(CLI::Range(2, 1'000'000));
  crossval->add_option("--layout", f.layout, "channels | flat | side_averaged");
  crossval->add_option("--out", f.out, "Report directory")->required();

  auto* train = app.add_subcommand("train", "Train one model on a whole dataset");
  train->add_option("--data", f.data, "Dataset CSV (overrides the config source)");
  train->add_option("--config", f.config, "JSON run config");
  train->add_option("--seed", f.seed, "Training seed");
  train->add_option("--T", f.T, "Resample curves to this length")->check(CLI::Range(2, 1'000'000));
  train->add_option("--layout", f.layout, "channels | flat | side_averaged");
  train->add_option("--out", f.out, "Model checkpoint (JSON)")->required();

  auto* explain = app.add_subcommand("explain", "Explain one trial with a trained model");
  explain->add_option("--data", f.data, "Dataset CSV")->required();
  explain->add_option("--model", f.model, "Model checkpoint")->required();
  explain->add_option("--trial", f.trial, "Trial index (0-based, file order)")->required();
  explain->add_option("--class", f.target_class, "Class to explain (default: ground truth)")
      ->check(CLI::Range(0, data::kNumClasses - 1));
  explain->add_option("--epsilon", f.epsilon, "Epsilon of the LRP rule")->check(CLI::NonNegativeNumber);
  explain->add_option("--config", f.config, "JSON run config (lrp section is used)");
  explain->add_option("--out", f.out, "Relevance CSV")->required();

  auto* plot = app.add_subcommand("plot", "Render SVG plots from a relevance CSV");
  plot->add_option("--relevance", f.relevance, "Relevance CSV written by crossval")->required();
  plot->add_option("--out", f.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*synth) return cmd_synth(f, synth_seed);
    if (*crossval) return cmd_crossval(f);
    if (*train) return cmd_train(f);
    if (*explain) return cmd_explain(f);
    if (*plot) return cmd_plot(f);
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kInput;
  } catch (const DivergenceError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kDivergence;
  } catch (const FoldError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInternal;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kInternal;
  }
  return kInternal;
}

}  // namespace
}  // namespace gaitlrp::cli

int main(int argc, char** argv) { return gaitlrp::cli::run(argc, argv); }
