#include "run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "gaitlrp/error.hpp"

namespace gaitlrp::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) throw UsageError(fmt::format("config: '{}' must be an object", where));
  for (const auto& [key, value] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw UsageError(fmt::format("config: unknown key '{}' in {}", key, where));
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

nn::InitRule init_from_name(const std::string& name) {
  if (name == "glorot_uniform") return nn::InitRule::GlorotUniform;
  if (name == "keep") return nn::InitRule::Keep;
  throw UsageError(fmt::format("config: unknown init '{}'", name));
}

}  // namespace

void RunConfig::validate() const {
  if (data && synth) throw UsageError("config: give either a data file or a synth spec, not both");
  if (T < 2) throw UsageError("T must be at least 2");
  if (k < 2) throw UsageError("k must be at least 2");
  if (synth && (synth->cohort.subjects_per_class < 1 || synth->cohort.trials_per_subject < 1 ||
                !(synth->cohort.noise >= 0.0))) {
    throw UsageError("synth: per_class and trials must be positive, noise non-negative");
  }
  try {
    train.validate();
    lrp.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig cfg;
  try {
    const json doc = json::parse(json_text);
    reject_unknown(doc, "config", {"data", "synth", "T", "k", "seed", "input_layout", "flat_input", "train", "lrp"});
    if (doc.contains("data")) cfg.data = doc.at("data").get<std::string>();
    if (doc.contains("synth")) {
      const json& s = doc.at("synth");
      reject_unknown(s, "synth", {"per_class", "trials", "noise", "seed"});
      SynthSource src;
      read(s, "per_class", src.cohort.subjects_per_class);
      read(s, "trials", src.cohort.trials_per_subject);
      read(s, "noise", src.cohort.noise);
      read(s, "seed", src.seed);
      cfg.synth = src;
    }
    read(doc, "T", cfg.T);
    read(doc, "k", cfg.k);
    read(doc, "seed", cfg.seed);
    if (doc.contains("input_layout")) {
      cfg.layout = data::input_layout_from_name(doc.at("input_layout").get<std::string>());
    }
    // Boolean shorthand for the literal 1 x 6T concatenation.
    if (doc.contains("flat_input")) {
      const bool flat = doc.at("flat_input").get<bool>();
      if (doc.contains("input_layout") && flat != (cfg.layout == data::InputLayout::Flat)) {
        throw UsageError("config: flat_input contradicts input_layout");
      }
      if (flat) cfg.layout = data::InputLayout::Flat;
    }
    if (doc.contains("train")) {
      const json& t = doc.at("train");
      reject_unknown(t, "train", {"learning_rate", "batch_size", "epochs", "seed", "init", "use_bias"});
      read(t, "learning_rate", cfg.train.learning_rate);
      read(t, "batch_size", cfg.train.batch_size);
      read(t, "epochs", cfg.train.epochs);
      read(t, "seed", cfg.train.seed);
      read(t, "use_bias", cfg.train.use_bias);
      if (t.contains("init")) cfg.train.init = init_from_name(t.at("init").get<std::string>());
    }
    if (doc.contains("lrp")) {
      const json& l = doc.at("lrp");
      reject_unknown(l, "lrp", {"rule", "epsilon", "alpha", "beta", "start"});
      if (l.contains("rule")) {
        const auto rule = l.at("rule").get<std::string>();
        if (rule == "epsilon") cfg.lrp.rule = lrp::Rule::Epsilon;
        else if (rule == "alpha_beta") cfg.lrp.rule = lrp::Rule::AlphaBeta;
        else throw UsageError(fmt::format("config: unknown lrp rule '{}'", rule));
      }
      read(l, "epsilon", cfg.lrp.epsilon);
      read(l, "alpha", cfg.lrp.alpha);
      read(l, "beta", cfg.lrp.beta);
      if (l.contains("start")) {
        const auto start = l.at("start").get<std::string>();
        if (start == "ground_truth") cfg.lrp.start = lrp::Start::GroundTruth;
        else if (start == "predicted") cfg.lrp.start = lrp::Start::Predicted;
        else throw UsageError(fmt::format("config: unknown lrp start '{}'", start));
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("config: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

}  // namespace gaitlrp::cli
