#include "gaitlrp/nn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gaitlrp/error.hpp"

namespace gaitlrp::nn {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "gaitlrp-model";
constexpr int kVersion = 1;

json layer_to_json(const Layer& layer) {
  if (const auto* c = std::get_if<Conv1D>(&layer)) {
    return {{"type", "conv1d"},
            {"in_channels", c->in_channels},
            {"out_channels", c->out_channels},
            {"kernel_size", c->kernel_size},
            {"stride", c->stride},
            {"padding", c->padding},
            {"weight", c->weight.values()},
            {"bias", c->bias.values()}};
  }
  if (const auto* p = std::get_if<MaxPool1D>(&layer)) {
    return {{"type", "maxpool1d"}, {"window", p->window}, {"stride", p->stride}};
  }
  if (const auto* d = std::get_if<Dense>(&layer)) {
    return {{"type", "dense"},
            {"in_features", d->in_features},
            {"out_features", d->out_features},
            {"weight", d->weight.values()},
            {"bias", d->bias.values()}};
  }
  if (std::holds_alternative<ReLU>(layer)) return {{"type", "relu"}};
  return {{"type", "flatten"}};
}

Tensor tensor_from(const json& j, const char* key, Shape shape) {
  auto values = j.at(key).get<std::vector<double>>();
  if (values.size() != shape_size(shape)) {
    throw ParseError(0, std::string("checkpoint parameter '") + key + "' has " +
                            std::to_string(values.size()) + " values, expected " +
                            std::to_string(shape_size(shape)));
  }
  return Tensor(std::move(shape), std::move(values));
}

Layer layer_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "conv1d") {
    Conv1D c = Conv1D::make(j.at("in_channels"), j.at("out_channels"), j.at("kernel_size"),
                            j.at("stride"), j.at("padding"));
    c.weight = tensor_from(j, "weight", c.weight.shape());
    c.bias = tensor_from(j, "bias", c.bias.shape());
    return c;
  }
  if (type == "dense") {
    Dense d = Dense::make(j.at("in_features"), j.at("out_features"));
    d.weight = tensor_from(j, "weight", d.weight.shape());
    d.bias = tensor_from(j, "bias", d.bias.shape());
    return d;
  }
  if (type == "maxpool1d") return MaxPool1D{j.at("window"), j.at("stride")};
  if (type == "relu") return ReLU{};
  if (type == "flatten") return Flatten{};
  throw ParseError(0, "unknown layer type '" + type + "' in checkpoint");
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["input_shape"] = checkpoint.network.input_shape();
  json layers = json::array();
  for (const Layer& l : checkpoint.network.layers()) layers.push_back(layer_to_json(l));
  doc["layers"] = std::move(layers);
  if (checkpoint.preprocessing) {
    const Preprocessing& p = *checkpoint.preprocessing;
    json norm = json::array();
    for (const auto& r : p.norm.channels) norm.push_back({{"min", r.min_value}, {"max", r.max_value}});
    doc["preprocessing"] = {{"length", p.length},
                            {"layout", data::input_layout_name(p.layout)},
                            {"norm", std::move(norm)}};
  }
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormat) {
      throw ParseError(0, "not a gaitlrp model checkpoint");
    }
    if (doc.at("version").get<int>() != kVersion) {
      throw ParseError(0, "unsupported checkpoint version " + doc.at("version").dump());
    }
    std::vector<Layer> layers;
    for (const auto& l : doc.at("layers")) layers.push_back(layer_from_json(l));
    Checkpoint cp{Network(doc.at("input_shape").get<Shape>(), std::move(layers)), std::nullopt};
    if (doc.contains("preprocessing")) {
      const json& p = doc["preprocessing"];
      Preprocessing pre;
      pre.length = p.at("length");
      pre.layout = data::input_layout_from_name(p.at("layout").get<std::string>());
      const json& norm = p.at("norm");
      if (norm.size() != data::kNumChannels) throw ParseError(0, "checkpoint norm needs 6 channels");
      for (std::size_t c = 0; c < data::kNumChannels; ++c) {
        pre.norm.channels[c] = {norm[c].at("min").get<double>(), norm[c].at("max").get<double>()};
      }
      cp.preprocessing = pre;
    }
    return cp;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, std::string("invalid checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(checkpoint);
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace gaitlrp::nn
