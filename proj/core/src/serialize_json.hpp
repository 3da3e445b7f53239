#pragma once

// JSON (de)serialization of architecture descriptors, shared by checkpoints
// and run configuration files. Private to the library: keeps the vendored
// json header out of the public include surface.

#include <string>

#include "json.hpp"
#include "surrocae/architecture.hpp"
#include "surrocae/errors.hpp"

namespace surrocae::detail {

using nlohmann::json;

inline std::string activation_name(nn::Activation a) {
  switch (a) {
    case nn::Activation::linear: return "linear";
    case nn::Activation::relu: return "relu";
    case nn::Activation::tanh: return "tanh";
  }
  throw ConfigError("unknown activation");
}

inline nn::Activation activation_from(const std::string& name) {
  if (name == "linear") return nn::Activation::linear;
  if (name == "relu") return nn::Activation::relu;
  if (name == "tanh") return nn::Activation::tanh;
  throw ConfigError("unknown activation '" + name + "'");
}

inline std::string layer_kind_name(LayerSpec::Kind k) {
  switch (k) {
    case LayerSpec::Kind::conv: return "conv";
    case LayerSpec::Kind::deconv: return "deconv";
    case LayerSpec::Kind::avg_pool: return "avg_pool";
    case LayerSpec::Kind::avg_unpool: return "avg_unpool";
    case LayerSpec::Kind::flatten: return "flatten";
    case LayerSpec::Kind::reshape: return "reshape";
    case LayerSpec::Kind::dense: return "dense";
  }
  throw ConfigError("unknown layer kind");
}

inline LayerSpec::Kind layer_kind_from(const std::string& name) {
  if (name == "conv") return LayerSpec::Kind::conv;
  if (name == "deconv") return LayerSpec::Kind::deconv;
  if (name == "avg_pool") return LayerSpec::Kind::avg_pool;
  if (name == "avg_unpool") return LayerSpec::Kind::avg_unpool;
  if (name == "flatten") return LayerSpec::Kind::flatten;
  if (name == "reshape") return LayerSpec::Kind::reshape;
  if (name == "dense") return LayerSpec::Kind::dense;
  throw ConfigError("unknown layer kind '" + name + "'");
}

inline json layer_to_json(const LayerSpec& l) {
  json j;
  j["kind"] = layer_kind_name(l.kind);
  switch (l.kind) {
    case LayerSpec::Kind::conv:
      j["filters"] = l.filters;
      j["kernel"] = l.kernel;
      j["stride"] = l.stride;
      j["padding"] = l.padding;
      j["act"] = activation_name(l.act);
      break;
    case LayerSpec::Kind::deconv:
      j["filters"] = l.filters;
      j["kernel"] = l.kernel;
      j["stride"] = l.stride;
      j["crop"] = l.crop;
      j["act"] = activation_name(l.act);
      break;
    case LayerSpec::Kind::avg_pool:
    case LayerSpec::Kind::avg_unpool:
      j["window"] = l.window;
      break;
    case LayerSpec::Kind::flatten:
      break;
    case LayerSpec::Kind::reshape:
      j["channels"] = l.channels;
      j["length"] = l.length;
      break;
    case LayerSpec::Kind::dense:
      j["units"] = l.units;
      j["act"] = activation_name(l.act);
      break;
  }
  return j;
}

inline LayerSpec layer_from_json(const json& j) {
  LayerSpec l;
  l.kind = layer_kind_from(j.at("kind").get<std::string>());
  if (j.contains("act")) l.act = activation_from(j["act"].get<std::string>());
  l.filters = j.value("filters", std::size_t{0});
  l.kernel = j.value("kernel", std::size_t{0});
  l.stride = j.value("stride", std::size_t{1});
  l.padding = j.value("padding", std::size_t{0});
  l.crop = j.value("crop", std::size_t{0});
  l.window = j.value("window", std::size_t{0});
  l.units = j.value("units", std::size_t{0});
  l.channels = j.value("channels", std::size_t{0});
  l.length = j.value("length", std::size_t{0});
  return l;
}

inline json cae_arch_to_json(const CaeArchitecture& a) {
  json j;
  j["input_rows"] = a.input_rows;
  j["input_cols"] = a.input_cols;
  j["latent_dim"] = a.latent_dim;
  j["encoder"] = json::array();
  for (const LayerSpec& l : a.encoder) j["encoder"].push_back(layer_to_json(l));
  j["decoder"] = json::array();
  for (const LayerSpec& l : a.decoder) j["decoder"].push_back(layer_to_json(l));
  return j;
}

inline CaeArchitecture cae_arch_from_json(const json& j) {
  CaeArchitecture a;
  a.input_rows = j.at("input_rows").get<std::size_t>();
  a.input_cols = j.at("input_cols").get<std::size_t>();
  a.latent_dim = j.at("latent_dim").get<std::size_t>();
  for (const json& l : j.at("encoder")) a.encoder.push_back(layer_from_json(l));
  if (j.contains("decoder") && !j["decoder"].empty()) {
    for (const json& l : j["decoder"]) a.decoder.push_back(layer_from_json(l));
  } else {
    a.decoder = mirror_decoder(a.input_rows, a.input_cols, a.encoder);
  }
  return a;
}

inline json ffnn_arch_to_json(const FfnnArchitecture& a) {
  json j;
  j["input_dim"] = a.input_dim;
  j["output_dim"] = a.output_dim;
  j["hidden"] = a.hidden;
  j["hidden_act"] = activation_name(a.hidden_act);
  j["output_act"] = activation_name(a.output_act);
  return j;
}

inline FfnnArchitecture ffnn_arch_from_json(const json& j) {
  FfnnArchitecture a;
  a.input_dim = j.at("input_dim").get<std::size_t>();
  a.output_dim = j.at("output_dim").get<std::size_t>();
  a.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  if (j.contains("hidden_act"))
    a.hidden_act = activation_from(j["hidden_act"].get<std::string>());
  if (j.contains("output_act"))
    a.output_act = activation_from(j["output_act"].get<std::string>());
  return a;
}

}  // namespace surrocae::detail
