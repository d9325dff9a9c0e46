/* Copyright 2026 The LCP Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "lcp/model_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lcp/error.h"

namespace lcp {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string Where(const std::string& layer_id, const std::string& field) {
  if (layer_id.empty()) return "field '" + field + "'";
  return "layer '" + layer_id + "': field '" + field + "'";
}

int64_t GetInt(const json& obj, const char* field, const std::string& layer_id) {
  const json& v = obj.at(field);
  if (!v.is_number_integer()) {
    throw ParseError(Where(layer_id, field) + " must be an integer");
  }
  return v.get<int64_t>();
}

Dim2 GetDim2(const json& obj, const char* field, const std::string& layer_id) {
  const json& v = obj.at(field);
  if (v.is_number_integer()) {
    int64_t x = v.get<int64_t>();
    return Dim2{x, x};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() &&
      v[1].is_number_integer()) {
    return Dim2{v[0].get<int64_t>(), v[1].get<int64_t>()};
  }
  throw ParseError(Where(layer_id, field) + " must be an integer or [h, w]");
}

const std::set<std::string>& AllowedFields(LayerKind kind) {
  static const std::set<std::string> kCommon = {
      "id", "kind", "predecessors", "branch", "origin", "keep_fraction"};
  static const std::set<std::string> kFc = [] {
    auto s = kCommon;
    s.insert({"out_features", "bias"});
    return s;
  }();
  static const std::set<std::string> kConv = [] {
    auto s = kCommon;
    s.insert({"out_channels", "kernel", "stride", "padding", "groups",
              "depthwise", "bias", "function"});
    return s;
  }();
  static const std::set<std::string> kPool = [] {
    auto s = kCommon;
    s.insert({"window", "stride", "padding", "mode", "global"});
    return s;
  }();
  static const std::set<std::string> kDropout = [] {
    auto s = kCommon;
    s.insert("rate");
    return s;
  }();
  static const std::set<std::string> kAct = [] {
    auto s = kCommon;
    s.insert("function");
    return s;
  }();
  switch (kind) {
    case LayerKind::kFullyConnected:
    case LayerKind::kClassifierFc:
      return kFc;
    case LayerKind::kConvolution:
      return kConv;
    case LayerKind::kPooling:
      return kPool;
    case LayerKind::kDropout:
      return kDropout;
    case LayerKind::kActivation:
      return kAct;
    default:
      return kCommon;
  }
}

LayerSpec ParseLayer(const json& j, size_t position) {
  if (!j.is_object()) {
    throw ParseError("layers[" + std::to_string(position) + "] must be an object");
  }
  if (!j.contains("id") || !j["id"].is_string()) {
    throw ParseError("layers[" + std::to_string(position) +
                     "]: field 'id' is required and must be a string");
  }
  LayerSpec l;
  l.id = j["id"].get<std::string>();
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError(Where(l.id, "kind") + " is required and must be a string");
  }
  auto kind = LayerKindFromName(j["kind"].get<std::string>());
  if (!kind) {
    throw ParseError(Where(l.id, "kind") + " has unknown value '" +
                     j["kind"].get<std::string>() + "'");
  }
  l.kind = *kind;
  const auto& allowed = AllowedFields(l.kind);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ParseError(Where(l.id, key) + " is not valid for kind " +
                       std::string(LayerKindName(l.kind)));
    }
  }

  if (j.contains("predecessors")) {
    const json& preds = j["predecessors"];
    if (!preds.is_array()) throw ParseError(Where(l.id, "predecessors") + " must be a list");
    for (const json& p : preds) {
      if (!p.is_string()) {
        throw ParseError(Where(l.id, "predecessors") + " must hold layer ids");
      }
      l.predecessors.push_back(p.get<std::string>());
    }
  }
  if (j.contains("branch")) l.branch = static_cast<int>(GetInt(j, "branch", l.id));
  if (j.contains("origin")) {
    if (!j["origin"].is_string()) throw ParseError(Where(l.id, "origin") + " must be a string");
    l.origin = j["origin"].get<std::string>();
  }
  if (j.contains("keep_fraction")) {
    if (!j["keep_fraction"].is_number()) {
      throw ParseError(Where(l.id, "keep_fraction") + " must be a number");
    }
    l.keep_fraction = j["keep_fraction"].get<double>();
  }
  auto get_bool = [&](const char* field, bool& out) {
    if (!j.contains(field)) return;
    if (!j[field].is_boolean()) throw ParseError(Where(l.id, field) + " must be a boolean");
    out = j[field].get<bool>();
  };

  switch (l.kind) {
    case LayerKind::kFullyConnected:
    case LayerKind::kClassifierFc:
      if (!j.contains("out_features")) {
        throw ParseError(Where(l.id, "out_features") + " is required");
      }
      l.width = GetInt(j, "out_features", l.id);
      get_bool("bias", l.bias);
      break;
    case LayerKind::kConvolution:
      get_bool("depthwise", l.depthwise);
      if (!l.depthwise) {
        if (!j.contains("out_channels")) {
          throw ParseError(Where(l.id, "out_channels") + " is required");
        }
        l.width = GetInt(j, "out_channels", l.id);
      } else if (j.contains("out_channels")) {
        throw ParseError(Where(l.id, "out_channels") +
                         " is derived from the input for depthwise convolutions");
      }
      if (!j.contains("kernel")) throw ParseError(Where(l.id, "kernel") + " is required");
      l.kernel = GetDim2(j, "kernel", l.id);
      if (j.contains("stride")) l.stride = GetDim2(j, "stride", l.id);
      if (j.contains("padding")) l.padding = GetDim2(j, "padding", l.id);
      if (j.contains("groups")) l.groups = GetInt(j, "groups", l.id);
      get_bool("bias", l.bias);
      if (j.contains("function")) {
        if (!j["function"].is_string()) {
          throw ParseError(Where(l.id, "function") + " must be a string");
        }
        l.function = j["function"].get<std::string>();
      }
      break;
    case LayerKind::kPooling: {
      get_bool("global", l.global_pool);
      if (!l.global_pool) {
        if (!j.contains("window")) throw ParseError(Where(l.id, "window") + " is required");
        l.kernel = GetDim2(j, "window", l.id);
        l.stride = j.contains("stride") ? GetDim2(j, "stride", l.id) : l.kernel;
        if (j.contains("padding")) l.padding = GetDim2(j, "padding", l.id);
      }
      if (j.contains("mode")) {
        const json& m = j["mode"];
        if (m == "max") {
          l.pool_mode = PoolMode::kMax;
        } else if (m == "avg") {
          l.pool_mode = PoolMode::kAvg;
        } else {
          throw ParseError(Where(l.id, "mode") + " must be 'max' or 'avg'");
        }
      }
      break;
    }
    case LayerKind::kDropout:
      if (j.contains("rate")) {
        if (!j["rate"].is_number()) throw ParseError(Where(l.id, "rate") + " must be a number");
        l.dropout_rate = j["rate"].get<double>();
      }
      break;
    case LayerKind::kActivation:
      if (j.contains("function")) {
        if (!j["function"].is_string()) {
          throw ParseError(Where(l.id, "function") + " must be a string");
        }
        l.function = j["function"].get<std::string>();
      }
      break;
    default:
      break;
  }
  return l;
}

ModelGraph ParseGraph(const json& doc) {
  if (!doc.is_object()) throw ParseError("model document must be an object");
  static const std::set<std::string> kTop = {"name", "input_shape", "element_bits",
                                             "layers", "split"};
  for (const auto& [key, _] : doc.items()) {
    if (!kTop.count(key)) throw ParseError(Where("", key) + " is not a model field");
  }
  ModelGraph g;
  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw ParseError(Where("", "name") + " is required and must be a string");
  }
  g.name = doc["name"].get<std::string>();
  if (!doc.contains("input_shape") || !doc["input_shape"].is_array()) {
    throw ParseError(Where("", "input_shape") + " is required and must be a list");
  }
  for (const json& d : doc["input_shape"]) {
    if (!d.is_number_integer()) throw ParseError(Where("", "input_shape") + " must hold integers");
    g.input_shape.push_back(d.get<int64_t>());
  }
  if (doc.contains("element_bits")) g.element_bits = static_cast<int>(GetInt(doc, "element_bits", ""));
  if (!doc.contains("layers") || !doc["layers"].is_array()) {
    throw ParseError(Where("", "layers") + " is required and must be a list");
  }
  size_t pos = 0;
  for (const json& lj : doc["layers"]) g.layers.push_back(ParseLayer(lj, pos++));
  Validate(g);
  InferShapes(g);
  return g;
}

ordered_json LayerToJson(const LayerSpec& l) {
  ordered_json j;
  j["id"] = l.id;
  j["kind"] = std::string(LayerKindName(l.kind));
  auto dim = [](const Dim2& d) { return ordered_json::array({d.h, d.w}); };
  switch (l.kind) {
    case LayerKind::kFullyConnected:
    case LayerKind::kClassifierFc:
      j["out_features"] = l.width;
      if (!l.bias) j["bias"] = false;
      break;
    case LayerKind::kConvolution:
      if (l.depthwise) {
        j["depthwise"] = true;
      } else {
        j["out_channels"] = l.width;
      }
      j["kernel"] = dim(l.kernel);
      j["stride"] = dim(l.stride);
      j["padding"] = dim(l.padding);
      if (l.groups != 1) j["groups"] = l.groups;
      if (!l.bias) j["bias"] = false;
      if (!l.function.empty()) j["function"] = l.function;
      break;
    case LayerKind::kPooling:
      if (l.global_pool) {
        j["global"] = true;
      } else {
        j["window"] = dim(l.kernel);
        j["stride"] = dim(l.stride);
        j["padding"] = dim(l.padding);
      }
      j["mode"] = l.pool_mode == PoolMode::kMax ? "max" : "avg";
      break;
    case LayerKind::kDropout:
      j["rate"] = l.dropout_rate;
      break;
    case LayerKind::kActivation:
      if (!l.function.empty()) j["function"] = l.function;
      break;
    default:
      break;
  }
  if (l.keep_fraction != 1.0) j["keep_fraction"] = l.keep_fraction;
  if (l.branch != -1) j["branch"] = l.branch;
  if (!l.origin.empty()) j["origin"] = l.origin;
  j["predecessors"] = l.predecessors;
  return j;
}

ordered_json GraphToJson(const ModelGraph& g) {
  ordered_json doc;
  doc["name"] = g.name;
  doc["input_shape"] = g.input_shape;
  doc["element_bits"] = g.element_bits;
  ordered_json layers = ordered_json::array();
  for (const LayerSpec& l : g.layers) layers.push_back(LayerToJson(l));
  doc["layers"] = std::move(layers);
  return doc;
}

json ParseJsonText(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
}

SplitModel ParseSplitFromJson(const json& doc) {
  SplitModel sm;
  sm.graph = ParseGraph(doc);
  const json& s = doc.at("split");
  if (!s.is_object()) throw ParseError(Where("", "split") + " must be an object");
  try {
    sm.split_count = s.at("split_count").get<int>();
    sm.provenance.original_model = s.at("original_model").get<std::string>();
    sm.provenance.division_factor = s.value("division_factor", 2);
    sm.provenance.division_steps = s.value("division_steps", 0);
    sm.provenance.fatten_percent = s.value("fatten_percent", 0.0);
    const std::string stem = s.value("stem", std::string("replicated"));
    if (stem == "replicated") {
      sm.provenance.stem = StemMode::kReplicated;
    } else if (stem == "shared") {
      sm.provenance.stem = StemMode::kShared;
    } else {
      throw ParseError(Where("", "split.stem") + " must be 'replicated' or 'shared'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("field 'split': ") + e.what());
  }
  if (sm.split_count < 1) throw ParseError(Where("", "split.split_count") + " must be >= 1");
  for (const LayerSpec& l : sm.graph.layers) {
    if (l.branch >= sm.split_count) {
      throw ValidationError("layer '" + l.id + "' has branch " +
                            std::to_string(l.branch) + " >= split_count");
    }
  }
  return sm;
}

}  // namespace

ModelDocument ParseModelDocument(std::string_view text) {
  json doc = ParseJsonText(text);
  if (doc.is_object() && doc.contains("split")) return ParseSplitFromJson(doc);
  return ParseGraph(doc);
}

ModelGraph ParseModel(std::string_view text) {
  json doc = ParseJsonText(text);
  if (doc.is_object() && doc.contains("split")) return ParseSplitFromJson(doc).graph;
  return ParseGraph(doc);
}

SplitModel ParseSplitModel(std::string_view text) {
  json doc = ParseJsonText(text);
  if (!doc.is_object() || !doc.contains("split")) {
    throw ParseError("document has no 'split' block; not a split model");
  }
  return ParseSplitFromJson(doc);
}

std::string SerializeModel(const ModelGraph& g) {
  return GraphToJson(g).dump(2) + "\n";
}

std::string SerializeModel(const SplitModel& sm) {
  ordered_json doc = GraphToJson(sm.graph);
  ordered_json s;
  s["split_count"] = sm.split_count;
  s["original_model"] = sm.provenance.original_model;
  s["division_factor"] = sm.provenance.division_factor;
  s["division_steps"] = sm.provenance.division_steps;
  s["fatten_percent"] = sm.provenance.fatten_percent;
  s["stem"] = sm.provenance.stem == StemMode::kShared ? "shared" : "replicated";
  s["key"] = sm.ProvenanceKey();
  doc["split"] = std::move(s);
  return doc.dump(2) + "\n";
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

ModelDocument LoadModelDocument(const std::filesystem::path& path) {
  return ParseModelDocument(ReadTextFile(path));
}

ModelGraph LoadModel(const std::filesystem::path& path) {
  return ParseModel(ReadTextFile(path));
}

const ModelGraph& GraphOf(const ModelDocument& doc) {
  if (const auto* sm = std::get_if<SplitModel>(&doc)) return sm->graph;
  return std::get<ModelGraph>(doc);
}

}  // namespace lcp
