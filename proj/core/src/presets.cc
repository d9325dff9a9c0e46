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

#include "lcp/presets.h"

#include <algorithm>
#include <cstdlib>

#include "json.hpp"
#include "lcp/error.h"
#include "lcp/model_io.h"

#ifndef LCP_DEFAULT_CONFIG_DIR
#define LCP_DEFAULT_CONFIG_DIR "configs"
#endif
#ifndef LCP_DEFAULT_MODELS_DIR
#define LCP_DEFAULT_MODELS_DIR "models"
#endif

namespace lcp {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json ParseObject(std::string_view text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
  return j;
}

void RejectUnknown(const json& j, std::initializer_list<const char*> allowed,
                   const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw ParseError(std::string(what) + ": unknown field '" + key + "'");
    }
  }
}

template <typename T>
void Read(const json& j, const char* field, T* out, const char* what) {
  if (!j.contains(field)) return;
  try {
    *out = j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(what) + ": field '" + field + "' has the wrong type");
  }
}

accel::AccelConfig AccelFromJson(const json& j) {
  static const char* kWhat = "accel preset";
  RejectUnknown(j,
                {"name", "array_cols", "array_rows", "clock_hz", "mem_bandwidth_bytes_s",
                 "adder_tree_stages", "stationary_buffer_depth", "max_reuse_ops_per_byte",
                 "element_bits", "switch_overhead_s", "pool_cost_cycles_per_element",
                 "power_w", "area_mm2", "notes"},
                kWhat);
  accel::AccelConfig a;
  Read(j, "name", &a.name, kWhat);
  Read(j, "array_cols", &a.array_cols, kWhat);
  Read(j, "array_rows", &a.array_rows, kWhat);
  Read(j, "clock_hz", &a.clock_hz, kWhat);
  Read(j, "mem_bandwidth_bytes_s", &a.mem_bandwidth_bytes_s, kWhat);
  a.adder_tree_stages = accel::AdderTreeStages(a.array_cols);
  Read(j, "adder_tree_stages", &a.adder_tree_stages, kWhat);
  Read(j, "stationary_buffer_depth", &a.stationary_buffer_depth, kWhat);
  Read(j, "max_reuse_ops_per_byte", &a.max_reuse_ops_per_byte, kWhat);
  Read(j, "element_bits", &a.element_bits, kWhat);
  Read(j, "switch_overhead_s", &a.switch_overhead_s, kWhat);
  Read(j, "pool_cost_cycles_per_element", &a.pool_cost_cycles_per_element, kWhat);
  Read(j, "power_w", &a.power_w, kWhat);
  Read(j, "area_mm2", &a.area_mm2, kWhat);
  a.Validate();
  return a;
}

JitterSpec JitterFromJson(const json& j) {
  static const char* kWhat = "jitter";
  RejectUnknown(j, {"kind", "sigma", "scale_s", "tail_probability", "tail_mean_s"}, kWhat);
  JitterSpec s;
  std::string kind = "none";
  Read(j, "kind", &kind, kWhat);
  if (kind == "none") {
    s.kind = JitterSpec::Kind::kNone;
  } else if (kind == "lognormal") {
    s.kind = JitterSpec::Kind::kLognormal;
  } else if (kind == "exponential_tail") {
    s.kind = JitterSpec::Kind::kExponentialTail;
  } else {
    throw ParseError("jitter: unknown kind '" + kind +
                     "' (none, lognormal, exponential_tail)");
  }
  Read(j, "sigma", &s.sigma, kWhat);
  Read(j, "scale_s", &s.scale_s, kWhat);
  Read(j, "tail_probability", &s.tail_probability, kWhat);
  Read(j, "tail_mean_s", &s.tail_mean_s, kWhat);
  s.Validate();
  return s;
}

std::string_view JitterKindName(JitterSpec::Kind k) {
  switch (k) {
    case JitterSpec::Kind::kNone:
      return "none";
    case JitterSpec::Kind::kLognormal:
      return "lognormal";
    case JitterSpec::Kind::kExponentialTail:
      return "exponential_tail";
  }
  return "none";
}

ordered_json AccelToJson(const accel::AccelConfig& a) {
  ordered_json j;
  j["name"] = a.name;
  j["array_cols"] = a.array_cols;
  j["array_rows"] = a.array_rows;
  j["clock_hz"] = a.clock_hz;
  j["mem_bandwidth_bytes_s"] = a.mem_bandwidth_bytes_s;
  j["adder_tree_stages"] = a.adder_tree_stages;
  j["stationary_buffer_depth"] = a.stationary_buffer_depth;
  j["max_reuse_ops_per_byte"] = a.max_reuse_ops_per_byte;
  j["element_bits"] = a.element_bits;
  j["switch_overhead_s"] = a.switch_overhead_s;
  j["pool_cost_cycles_per_element"] = a.pool_cost_cycles_per_element;
  j["power_w"] = a.power_w;
  j["area_mm2"] = a.area_mm2;
  return j;
}

}  // namespace

std::filesystem::path ConfigDir() {
  if (const char* env = std::getenv("LCP_CONFIG_DIR"); env && *env) return env;
  return LCP_DEFAULT_CONFIG_DIR;
}

std::filesystem::path ModelsDir() {
  if (const char* env = std::getenv("LCP_MODELS_DIR"); env && *env) return env;
  return LCP_DEFAULT_MODELS_DIR;
}

std::string_view PresetSubdir(PresetKind kind) {
  switch (kind) {
    case PresetKind::kDevice:
      return "devices";
    case PresetKind::kNetwork:
      return "networks";
    case PresetKind::kAccel:
      return "accel";
  }
  return "";
}

std::vector<std::string> ListPresets(PresetKind kind) {
  std::vector<std::string> names;
  const std::filesystem::path dir = ConfigDir() / PresetSubdir(kind);
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::filesystem::path ResolvePreset(PresetKind kind, const std::string& ref) {
  const bool is_path = ref.find('/') != std::string::npos ||
                       (ref.size() > 5 && ref.substr(ref.size() - 5) == ".json");
  if (is_path) return ref;
  const std::filesystem::path p = ConfigDir() / PresetSubdir(kind) / (ref + ".json");
  if (std::filesystem::exists(p)) return p;
  std::string list;
  for (const std::string& n : ListPresets(kind)) list += (list.empty() ? "" : ", ") + n;
  throw ValidationError("unknown " + std::string(PresetSubdir(kind)) + " preset '" + ref +
                        "'; available: " + (list.empty() ? "(none)" : list));
}

DeviceSpec ParseDevice(std::string_view text) {
  static const char* kWhat = "device preset";
  json j = ParseObject(text, kWhat);
  RejectUnknown(j,
                {"name", "mem_bytes", "peak_gops", "efficiency", "active_power_w",
                 "idle_power_w", "runtime_overhead_bytes", "swap_bandwidth_bytes_s",
                 "accel", "notes"},
                kWhat);
  DeviceSpec d;
  Read(j, "name", &d.name, kWhat);
  Read(j, "mem_bytes", &d.mem_bytes, kWhat);
  Read(j, "peak_gops", &d.peak_gops, kWhat);
  Read(j, "efficiency", &d.efficiency, kWhat);
  Read(j, "active_power_w", &d.active_power_w, kWhat);
  Read(j, "idle_power_w", &d.idle_power_w, kWhat);
  Read(j, "runtime_overhead_bytes", &d.runtime_overhead_bytes, kWhat);
  Read(j, "swap_bandwidth_bytes_s", &d.swap_bandwidth_bytes_s, kWhat);
  if (j.contains("accel")) {
    const json& a = j.at("accel");
    if (a.is_string()) {
      d.accel = LoadAccel(a.get<std::string>());
    } else if (a.is_object()) {
      d.accel = AccelFromJson(a);
    } else {
      throw ParseError("device preset: field 'accel' must be a preset name or object");
    }
    if (!j.contains("peak_gops")) d.peak_gops = accel::PeakThroughput(*d.accel) / 1e9;
  }
  d.Validate();
  return d;
}

NetworkSpec ParseNetwork(std::string_view text) {
  static const char* kWhat = "network preset";
  json j = ParseObject(text, kWhat);
  RejectUnknown(j,
                {"name", "bandwidth_bps", "base_latency_s", "jitter",
                 "per_message_overhead_bytes", "notes"},
                kWhat);
  NetworkSpec n;
  Read(j, "name", &n.name, kWhat);
  Read(j, "bandwidth_bps", &n.bandwidth_bps, kWhat);
  Read(j, "base_latency_s", &n.base_latency_s, kWhat);
  Read(j, "per_message_overhead_bytes", &n.per_message_overhead_bytes, kWhat);
  if (j.contains("jitter")) n.jitter = JitterFromJson(j.at("jitter"));
  n.Validate();
  return n;
}

accel::AccelConfig ParseAccel(std::string_view text) {
  return AccelFromJson(ParseObject(text, "accel preset"));
}

DeviceSpec LoadDevice(const std::string& ref) {
  return ParseDevice(ReadTextFile(ResolvePreset(PresetKind::kDevice, ref)));
}

NetworkSpec LoadNetwork(const std::string& ref) {
  return ParseNetwork(ReadTextFile(ResolvePreset(PresetKind::kNetwork, ref)));
}

accel::AccelConfig LoadAccel(const std::string& ref) {
  return ParseAccel(ReadTextFile(ResolvePreset(PresetKind::kAccel, ref)));
}

std::string SerializeDevice(const DeviceSpec& d) {
  ordered_json j;
  j["name"] = d.name;
  j["mem_bytes"] = d.mem_bytes;
  j["peak_gops"] = d.peak_gops;
  j["efficiency"] = d.efficiency;
  j["active_power_w"] = d.active_power_w;
  j["idle_power_w"] = d.idle_power_w;
  j["runtime_overhead_bytes"] = d.runtime_overhead_bytes;
  j["swap_bandwidth_bytes_s"] = d.swap_bandwidth_bytes_s;
  if (d.accel) j["accel"] = AccelToJson(*d.accel);
  return j.dump(2);
}

std::string SerializeNetwork(const NetworkSpec& n) {
  ordered_json j;
  j["name"] = n.name;
  j["bandwidth_bps"] = n.bandwidth_bps;
  j["base_latency_s"] = n.base_latency_s;
  j["per_message_overhead_bytes"] = n.per_message_overhead_bytes;
  ordered_json jit;
  jit["kind"] = JitterKindName(n.jitter.kind);
  jit["sigma"] = n.jitter.sigma;
  jit["scale_s"] = n.jitter.scale_s;
  jit["tail_probability"] = n.jitter.tail_probability;
  jit["tail_mean_s"] = n.jitter.tail_mean_s;
  j["jitter"] = jit;
  return j.dump(2);
}

std::string SerializeAccel(const accel::AccelConfig& a) { return AccelToJson(a).dump(2); }

}  // namespace lcp
