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

#include "lcp/scenario.h"

#include "json.hpp"
#include "lcp/error.h"
#include "lcp/presets.h"

namespace lcp {
namespace {

using nlohmann::json;

const char* kWhat = "scenario";

void RejectUnknown(const json& j, std::initializer_list<const char*> allowed,
                   const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T Get(const json& j, const char* field, const std::string& where) {
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field '" + field + "' is missing or has the wrong type");
  }
}

DeviceSpec DeviceFrom(const json& j) {
  if (j.is_string()) return LoadDevice(j.get<std::string>());
  if (j.is_object()) return ParseDevice(j.dump());
  throw ParseError("scenario: a device must be a preset name, path or object");
}

StemMode StemFrom(const std::string& s) {
  if (s == "replicated") return StemMode::kReplicated;
  if (s == "shared") return StemMode::kShared;
  throw ParseError("scenario: stem must be 'replicated' or 'shared', got '" + s + "'");
}

}  // namespace

std::filesystem::path ResolveModel(const std::string& ref,
                                   const std::filesystem::path& base_dir) {
  std::filesystem::path p(ref);
  if (p.is_absolute()) return p;
  if (std::filesystem::exists(base_dir / p)) return base_dir / p;
  if (std::filesystem::exists(p)) return p;
  std::filesystem::path bundled = ModelsDir() / p;
  if (!bundled.has_extension()) bundled += ".json";
  if (std::filesystem::exists(bundled)) return bundled;
  throw IoError("model '" + ref + "' not found next to the scenario or in " +
                ModelsDir().string());
}

Scenario ParseScenario(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(kWhat) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  RejectUnknown(j,
                {"name", "model", "strategy", "n_devices", "split", "device", "devices",
                 "network", "calibrate", "n_inferences", "seed", "input_bits", "placement",
                 "pipelined", "notes"},
                kWhat);
  Scenario sc;
  sc.name = j.value("name", std::string("scenario"));
  sc.model_path = ResolveModel(Get<std::string>(j, "model", kWhat), base_dir);
  sc.model = LoadModelDocument(sc.model_path);

  const std::string strategy = Get<std::string>(j, "strategy", kWhat);
  auto kind = StrategyFromName(strategy);
  if (!kind) throw ParseError("scenario: unknown strategy '" + strategy + "'");
  sc.strategy.kind = *kind;

  if (j.contains("devices")) {
    if (!j["devices"].is_array() || j["devices"].empty()) {
      throw ParseError("scenario: 'devices' must be a non-empty array");
    }
    for (const json& d : j["devices"]) sc.devices.push_back(DeviceFrom(d));
  }
  if (j.contains("device")) {
    if (!sc.devices.empty()) throw ParseError("scenario: give 'device' or 'devices', not both");
    const int n = j.contains("n_devices") ? Get<int>(j, "n_devices", kWhat) : 1;
    if (n < 1) throw ValidationError("scenario: n_devices must be >= 1");
    sc.devices.assign(static_cast<size_t>(n), DeviceFrom(j["device"]));
  }
  if (sc.devices.empty()) throw ParseError("scenario: no devices given");
  sc.strategy.n_devices = j.contains("n_devices") ? Get<int>(j, "n_devices", kWhat)
                                                  : static_cast<int>(sc.devices.size());

  if (!j.contains("network")) throw ParseError("scenario: field 'network' is missing");
  if (j["network"].is_string()) {
    sc.network = LoadNetwork(j["network"].get<std::string>());
  } else {
    sc.network = ParseNetwork(j["network"].dump());
  }

  if (j.contains("split")) {
    const json& s = j["split"];
    RejectUnknown(s, {"division_factor", "passes", "fatten_percent", "stem",
                      "framework_mem_overhead"},
                  "scenario split");
    ScenarioSplit split;
    split.division_factor = s.value("division_factor", 2);
    if (s.contains("passes")) split.passes = Get<int>(s, "passes", "scenario split");
    split.fatten_percent = s.value("fatten_percent", 0.0);
    split.stem = StemFrom(s.value("stem", std::string("replicated")));
    split.framework_mem_overhead = s.value("framework_mem_overhead", int64_t{0});
    sc.split = split;
  }
  if (j.contains("calibrate")) {
    RejectUnknown(j["calibrate"], {"target_latency_s"}, "scenario calibrate");
    sc.calibrate_target_s = Get<double>(j["calibrate"], "target_latency_s", "scenario calibrate");
  }
  sc.options.n_inferences = j.value("n_inferences", 1);
  sc.options.seed = j.value("seed", uint64_t{0});
  sc.options.input_bits = j.value("input_bits", 0);
  sc.options.pipelined = j.value("pipelined", false);
  if (j.contains("placement")) {
    const json& p = j["placement"];
    RejectUnknown(p, {"assignment", "aggregator", "source"}, "scenario placement");
    Placement pl;
    pl.assignment = Get<std::vector<int>>(p, "assignment", "scenario placement");
    pl.aggregator = p.value("aggregator", 0);
    if (p.contains("source")) {
      if (p["source"].is_string()) {
        const std::string src = p["source"].get<std::string>();
        if (src == "dedicated") {
          pl.source = kSourceNode;
        } else if (src == "colocated") {
          pl.source = pl.aggregator;
        } else {
          throw ParseError("scenario placement: source must be 'dedicated', 'colocated' or a device id");
        }
      } else {
        pl.source = Get<int>(p, "source", "scenario placement");
      }
    }
    sc.placement = pl;
  }
  return sc;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  return ParseScenario(ReadTextFile(path), path.parent_path());
}

ScenarioRun RunScenario(const Scenario& sc) {
  ScenarioRun run;
  run.devices = sc.devices;
  if (sc.calibrate_target_s) {
    if (!std::holds_alternative<ModelGraph>(sc.model)) {
      throw ValidationError("scenario: calibration needs the unsplit model");
    }
    const double eff =
        CalibrateEfficiency(std::get<ModelGraph>(sc.model), sc.devices.front(),
                            *sc.calibrate_target_s);
    for (DeviceSpec& d : run.devices) {
      if (!d.accel) d.efficiency = eff;
    }
    run.calibrated_efficiency = eff;
  }
  if (sc.strategy.kind == StrategyKind::kLcp) {
    SplitModel sm;
    if (const auto* split = std::get_if<SplitModel>(&sc.model)) {
      sm = *split;
    } else {
      const ModelGraph& g = std::get<ModelGraph>(sc.model);
      ScenarioSplit cfg_in = sc.split.value_or(ScenarioSplit{});
      SplitConfig cfg;
      cfg.division_factor = cfg_in.division_factor;
      cfg.forced_passes = cfg_in.passes;
      cfg.stem = cfg_in.stem;
      cfg.framework_mem_overhead = cfg_in.framework_mem_overhead;
      cfg.device = run.devices.front();
      sm = Split(g, cfg);
      if (cfg_in.fatten_percent > 0.0) sm = Fatten(sm, cfg_in.fatten_percent);
    }
    const Placement pl = sc.placement.value_or(
        DefaultPlacement(sm, sc.strategy, static_cast<int>(run.devices.size())));
    run.result = Simulate(sm, sc.strategy, pl, run.devices, sc.network, sc.options);
    run.split = std::move(sm);
    return run;
  }
  const ModelGraph& g = GraphOf(sc.model);
  const Placement pl = sc.placement.value_or(
      DefaultPlacement(g, sc.strategy, static_cast<int>(run.devices.size())));
  run.result = Simulate(g, sc.strategy, pl, run.devices, sc.network, sc.options);
  return run;
}

}  // namespace lcp
