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

#ifndef LCP_SCENARIO_H_
#define LCP_SCENARIO_H_

// A scenario file describes one simulation run:
//
// {
//   "name": "alexnet-lcp4-rpi",
//   "model": "alexnet_v2.json",          // relative to the file, or bundled
//   "strategy": "lcp", "n_devices": 4,
//   "split": {"division_factor": 2, "passes": 2},
//   "device": "rpi3",                     // or "devices": [ref | object, ...]
//   "network": "wifi",                    // preset name, path or object
//   "calibrate": {"target_latency_s": 2.8},
//   "n_inferences": 100, "seed": 7, "input_bits": 8,
//   "placement": {"assignment": [0, 1, 2, 3], "aggregator": 0, "source": "dedicated"}
// }

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcp/analytics.h"
#include "lcp/device.h"
#include "lcp/model_io.h"
#include "lcp/simulator.h"
#include "lcp/splitter.h"

namespace lcp {

struct ScenarioSplit {
  int division_factor = 2;
  std::optional<int> passes;  // unset: split until a branch fits devices[0]
  double fatten_percent = 0.0;
  StemMode stem = StemMode::kReplicated;
  int64_t framework_mem_overhead = 0;
};

struct Scenario {
  std::string name;
  std::filesystem::path model_path;
  ModelDocument model;
  Strategy strategy;
  std::optional<ScenarioSplit> split;
  std::vector<DeviceSpec> devices;
  NetworkSpec network;
  std::optional<Placement> placement;
  std::optional<double> calibrate_target_s;
  SimOptions options;
};

// Model references resolve against `base_dir` first, then the bundled models.
std::filesystem::path ResolveModel(const std::string& ref,
                                   const std::filesystem::path& base_dir);

Scenario ParseScenario(std::string_view json_text, const std::filesystem::path& base_dir);
Scenario LoadScenario(const std::filesystem::path& path);

struct ScenarioRun {
  SimResult result;
  std::optional<SplitModel> split;
  std::vector<DeviceSpec> devices;  // after calibration
  std::optional<double> calibrated_efficiency;
};

ScenarioRun RunScenario(const Scenario& sc);

}  // namespace lcp

#endif  // LCP_SCENARIO_H_
