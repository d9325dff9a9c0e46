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

#ifndef LCP_SIMULATOR_H_
#define LCP_SIMULATOR_H_

// Seeded discrete-event simulation of distributed inference.
//
// Each inference is expanded into a DAG of compute tasks (on a device) and
// transmit tasks (on the sending node's link). Resources serve tasks FIFO in
// order of readiness. A message holds the sender's link for
// (payload + overhead) / bandwidth and arrives base_latency + jitter later;
// broadcasts are sequential unicasts. Latency runs from an inference's
// release to the moment its classifier output is complete on the aggregator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcp/analytics.h"
#include "lcp/device.h"
#include "lcp/graph.h"
#include "lcp/split_model.h"

namespace lcp {

// work unit -> device. Units are branches (lcp), slices (model parallel) or
// replicas (data parallel). The source is kSourceNode or a device id when the
// camera is co-located.
struct Placement {
  std::vector<int> assignment;
  int aggregator = 0;
  int source = kSourceNode;
};

Placement DefaultPlacement(const SplitModel& sm, const Strategy& s, int n_devices);
Placement DefaultPlacement(const ModelGraph& g, const Strategy& s, int n_devices);

struct SimOptions {
  int n_inferences = 1;
  uint64_t seed = 0;
  bool record_trace = false;
  // Release every inference at t=0 and let them queue (throughput mode).
  // Otherwise the next inference is released when the previous completes.
  bool pipelined = false;
  int input_bits = 0;  // camera frame element width; 0 = model element width
};

struct TraceEvent {
  enum class Kind { kCompute, kTransmit };
  int inference = 0;
  int node = 0;
  Kind kind = Kind::kCompute;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;

  bool operator==(const TraceEvent&) const = default;
};

struct SimResult {
  std::vector<double> latencies_s;
  double mean_s = 0.0;
  double p50_s = 0.0;
  double p95_s = 0.0;
  double max_s = 0.0;
  double makespan_s = 0.0;
  double throughput_ips = 0.0;
  std::vector<double> energy_j_per_device;  // per inference
  double energy_j_total = 0.0;
  uint64_t seed = 0;
  int n_devices = 0;
  std::optional<std::vector<TraceEvent>> trace;

  // Fills mean/p50/p95/max from latencies_s (linear-interpolated quantiles).
  void RecomputeStats();
  bool operator==(const SimResult&) const = default;
};

SimResult Simulate(const SplitModel& sm, const Strategy& s, const Placement& placement,
                   const std::vector<DeviceSpec>& devices, const NetworkSpec& net,
                   const SimOptions& opt);
SimResult Simulate(const ModelGraph& g, const Strategy& s, const Placement& placement,
                   const std::vector<DeviceSpec>& devices, const NetworkSpec& net,
                   const SimOptions& opt);

// Time a device needs for a set of layers (fractions of each layer's work),
// including the paging term when `paging` is set.
struct WorkItem {
  const LayerSpec* layer = nullptr;
  double fraction = 1.0;
};
double ComputeSeconds(const ModelGraph& g, const ShapeMap& shapes,
                      const std::vector<WorkItem>& work, const DeviceSpec& device,
                      bool paging);

// Whether a device holding `work` exceeds its memory and pages weights.
bool Oversubscribed(const ModelGraph& g, const ShapeMap& shapes,
                    const std::vector<WorkItem>& work, const DeviceSpec& device);

// Efficiency that makes the whole model take `target_s` on one device (the
// paging term included). Throws InfeasibleError when paging alone exceeds it.
double CalibrateEfficiency(const ModelGraph& g, DeviceSpec device, double target_s);

// baseline.mean / result.mean.
double Speedup(const SimResult& result, const SimResult& baseline);

struct EnergyReport {
  std::vector<double> per_device_j;  // per inference
  double total_j = 0.0;
  std::vector<double> busy_s;
  std::vector<double> idle_s;
};

// Busy time is the union of a device's compute and transmit intervals.
// Requires a recorded trace.
EnergyReport Energy(const SimResult& result, const std::vector<DeviceSpec>& devices);

struct Histogram {
  double bucket_width_s = 0.0;
  double origin_s = 0.0;  // lower edge of bucket 0
  std::vector<int64_t> counts;
};

Histogram LatencyHistogram(const SimResult& result, double bucket_width_s);

}  // namespace lcp

#endif  // LCP_SIMULATOR_H_
