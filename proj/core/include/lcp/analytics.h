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

#ifndef LCP_ANALYTICS_H_
#define LCP_ANALYTICS_H_

// Closed-form per-device footprint and per-inference communication for data
// parallelism, model parallelism (output or input splitting) and LCP.
//
// Communication is enumerated as messages between nodes. Devices are numbered
// 0..n-1; the input source (a camera) is node kSourceNode unless it is
// co-located with device 0. A boundary's pair count is the number of distinct
// (sender, receiver) pairs among its messages; results returned to the source
// travel over the input's connection and add bytes but no pair. A report's
// connection_pairs is the sum over boundaries.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcp/graph.h"
#include "lcp/split_model.h"

namespace lcp {

inline constexpr int kSourceNode = -1;

enum class StrategyKind {
  kDataParallel,
  kModelParallelOutputSplit,
  kModelParallelInputSplit,
  kLcp,
};

std::string_view StrategyName(StrategyKind kind);
std::optional<StrategyKind> StrategyFromName(std::string_view name);

struct Strategy {
  StrategyKind kind = StrategyKind::kDataParallel;
  int n_devices = 1;
};

enum class SourceMode { kDedicated, kColocated };

struct AnalyticsOptions {
  int element_bits = 0;  // 0 keeps the model's element width
  int input_bits = 0;    // width of the source's input frames; 0 = element_bits
  SourceMode source = SourceMode::kDedicated;
};

struct Message {
  int from = kSourceNode;
  int to = 0;
  int64_t bytes = 0;
};

struct BoundaryComm {
  std::string boundary;
  int64_t bytes = 0;
  int64_t pairs = 0;
  std::vector<Message> messages;
};

struct CommReport {
  int64_t connection_pairs = 0;
  int64_t bytes_per_inference = 0;
  // Bytes between devices, excluding traffic to or from a dedicated source.
  int64_t inter_device_bytes = 0;
  std::vector<BoundaryComm> per_boundary;
};

// Ceiling partition of `total` units over n parts; earlier parts get the
// remainder.
std::vector<int64_t> PartitionUnits(int64_t total, int n);

// One synchronization stage of output-split model parallelism: the layers
// between two all-gathers. Stage 0 reads the model input directly.
struct ParallelStage {
  std::string boundary;  // first weighted layer of the stage
  std::vector<std::string> layers;
  std::vector<int64_t> device_macs;
  // Bytes of the gathered input tensor held by each device (empty for stage 0).
  std::vector<int64_t> gather_slice_bytes;
};

std::vector<ParallelStage> OutputSplitStages(const ModelGraph& g, int n,
                                             int element_bits);

// Per-device slices of output-split model parallelism. Final output slices
// are what each device sends to device 0 at the end.
std::vector<int64_t> OutputSliceBytes(const ModelGraph& g, int n, int element_bits);

std::vector<FootprintReport> PerDeviceFootprint(const ModelGraph& g, const Strategy& s,
                                                const AnalyticsOptions& opt = {});
std::vector<FootprintReport> PerDeviceFootprint(const SplitModel& sm, const Strategy& s,
                                                const AnalyticsOptions& opt = {});

// Memory a device needs: model bytes plus peak activation.
inline int64_t MemBytes(const FootprintReport& f) {
  return f.model_bytes + f.peak_activation_bytes;
}

CommReport CommunicationLoad(const ModelGraph& g, const Strategy& s,
                             const AnalyticsOptions& opt = {});
CommReport CommunicationLoad(const SplitModel& sm, const Strategy& s,
                             const AnalyticsOptions& opt = {});

struct StrategyRow {
  std::string strategy;
  int n = 1;
  int device = 0;  // most loaded device
  int64_t params = 0;
  int64_t macs = 0;
  int64_t mem_bytes = 0;
  int64_t comm_bytes = 0;
  int64_t comm_pairs = 0;
};

// One row per strategy. LCP rows split the model into n branches first (n
// must be a power of the factor 2, or the model is divided once by n).
std::vector<StrategyRow> CompareStrategies(const ModelGraph& g,
                                           const std::vector<Strategy>& strategies,
                                           const AnalyticsOptions& opt = {},
                                           StemMode stem = StemMode::kReplicated);

// The split used for an LCP comparison row with n devices.
SplitModel LcpSplitFor(const ModelGraph& g, int n, StemMode stem);

}  // namespace lcp

#endif  // LCP_ANALYTICS_H_
