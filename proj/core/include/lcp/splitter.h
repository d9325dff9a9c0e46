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

#ifndef LCP_SPLITTER_H_
#define LCP_SPLITTER_H_

// Rewrites a model into narrow, independent branches.
//
// One division pass divides the width of every branch layer by the division
// factor (ceiling), producing `factor` sub-branches per branch whose layers
// are, at first, densely cross-linked exactly like the width-sliced original.
// RemoveNonBranchConnections then deletes every edge that crosses branches.
// Passes repeat until one branch fits the target device by memory and by
// compute time. The classifier is never divided; it is placed once and reads
// the concatenation of the branches' pre-final activations.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcp/device.h"
#include "lcp/graph.h"
#include "lcp/split_model.h"

namespace lcp {

struct SplitConfig {
  int division_factor = 2;
  DeviceSpec device;
  double fatten_step_percent = 0.10;
  double task_error_bound = 0.03;
  double fatten_cap_percent = 1.0;
  int64_t framework_mem_overhead = 0;
  // Compute fit check: branch MACs * 2 / effective throughput <= budget.
  double latency_budget_s = 1.0;
  StemMode stem = StemMode::kReplicated;
  // When set, exactly this many division passes run, regardless of the fit.
  std::optional<int> forced_passes;

  void Validate() const;
};

// A device whose memory and throughput never bind.
DeviceSpec UnboundedDevice();

// The unsplit model wrapped as a one-branch SplitModel.
SplitModel WrapUnsplit(const ModelGraph& g, StemMode stem = StemMode::kReplicated);

// One width-division pass; cross-branch links are still present.
ModelGraph DivideWidths(const SplitModel& current, int factor, int* new_count);

ModelGraph RemoveNonBranchConnections(const ModelGraph& g);

struct BranchFit {
  int branch = 0;
  int64_t mem_bytes = 0;
  double compute_s = 0.0;
  bool fits_mem = false;
  bool fits_compute = false;
  std::string largest_layer;
};

// Per-branch fit of the current model against the configured device. Branch
// 0 also carries the shared layers since it is co-located with the
// aggregator.
std::vector<BranchFit> CheckFit(const SplitModel& sm, const SplitConfig& cfg);

SplitModel Split(const ModelGraph& g, const SplitConfig& cfg);

SplitModel Fatten(const SplitModel& sm, double percent);

// Returns the accuracy (top-1, percent) of a candidate model.
using AccuracyOracle = std::function<double(const SplitModel&)>;

// Rows of (provenance key, top-1 percent). Lookups of unknown keys throw.
class AccuracyTable {
 public:
  AccuracyTable() = default;
  explicit AccuracyTable(std::map<std::string, double> rows)
      : rows_(std::move(rows)) {}

  // "key,top1" lines; '#' starts a comment, a "key,top1" header is skipped.
  static AccuracyTable Parse(const std::string& text);

  double Lookup(const std::string& key) const;
  AccuracyOracle AsOracle() const;
  const std::map<std::string, double>& rows() const { return rows_; }

 private:
  std::map<std::string, double> rows_;
};

struct DesignStep {
  std::string key;
  double accuracy = 0.0;
  double gap = 0.0;  // original minus candidate, in percentage points
};

struct DesignResult {
  SplitModel model;
  std::vector<DesignStep> trace;
};

// Splits, then fattens in fatten_step increments until the candidate is
// within task_error_bound (a fraction, compared in percentage points) of the
// original's accuracy. Throws InfeasibleError with the gap trace when the
// fatten cap is reached first.
DesignResult DesignLoop(const ModelGraph& g, const SplitConfig& cfg,
                        const AccuracyOracle& oracle);

// Number of connected components over branch layers when the shared layers
// (input, stem, aggregation, classifier) are removed.
int CountBranchComponents(const ModelGraph& g);

}  // namespace lcp

#endif  // LCP_SPLITTER_H_
