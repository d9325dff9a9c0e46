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

#ifndef LCP_SPLIT_MODEL_H_
#define LCP_SPLIT_MODEL_H_

#include <string>
#include <vector>

#include "lcp/graph.h"

namespace lcp {

enum class StemMode {
  // Every branch consumes the model input through its own narrowed stem.
  kReplicated,
  // One unsplit first weighted layer feeds all branches.
  kShared,
};

struct SplitProvenance {
  std::string original_model;
  int division_factor = 2;
  int division_steps = 0;
  double fatten_percent = 0.0;
  StemMode stem = StemMode::kReplicated;

  bool operator==(const SplitProvenance&) const = default;
};

// A model rewritten into `split_count` independent branches. The combined
// graph stays a valid ModelGraph: input -> [shared head] -> branches ->
// concat of pre-final activations -> shared classifier. Branch layers carry
// branch >= 0; everything else is shared (branch == -1).
struct SplitModel {
  ModelGraph graph;
  int split_count = 1;
  SplitProvenance provenance;

  // "VGG16-split8-f40"; the key used by accuracy tables.
  std::string ProvenanceKey() const;

  std::vector<const LayerSpec*> BranchLayers(int branch) const;
  std::vector<const LayerSpec*> SharedLayers() const;

  // Shared layers that precede the branches (input and, in shared-stem mode,
  // the stem).
  std::vector<const LayerSpec*> SharedHead() const;
  // Shared layers downstream of the branches (aggregation and classifier).
  std::vector<const LayerSpec*> SharedTail() const;

  // The branch layer whose output is gathered for the classifier.
  const LayerSpec& PreFinal(int branch) const;
  const LayerSpec& Classifier() const;

  // Stand-alone graph of one branch: shared head plus the branch's layers.
  ModelGraph BranchGraph(int branch) const;

  bool operator==(const SplitModel&) const = default;
};

std::string ProvenanceKey(const std::string& model, int split_count,
                          double fatten_percent);

}  // namespace lcp

#endif  // LCP_SPLIT_MODEL_H_
