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

#ifndef LCP_GRAPH_H_
#define LCP_GRAPH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcp {

enum class LayerKind {
  kInput,
  kFullyConnected,
  kConvolution,
  kPooling,
  kNormalization,
  kDropout,
  kActivation,
  kAdd,
  kConcat,
  kClassifierFc,
};

enum class PoolMode { kMax, kAvg };

std::string_view LayerKindName(LayerKind kind);
std::optional<LayerKind> LayerKindFromName(std::string_view name);

// fully_connected, classifier_fc and (non-depthwise) convolution carry a width.
bool HasWidth(LayerKind kind);
// Layers that own weights and are lowered to a matrix product.
bool IsWeighted(LayerKind kind);

struct Dim2 {
  int64_t h = 1;
  int64_t w = 1;

  bool operator==(const Dim2&) const = default;
};

// One node of a model graph. Attributes that do not apply to a kind keep their
// defaults; the branch/origin pair is only populated by the splitter.
struct LayerSpec {
  std::string id;
  LayerKind kind = LayerKind::kActivation;

  // out_features for fully connected layers, out_channels for convolutions.
  int64_t width = 0;

  // convolution / pooling geometry. Pooling uses `kernel` as its window.
  Dim2 kernel;
  Dim2 stride;
  Dim2 padding{0, 0};
  int64_t groups = 1;
  bool depthwise = false;
  bool bias = true;

  PoolMode pool_mode = PoolMode::kMax;
  bool global_pool = false;

  double dropout_rate = 0.0;
  std::string function;  // activation function name, metadata only

  // Fraction of the reduction dimension kept after structured pruning.
  double keep_fraction = 1.0;

  std::vector<std::string> predecessors;

  // -1 marks a layer that is shared (input, stem, aggregation, classifier).
  int branch = -1;
  std::string origin;

  bool operator==(const LayerSpec&) const = default;
};

struct TensorShape {
  // (channels, height, width) or (features,)
  std::vector<int64_t> dims;
  int element_bits = 32;

  bool is_spatial() const { return dims.size() == 3; }
  int64_t channels() const { return dims.empty() ? 0 : dims.front(); }
  int64_t elements() const;
  int64_t bytes() const { return elements() * element_bits / 8; }
  std::string ToString() const;

  bool operator==(const TensorShape&) const = default;
};

struct ModelGraph {
  std::string name;
  std::vector<int64_t> input_shape;
  int element_bits = 32;
  std::vector<LayerSpec> layers;

  const LayerSpec* Find(std::string_view id) const;
  LayerSpec* Find(std::string_view id);
  const LayerSpec& input() const;

  bool operator==(const ModelGraph&) const = default;
};

using ShapeMap = std::map<std::string, TensorShape, std::less<>>;

// Throws ValidationError when an invariant of the layer vocabulary or the DAG
// structure is violated. Shapes are not checked here; see InferShapes.
void Validate(const ModelGraph& g);

// Layer indices in a stable topological order (ties keep declaration order).
std::vector<size_t> TopologicalOrder(const ModelGraph& g);

// Ids of the layers that consume `id`.
std::vector<std::string> Successors(const ModelGraph& g, std::string_view id);

// The unique layer nobody consumes.
const LayerSpec& Sink(const ModelGraph& g);

ShapeMap InferShapes(const ModelGraph& g);

// The tensor a layer consumes. Multiple predecessors are joined along the
// channel (or feature) axis, so concat and implicit joins share one rule.
TensorShape InputShapeOf(const ModelGraph& g, const LayerSpec& l,
                         const ShapeMap& shapes);

int64_t LayerParams(const LayerSpec& l, const TensorShape& in_shape);
int64_t LayerMacs(const LayerSpec& l, const TensorShape& in_shape,
                  const TensorShape& out_shape);

struct LayerFootprint {
  std::string id;
  int64_t params = 0;
  int64_t macs = 0;
  int64_t activation_bytes = 0;
};

struct FootprintReport {
  int64_t total_params = 0;
  int64_t total_macs = 0;
  int64_t model_bytes = 0;
  int64_t peak_activation_bytes = 0;
  int element_bits = 32;
  std::vector<LayerFootprint> per_layer;
};

FootprintReport TotalFootprint(const ModelGraph& g, int element_bits);
inline FootprintReport TotalFootprint(const ModelGraph& g) {
  return TotalFootprint(g, g.element_bits);
}

// Footprint restricted to the layers accepted by `keep` (shapes from the
// whole graph). Peak activation counts a layer's input plus its output.
template <typename Pred>
FootprintReport PartialFootprint(const ModelGraph& g, const ShapeMap& shapes,
                                 int element_bits, Pred keep);

// Compact layer-count signature such as "3fc-6c-4p" (fc, c, p, n, d order).
std::string LayerSignature(const ModelGraph& g);

// ---------------------------------------------------------------------------

FootprintReport FootprintOfLayers(const ModelGraph& g, const ShapeMap& shapes,
                                  int element_bits,
                                  const std::vector<const LayerSpec*>& layers);

template <typename Pred>
FootprintReport PartialFootprint(const ModelGraph& g, const ShapeMap& shapes,
                                 int element_bits, Pred keep) {
  std::vector<const LayerSpec*> selected;
  for (const LayerSpec& l : g.layers) {
    if (keep(l)) selected.push_back(&l);
  }
  return FootprintOfLayers(g, shapes, element_bits, selected);
}

}  // namespace lcp

#endif  // LCP_GRAPH_H_
