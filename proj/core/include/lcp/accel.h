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

#ifndef LCP_ACCEL_H_
#define LCP_ACCEL_H_

// Analytic latency model of a latency-oriented weight-stationary systolic
// array. Every fc/conv layer is lowered to an M x K . K x N product:
//   - the streaming operand (activations, im2col for convolutions) is cut into
//     blocks of `array_cols` width and M rows,
//   - the stationary operand (weights) is cut into array_cols x array_rows
//     blocks; each of the array rows reduces its products through a pipelined
//     adder tree of ceil(log2(array_cols)) stages.
// Layer latency is a roofline over compute cycles, memory traffic and the
// array's maximum data reuse.

#include <cstdint>
#include <string>
#include <vector>

#include "lcp/graph.h"

namespace lcp {
namespace accel {

struct AccelConfig {
  std::string name = "custom";
  int64_t array_cols = 32;  // stream width (reduction slice per cycle)
  int64_t array_rows = 64;  // stationary depth (output columns per block)
  double clock_hz = 100e6;
  double mem_bandwidth_bytes_s = 3.4e9;
  int64_t adder_tree_stages = 5;
  int64_t stationary_buffer_depth = 8;
  double max_reuse_ops_per_byte = 64.0;
  int element_bits = 32;
  double switch_overhead_s = 0.0;  // per weighted layer
  double pool_cost_cycles_per_element = 0.0;
  double power_w = 0.0;     // reporting only
  double area_mm2 = 0.0;    // reporting only

  // Throws ValidationError on non-positive fields or an adder tree that does
  // not match ceil(log2(array_cols)).
  void Validate() const;
};

int64_t AdderTreeStages(int64_t array_cols);

// Built-in defaults for the two named presets; the shipped config files under
// configs/accel/ are the authoritative copies.
AccelConfig FpgaZ7020();
AccelConfig Asic7nm();

// min(2 * cols * rows * clock, bandwidth * max reuse), in ops/s.
double PeakThroughput(const AccelConfig& cfg);

struct QuantPruneSpec {
  int quant_bits = 16;          // "3.13" fixed point
  double prune_fraction = 0.45; // structured pruning per weighted layer
  bool lossless = true;         // metadata only

  void Validate() const;
};

struct Block {
  enum class Type { kStationary, kStreaming };
  int64_t index = 0;
  Type type = Type::kStationary;
  int64_t group = 0;
  int64_t row = 0;     // reduction-block index
  int64_t col = 0;     // output-column block index (stationary only)
  int64_t rows = 0;    // used extent along the reduction dim
  int64_t cols = 0;    // used extent along the output dim, or stream width
  int64_t length = 0;  // stream length (M) for streaming blocks
};

struct BlockSchedule {
  std::string layer_id;
  bool passthrough = true;  // not a lowered layer; zero cost
  int64_t m = 0;
  int64_t k = 0;            // per-group reduction length (after pruning)
  int64_t n = 0;            // per-group output columns
  int64_t groups = 1;
  std::vector<Block> blocks;  // stationary blocks then streaming blocks

  int64_t stationary_blocks() const;
  int64_t streaming_blocks() const;
  int64_t ops() const { return 2 * m * k * n * groups; }
};

// Lowers one layer given its input/output shapes.
BlockSchedule TileLayer(const LayerSpec& l, const TensorShape& in_shape,
                        const TensorShape& out_shape,
                        const AccelConfig& cfg = FpgaZ7020());

struct LayerTiming {
  std::string layer_id;
  int64_t compute_cycles = 0;
  int64_t bytes = 0;
  int64_t ops = 0;
  bool resident = false;
  double compute_s = 0.0;
  double memory_s = 0.0;
  double reuse_s = 0.0;
  double latency_s = 0.0;

  double throughput_ops_s() const {
    return latency_s > 0 ? static_cast<double>(ops) / latency_s : 0.0;
  }
};

LayerTiming LayerLatency(const BlockSchedule& schedule, const AccelConfig& cfg,
                         int element_bits);
LayerTiming LayerLatency(const LayerSpec& l, const TensorShape& in_shape,
                         const TensorShape& out_shape, const AccelConfig& cfg,
                         int element_bits);

struct ModelTiming {
  double latency_s = 0.0;
  int64_t ops = 0;
  std::vector<LayerTiming> layers;
};

// Sum of per-layer latencies plus the per-layer switch overhead. Uses the
// graph's element width.
ModelTiming ModelLatency(const ModelGraph& g, const AccelConfig& cfg);

// Latency of a subset of layers of `g` (used for branches and slices).
ModelTiming LayersLatency(const ModelGraph& g, const ShapeMap& shapes,
                          const std::vector<const LayerSpec*>& layers,
                          const AccelConfig& cfg);

// Returns a copy with element_bits set to quant_bits and every weighted layer
// except the classifier keeping (1 - prune_fraction) of its reduction
// dimension. Accuracy is untouched.
ModelGraph ApplyQuantPrune(const ModelGraph& g, const QuantPruneSpec& qp);

}  // namespace accel
}  // namespace lcp

#endif  // LCP_ACCEL_H_
