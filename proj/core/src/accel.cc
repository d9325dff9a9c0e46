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

#include "lcp/accel.h"

#include <algorithm>
#include <cmath>

#include "lcp/error.h"

namespace lcp {
namespace accel {
namespace {

int64_t CeilDiv(int64_t a, int64_t b) { return (a + b - 1) / b; }

struct Gemm {
  bool lowered = false;
  int64_t m = 0, k = 0, n = 0, groups = 1;
};

int64_t Kept(int64_t k, double keep) {
  if (keep >= 1.0) return k;
  return std::max<int64_t>(
      1, static_cast<int64_t>(std::ceil(static_cast<double>(k) * keep - 1e-9)));
}

Gemm Lower(const LayerSpec& l, const TensorShape& in, const TensorShape& out) {
  Gemm g;
  switch (l.kind) {
    case LayerKind::kFullyConnected:
    case LayerKind::kClassifierFc:
      g.lowered = true;
      g.m = 1;
      g.k = Kept(in.elements(), l.keep_fraction);
      g.n = l.width;
      return g;
    case LayerKind::kConvolution: {
      const int64_t cin = in.channels();
      const int64_t groups = l.depthwise ? cin : l.groups;
      const int64_t cout = out.channels();
      g.lowered = true;
      g.m = out.dims[1] * out.dims[2];
      g.k = Kept(l.kernel.h * l.kernel.w * (cin / groups), l.keep_fraction);
      g.n = cout / groups;
      g.groups = groups;
      return g;
    }
    default:
      return g;
  }
}

}  // namespace

int64_t AdderTreeStages(int64_t array_cols) {
  int64_t stages = 0;
  while ((int64_t{1} << stages) < array_cols) ++stages;
  return stages;
}

void AccelConfig::Validate() const {
  if (array_cols < 1 || array_rows < 1) {
    throw ValidationError("accel '" + name + "': array dims must be >= 1");
  }
  if (!(clock_hz > 0) || !(mem_bandwidth_bytes_s > 0) ||
      !(max_reuse_ops_per_byte > 0)) {
    throw ValidationError("accel '" + name +
                          "': clock, bandwidth and reuse must be positive");
  }
  if (stationary_buffer_depth < 1) {
    throw ValidationError("accel '" + name + "': stationary buffer depth must be >= 1");
  }
  if (adder_tree_stages != AdderTreeStages(array_cols)) {
    throw ValidationError("accel '" + name + "': adder_tree_stages must equal ceil(log2(" +
                          std::to_string(array_cols) + ")) = " +
                          std::to_string(AdderTreeStages(array_cols)));
  }
  if (element_bits != 8 && element_bits != 16 && element_bits != 32) {
    throw ValidationError("accel '" + name + "': element_bits must be 8, 16 or 32");
  }
}

AccelConfig FpgaZ7020() {
  AccelConfig c;
  c.name = "fpga-z7020";
  c.clock_hz = 100e6;
  c.power_w = 0.133;
  return c;
}

AccelConfig Asic7nm() {
  AccelConfig c;
  c.name = "asic-7nm";
  c.clock_hz = 800e6;
  c.power_w = 0.0161;
  c.area_mm2 = 0.107;
  return c;
}

double PeakThroughput(const AccelConfig& cfg) {
  const double compute = 2.0 * static_cast<double>(cfg.array_cols * cfg.array_rows) *
                         cfg.clock_hz;
  const double memory = cfg.mem_bandwidth_bytes_s * cfg.max_reuse_ops_per_byte;
  return std::min(compute, memory);
}

void QuantPruneSpec::Validate() const {
  if (quant_bits != 8 && quant_bits != 16 && quant_bits != 32) {
    throw ValidationError("quant_bits must be 8, 16 or 32");
  }
  if (!(prune_fraction >= 0.0 && prune_fraction < 1.0)) {
    throw ValidationError("prune fraction must lie in [0, 1)");
  }
}

int64_t BlockSchedule::stationary_blocks() const {
  if (passthrough) return 0;
  return std::count_if(blocks.begin(), blocks.end(), [](const Block& b) {
    return b.type == Block::Type::kStationary;
  });
}

int64_t BlockSchedule::streaming_blocks() const {
  if (passthrough) return 0;
  return std::count_if(blocks.begin(), blocks.end(), [](const Block& b) {
    return b.type == Block::Type::kStreaming;
  });
}

BlockSchedule TileLayer(const LayerSpec& l, const TensorShape& in_shape,
                        const TensorShape& out_shape, const AccelConfig& cfg) {
  BlockSchedule s;
  s.layer_id = l.id;
  Gemm g = Lower(l, in_shape, out_shape);
  if (!g.lowered) {
    s.m = out_shape.elements();
    return s;
  }
  s.passthrough = false;
  s.m = g.m;
  s.k = g.k;
  s.n = g.n;
  s.groups = g.groups;
  const int64_t nb_k = CeilDiv(g.k, cfg.array_cols);
  const int64_t nb_n = CeilDiv(g.n, cfg.array_rows);
  s.blocks.reserve(static_cast<size_t>(g.groups * nb_k * (nb_n + 1)));
  int64_t index = 0;
  for (int64_t grp = 0; grp < g.groups; ++grp) {
    for (int64_t i = 0; i < nb_k; ++i) {
      for (int64_t j = 0; j < nb_n; ++j) {
        Block b;
        b.index = index++;
        b.type = Block::Type::kStationary;
        b.group = grp;
        b.row = i;
        b.col = j;
        b.rows = std::min(cfg.array_cols, g.k - i * cfg.array_cols);
        b.cols = std::min(cfg.array_rows, g.n - j * cfg.array_rows);
        s.blocks.push_back(b);
      }
    }
  }
  for (int64_t grp = 0; grp < g.groups; ++grp) {
    for (int64_t i = 0; i < nb_k; ++i) {
      Block b;
      b.index = index++;
      b.type = Block::Type::kStreaming;
      b.group = grp;
      b.row = i;
      b.cols = std::min(cfg.array_cols, g.k - i * cfg.array_cols);
      b.length = g.m;
      s.blocks.push_back(b);
    }
  }
  return s;
}

namespace {

LayerTiming TimeGemm(const std::string& id, const Gemm& g, int64_t out_elements,
                     const AccelConfig& cfg, int element_bits) {
  LayerTiming t;
  t.layer_id = id;
  if (!g.lowered) {
    const double cycles =
        cfg.pool_cost_cycles_per_element * static_cast<double>(out_elements);
    t.compute_cycles = static_cast<int64_t>(std::ceil(cycles));
    t.compute_s = cycles / cfg.clock_hz;
    t.latency_s = t.compute_s;
    return t;
  }
  const int64_t nb_k = CeilDiv(g.k, cfg.array_cols);
  const int64_t nb_n = CeilDiv(g.n, cfg.array_rows);
  const int64_t blocks = g.groups * nb_k * nb_n;
  t.resident = blocks <= cfg.stationary_buffer_depth;
  const int64_t fill = t.resident ? 0 : cfg.array_rows;
  t.compute_cycles = blocks * (g.m + cfg.adder_tree_stages + fill);

  // The stream is re-read once per output-column block; weights and outputs
  // move once.
  const int64_t stream = g.groups * g.m * g.k * nb_n;
  const int64_t weights = g.groups * g.k * g.n;
  const int64_t outputs = g.groups * g.m * g.n;
  t.bytes = (stream + weights + outputs) * element_bits / 8;
  t.ops = 2 * g.m * g.k * g.n * g.groups;

  t.compute_s = static_cast<double>(t.compute_cycles) / cfg.clock_hz;
  t.memory_s = static_cast<double>(t.bytes) / cfg.mem_bandwidth_bytes_s;
  t.reuse_s = static_cast<double>(t.ops) /
              (cfg.mem_bandwidth_bytes_s * cfg.max_reuse_ops_per_byte);
  t.latency_s = std::max({t.compute_s, t.memory_s, t.reuse_s});
  return t;
}

}  // namespace

LayerTiming LayerLatency(const BlockSchedule& schedule, const AccelConfig& cfg,
                         int element_bits) {
  Gemm g;
  g.lowered = !schedule.passthrough;
  g.m = schedule.m;
  g.k = schedule.k;
  g.n = schedule.n;
  g.groups = schedule.groups;
  return TimeGemm(schedule.layer_id, g, schedule.passthrough ? schedule.m : 0, cfg,
                  element_bits);
}

LayerTiming LayerLatency(const LayerSpec& l, const TensorShape& in_shape,
                         const TensorShape& out_shape, const AccelConfig& cfg,
                         int element_bits) {
  Gemm g = Lower(l, in_shape, out_shape);
  const bool zero_cost_kind =
      l.kind == LayerKind::kInput || l.kind == LayerKind::kConcat ||
      l.kind == LayerKind::kDropout;
  return TimeGemm(l.id, g, zero_cost_kind ? 0 : out_shape.elements(), cfg,
                  element_bits);
}

ModelTiming LayersLatency(const ModelGraph& g, const ShapeMap& shapes,
                          const std::vector<const LayerSpec*>& layers,
                          const AccelConfig& cfg) {
  ModelTiming mt;
  for (const LayerSpec* l : layers) {
    TensorShape in = InputShapeOf(g, *l, shapes);
    LayerTiming t = LayerLatency(*l, in, shapes.at(l->id), cfg, g.element_bits);
    mt.latency_s += t.latency_s;
    if (IsWeighted(l->kind)) mt.latency_s += cfg.switch_overhead_s;
    mt.ops += t.ops;
    mt.layers.push_back(std::move(t));
  }
  return mt;
}

ModelTiming ModelLatency(const ModelGraph& g, const AccelConfig& cfg) {
  if (g.layers.empty()) return {};
  ShapeMap shapes = InferShapes(g);
  std::vector<const LayerSpec*> ordered;
  for (size_t i : TopologicalOrder(g)) ordered.push_back(&g.layers[i]);
  return LayersLatency(g, shapes, ordered, cfg);
}

ModelGraph ApplyQuantPrune(const ModelGraph& g, const QuantPruneSpec& qp) {
  qp.Validate();
  ModelGraph out = g;
  out.element_bits = qp.quant_bits;
  if (qp.prune_fraction > 0.0) {
    for (LayerSpec& l : out.layers) {
      if (l.kind == LayerKind::kConvolution || l.kind == LayerKind::kFullyConnected) {
        l.keep_fraction *= (1.0 - qp.prune_fraction);
      }
    }
  }
  return out;
}

}  // namespace accel
}  // namespace lcp
