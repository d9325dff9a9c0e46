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

#include <gtest/gtest.h>

#include <deque>
#include <random>

#include "lcp/error.h"
#include "testing/paths.h"

namespace lcp::accel {
namespace {

using lcp::testing::Bundled;

// Cycle-stepping reference for one stationary block: `fill` cycles to load
// the weights, then one stream row enters per cycle and walks the multiply
// stage plus `stages` adder-tree registers. Returns the cycle at which the
// last row's sum leaves the tree.
int64_t SteppedBlockCycles(int64_t rows, int64_t stages, int64_t fill) {
  int64_t cycle = 0;
  for (int64_t i = 0; i < fill; ++i) ++cycle;
  std::deque<bool> pipe(static_cast<size_t>(stages + 1), false);
  int64_t issued = 0, done = 0;
  while (done < rows) {
    ++cycle;
    pipe.pop_back();
    pipe.push_front(issued < rows);
    if (issued < rows) ++issued;
    if (pipe.back()) ++done;
  }
  return cycle;
}

// Functional pairwise reduction; returns the number of adder levels.
int TreeLevels(std::vector<int64_t> v, int64_t* sum) {
  int levels = 0;
  while (v.size() > 1) {
    std::vector<int64_t> next;
    for (size_t i = 0; i < v.size(); i += 2) {
      next.push_back(v[i] + (i + 1 < v.size() ? v[i + 1] : 0));
    }
    v = std::move(next);
    ++levels;
  }
  *sum = v.front();
  return levels;
}

struct OneLayer {
  LayerSpec layer;
  TensorShape in, out;
};

// 1x1 convolution over a 1 x len strip: M = len, K = cin, N = cout.
OneLayer Strip(int64_t cin, int64_t cout, int64_t len) {
  OneLayer o;
  o.layer.id = "strip";
  o.layer.kind = LayerKind::kConvolution;
  o.layer.width = cout;
  o.in.dims = {cin, 1, len};
  o.out.dims = {cout, 1, len};
  return o;
}

TEST(AdderTree, StagesAreCeilLog2) {
  EXPECT_EQ(AdderTreeStages(1), 0);
  EXPECT_EQ(AdderTreeStages(2), 1);
  EXPECT_EQ(AdderTreeStages(32), 5);
  EXPECT_EQ(AdderTreeStages(33), 6);
  for (int64_t cols : {1, 2, 3, 7, 8, 31, 32, 33, 64}) {
    std::vector<int64_t> v(static_cast<size_t>(cols));
    for (int64_t i = 0; i < cols; ++i) v[static_cast<size_t>(i)] = i + 1;
    int64_t sum = 0;
    EXPECT_EQ(TreeLevels(v, &sum), AdderTreeStages(cols)) << cols;
    EXPECT_EQ(sum, cols * (cols + 1) / 2);
  }
}

TEST(LayerLatency, SingleResidentBlockMatchesSteppedReference) {
  const AccelConfig cfg = FpgaZ7020();
  const OneLayer s = Strip(32, 64, 1000);
  const LayerTiming t = LayerLatency(s.layer, s.in, s.out, cfg, 32);
  EXPECT_TRUE(t.resident);
  EXPECT_EQ(t.compute_cycles, 1005);
  EXPECT_EQ(t.compute_cycles, SteppedBlockCycles(1000, cfg.adder_tree_stages, 0));
}

TEST(LayerLatency, MultiBlockMatchesSteppedReference) {
  AccelConfig cfg = FpgaZ7020();
  cfg.mem_bandwidth_bytes_s = 1e15;  // keep it compute-bound
  cfg.max_reuse_ops_per_byte = 1e9;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int64_t cin = std::uniform_int_distribution<int64_t>(1, 300)(rng);
    const int64_t cout = std::uniform_int_distribution<int64_t>(1, 300)(rng);
    const int64_t len = std::uniform_int_distribution<int64_t>(1, 200)(rng);
    const OneLayer s = Strip(cin, cout, len);
    const LayerTiming t = LayerLatency(s.layer, s.in, s.out, cfg, 32);
    const int64_t blocks = ((cin + 31) / 32) * ((cout + 63) / 64);
    const int64_t fill = blocks <= cfg.stationary_buffer_depth ? 0 : cfg.array_rows;
    int64_t stepped = 0;
    for (int64_t b = 0; b < blocks; ++b) {
      stepped += SteppedBlockCycles(len, cfg.adder_tree_stages, fill);
    }
    EXPECT_EQ(t.compute_cycles, stepped) << cin << "x" << cout << "x" << len;
    EXPECT_DOUBLE_EQ(t.latency_s, t.compute_s);
  }
}

TEST(LayerLatency, MemoryStarvedIsBytesOverBandwidth) {
  AccelConfig cfg = FpgaZ7020();
  cfg.mem_bandwidth_bytes_s = 1.0;
  cfg.max_reuse_ops_per_byte = 1e12;
  const OneLayer s = Strip(64, 128, 50);
  const LayerTiming t = LayerLatency(s.layer, s.in, s.out, cfg, 32);
  EXPECT_DOUBLE_EQ(t.latency_s, static_cast<double>(t.bytes));
  // stream re-read per output-column block, weights and outputs once
  EXPECT_EQ(t.bytes, (50 * 64 * 2 + 64 * 128 + 50 * 128) * 4);
}

TEST(Tiling, BlockCounts) {
  const OneLayer s = Strip(100, 130, 7);
  const BlockSchedule b = TileLayer(s.layer, s.in, s.out);
  EXPECT_FALSE(b.passthrough);
  EXPECT_EQ(b.stationary_blocks(), 4 * 3);
  EXPECT_EQ(b.streaming_blocks(), 4);
  EXPECT_EQ(b.ops(), 2 * 7 * 100 * 130);
  EXPECT_EQ(b.blocks[9].rows, 100 - 3 * 32);  // last reduction block is partial
  EXPECT_EQ(b.blocks[2].cols, 130 - 2 * 64);
  const LayerTiming from_schedule = LayerLatency(b, FpgaZ7020(), 32);
  const LayerTiming direct = LayerLatency(s.layer, s.in, s.out, FpgaZ7020(), 32);
  EXPECT_EQ(from_schedule.compute_cycles, direct.compute_cycles);
  EXPECT_DOUBLE_EQ(from_schedule.latency_s, direct.latency_s);
}

TEST(Peak, FpgaPreset) {
  EXPECT_DOUBLE_EQ(PeakThroughput(FpgaZ7020()), 217.6e9);
  AccelConfig fast = Asic7nm();
  EXPECT_DOUBLE_EQ(PeakThroughput(fast), 217.6e9);  // bandwidth-bound too
  fast.mem_bandwidth_bytes_s = 1e12;
  EXPECT_DOUBLE_EQ(PeakThroughput(fast), 2.0 * 32 * 64 * 800e6);
}

TEST(Peak, NoLayerExceedsIt) {
  const AccelConfig cfg = FpgaZ7020();
  for (const char* name : {"alexnet_v2", "vgg16", "resnet50", "mobilenet_v1"}) {
    for (const LayerTiming& t : ModelLatency(Bundled(name), cfg).layers) {
      EXPECT_LE(t.throughput_ops_s(), PeakThroughput(cfg) * (1 + 1e-12)) << name << t.layer_id;
    }
  }
}

TEST(QuantPrune, HalvesBytesAndShrinksReduction) {
  const ModelGraph g = Bundled("vgg16");
  QuantPruneSpec q;
  q.quant_bits = 16;
  q.prune_fraction = 0.0;
  const ModelGraph gq = ApplyQuantPrune(g, q);
  EXPECT_EQ(gq.element_bits, 16);
  const double base = ModelLatency(g, FpgaZ7020()).latency_s;
  EXPECT_GT(base / ModelLatency(gq, FpgaZ7020()).latency_s, 1.5);
  q.quant_bits = 32;
  q.prune_fraction = 0.45;
  const ModelGraph gp = ApplyQuantPrune(g, q);
  for (const LayerSpec& l : gp.layers) {
    if (l.kind == LayerKind::kConvolution) EXPECT_DOUBLE_EQ(l.keep_fraction, 0.55);
    if (l.kind == LayerKind::kClassifierFc) EXPECT_DOUBLE_EQ(l.keep_fraction, 1.0);
  }
  q.prune_fraction = 1.0;
  EXPECT_THROW(ApplyQuantPrune(g, q), ValidationError);
  q.prune_fraction = 0.1;
  q.quant_bits = 12;
  EXPECT_THROW(ApplyQuantPrune(g, q), ValidationError);
}

TEST(Config, Validation) {
  AccelConfig c = FpgaZ7020();
  EXPECT_NO_THROW(c.Validate());
  c.adder_tree_stages = 4;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = FpgaZ7020();
  c.clock_hz = 0;
  EXPECT_THROW(c.Validate(), ValidationError);
}

TEST(ModelLatency, SwitchOverheadPerWeightedLayer) {
  AccelConfig cfg = FpgaZ7020();
  const ModelGraph g = Bundled("lenet");
  const double base = ModelLatency(g, cfg).latency_s;
  cfg.switch_overhead_s = 1e-3;
  int weighted = 0;
  for (const LayerSpec& l : g.layers) weighted += IsWeighted(l.kind) ? 1 : 0;
  EXPECT_NEAR(ModelLatency(g, cfg).latency_s - base, weighted * 1e-3, 1e-12);
}

}  // namespace
}  // namespace lcp::accel
