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

#include "lcp/analytics.h"

#include <gtest/gtest.h>

#include <numeric>

#include "lcp/error.h"
#include "lcp/splitter.h"
#include "testing/paths.h"

namespace lcp {
namespace {

using testing::Bundled;

int64_t Bytes(const TensorShape& s) { return s.elements() * 4; }

struct Expected {
  int64_t bytes = 0;
  int64_t pairs = 0;
};

// Message-enumeration oracle for chain models (every layer has one
// predecessor): each weighted layer after the first all-gathers its input.
Expected OutputSplitOracle(const ModelGraph& g, int n) {
  const ShapeMap shapes = InferShapes(g);
  Expected e;
  const int64_t in = Bytes(shapes.at(g.input().id));
  e.bytes += n * in;  // every device needs the whole frame
  e.pairs += n;
  bool first = true;
  for (size_t i : TopologicalOrder(g)) {
    const LayerSpec& l = g.layers[i];
    if (!IsWeighted(l.kind) || l.kind == LayerKind::kNormalization) continue;
    if (first) {
      first = false;
      continue;
    }
    // Each device sends its slice to the n - 1 others.
    e.bytes += Bytes(shapes.at(l.predecessors.front())) * (n - 1);
    e.pairs += static_cast<int64_t>(n) * (n - 1);
  }
  const TensorShape out = shapes.at(Sink(g).id);
  const int64_t slice0 = (out.elements() + n - 1) / n * 4;
  e.bytes += Bytes(out) - slice0;  // final slices to device 0
  e.pairs += n - 1;
  e.bytes += Bytes(out);  // result back to the source
  return e;
}

Expected LcpOracle(const SplitModel& sm, bool colocated) {
  const ShapeMap shapes = InferShapes(sm.graph);
  Expected e;
  const int b = sm.split_count;
  const int receivers = colocated ? b - 1 : b;
  e.bytes += receivers * Bytes(shapes.at(sm.graph.input().id));
  e.pairs += receivers;
  for (int i = 1; i < b; ++i) e.bytes += Bytes(shapes.at(sm.PreFinal(i).id));
  e.pairs += b - 1;
  if (!colocated) e.bytes += Bytes(shapes.at(sm.Classifier().id));
  return e;
}

SplitModel Branches(const ModelGraph& g, int passes) {
  SplitConfig cfg;
  cfg.device = UnboundedDevice();
  cfg.forced_passes = passes;
  return Split(g, cfg);
}

class ChainModels : public ::testing::TestWithParam<const char*> {};

TEST_P(ChainModels, OutputSplitMatchesOracle) {
  const ModelGraph g = Bundled(GetParam());
  for (int n : {2, 3, 4, 8}) {
    const CommReport r =
        CommunicationLoad(g, {StrategyKind::kModelParallelOutputSplit, n});
    const Expected e = OutputSplitOracle(g, n);
    EXPECT_EQ(r.bytes_per_inference, e.bytes) << n;
    EXPECT_EQ(r.connection_pairs, e.pairs) << n;
  }
}

TEST_P(ChainModels, LcpMatchesOracle) {
  const ModelGraph g = Bundled(GetParam());
  for (int passes : {1, 2, 3}) {
    const SplitModel sm = Branches(g, passes);
    const Strategy s{StrategyKind::kLcp, sm.split_count};
    const CommReport r = CommunicationLoad(sm, s);
    const Expected e = LcpOracle(sm, false);
    EXPECT_EQ(r.bytes_per_inference, e.bytes);
    EXPECT_EQ(r.connection_pairs, e.pairs);
    EXPECT_EQ(r.connection_pairs, 2 * sm.split_count - 1);

    AnalyticsOptions colo;
    colo.source = SourceMode::kColocated;
    const CommReport rc = CommunicationLoad(sm, s, colo);
    const Expected ec = LcpOracle(sm, true);
    EXPECT_EQ(rc.bytes_per_inference, ec.bytes);
    EXPECT_EQ(rc.connection_pairs, ec.pairs);
  }
}

INSTANTIATE_TEST_SUITE_P(Models, ChainModels,
                         ::testing::Values("toy_fc", "lenet", "alexnet_v2", "vgg16", "vgg_s"));

TEST(Communication, DataParallel) {
  const ModelGraph g = Bundled("alexnet_v2");
  const CommReport r = CommunicationLoad(g, {StrategyKind::kDataParallel, 4});
  EXPECT_EQ(r.bytes_per_inference, 3 * 224 * 224 * 4 + 1000 * 4);
  EXPECT_EQ(r.connection_pairs, 1);
  EXPECT_EQ(r.inter_device_bytes, 0);
}

TEST(Communication, InputSplitReducesToOneNode) {
  const ModelGraph g = Bundled("toy_fc");
  const CommReport r = CommunicationLoad(g, {StrategyKind::kModelParallelInputSplit, 2});
  // fc1 and the classifier each reduce one partial sum 1 -> 0.
  int64_t reduce_pairs = 0;
  for (const BoundaryComm& b : r.per_boundary) {
    for (const Message& m : b.messages) {
      if (m.from == 1 && m.to == 0) ++reduce_pairs;
    }
  }
  EXPECT_GE(reduce_pairs, 2);
  EXPECT_GT(r.inter_device_bytes, 0);
}

TEST(Communication, InputBitsShrinkBroadcast) {
  const SplitModel sm = Branches(Bundled("alexnet_v2"), 2);
  AnalyticsOptions opt;
  opt.input_bits = 8;
  const CommReport r8 = CommunicationLoad(sm, {StrategyKind::kLcp, 4}, opt);
  const CommReport r32 = CommunicationLoad(sm, {StrategyKind::kLcp, 4});
  EXPECT_EQ(r32.bytes_per_inference - r8.bytes_per_inference, 4 * 3 * 224 * 224 * 3);
}

TEST(Communication, LcpFarBelowModelParallel) {
  const ModelGraph g = Bundled("vgg16");
  const CommReport mp = CommunicationLoad(g, {StrategyKind::kModelParallelOutputSplit, 8});
  const CommReport lcp = CommunicationLoad(Branches(g, 3), {StrategyKind::kLcp, 8});
  EXPECT_GE(mp.bytes_per_inference, 8 * lcp.bytes_per_inference);
  EXPECT_LE(lcp.connection_pairs, 15);
  EXPECT_GT(mp.connection_pairs, lcp.connection_pairs);
}

TEST(Footprint, ToyModelParallelHalves) {
  const ModelGraph g = Bundled("toy_fc");
  const std::vector<FootprintReport> f =
      PerDeviceFootprint(g, {StrategyKind::kModelParallelOutputSplit, 2});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].total_params, 86);
  EXPECT_EQ(f[1].total_params, 86);
}

TEST(Footprint, SlicesSumToWhole) {
  for (const char* name : {"lenet", "alexnet_v2", "resnet18", "mobilenet_v1"}) {
    const ModelGraph g = Bundled(name);
    const FootprintReport whole = TotalFootprint(g);
    for (StrategyKind k :
         {StrategyKind::kModelParallelOutputSplit, StrategyKind::kModelParallelInputSplit}) {
      for (int n : {2, 3, 8}) {
        const std::vector<FootprintReport> f = PerDeviceFootprint(g, {k, n});
        int64_t params = 0, macs = 0;
        for (const FootprintReport& d : f) {
          params += d.total_params;
          macs += d.total_macs;
        }
        EXPECT_EQ(params, whole.total_params) << name << " " << StrategyName(k) << " " << n;
        EXPECT_EQ(macs, whole.total_macs) << name << " " << StrategyName(k) << " " << n;
      }
    }
    const std::vector<FootprintReport> dp =
        PerDeviceFootprint(g, {StrategyKind::kDataParallel, 3});
    for (const FootprintReport& d : dp) EXPECT_EQ(d.total_params, whole.total_params);
  }
}

TEST(Footprint, LcpBranchesOnTheirDevices) {
  const SplitModel sm = Branches(Bundled("alexnet_v2"), 2);
  const std::vector<FootprintReport> f = PerDeviceFootprint(sm, {StrategyKind::kLcp, 4});
  ASSERT_EQ(f.size(), 4u);
  int64_t params = 0;
  for (const FootprintReport& d : f) params += d.total_params;
  EXPECT_EQ(params, TotalFootprint(sm.graph).total_params);
  EXPECT_GT(f[0].total_params, f[1].total_params);  // device 0 holds the classifier
  EXPECT_EQ(f[1].total_params, f[3].total_params);
  EXPECT_THROW(PerDeviceFootprint(sm, {StrategyKind::kLcp, 2}), ValidationError);
}

TEST(Partition, CeilingFirst) {
  EXPECT_EQ(PartitionUnits(10, 4), (std::vector<int64_t>{3, 3, 2, 2}));
  EXPECT_EQ(PartitionUnits(2, 4), (std::vector<int64_t>{1, 1, 0, 0}));
  const std::vector<int64_t> p = PartitionUnits(1001, 8);
  EXPECT_EQ(std::accumulate(p.begin(), p.end(), int64_t{0}), 1001);
}

TEST(Compare, RowsPerStrategy) {
  const ModelGraph g = Bundled("alexnet_v2");
  const std::vector<StrategyRow> rows =
      CompareStrategies(g, {{StrategyKind::kDataParallel, 4},
                            {StrategyKind::kModelParallelOutputSplit, 4},
                            {StrategyKind::kLcp, 4},
                            {StrategyKind::kLcp, 3}});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].strategy, "data_parallel");
  EXPECT_EQ(rows[0].params, TotalFootprint(g).total_params);
  EXPECT_LT(rows[2].mem_bytes, rows[1].mem_bytes);
  EXPECT_LT(rows[2].comm_bytes, rows[1].comm_bytes);
  EXPECT_EQ(rows[3].comm_pairs, 5);
  EXPECT_EQ(LcpSplitFor(g, 8, StemMode::kReplicated).split_count, 8);
  EXPECT_EQ(LcpSplitFor(g, 6, StemMode::kReplicated).split_count, 6);
  EXPECT_EQ(LcpSplitFor(g, 1, StemMode::kReplicated).split_count, 1);
}

TEST(Strategies, Names) {
  for (StrategyKind k : {StrategyKind::kDataParallel, StrategyKind::kModelParallelOutputSplit,
                         StrategyKind::kModelParallelInputSplit, StrategyKind::kLcp}) {
    EXPECT_EQ(StrategyFromName(StrategyName(k)), k);
  }
  EXPECT_EQ(StrategyFromName("model"), StrategyKind::kModelParallelOutputSplit);
  EXPECT_FALSE(StrategyFromName("pipeline"));
}

}  // namespace
}  // namespace lcp
