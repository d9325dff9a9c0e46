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

#include "lcp/simulator.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lcp/error.h"
#include "lcp/presets.h"
#include "lcp/splitter.h"
#include "testing/paths.h"
#include "testing/random_models.h"
#include "testing/sim_oracles.h"

namespace lcp {
namespace {

using testing::Bundled;

using testing::Branches;
using testing::LcpCriticalPath;
using testing::MacSeconds;
using testing::Net;
using testing::Plain;

TEST(ClosedForm, LcpMatchesCriticalPath) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ModelGraph g = testing::RandomModel(rng);
    const int passes = 1 + static_cast<int>(u(rng) * 3);
    SplitModel sm;
    try {
      sm = Branches(g, passes);
    } catch (const InfeasibleError&) {
      sm = Branches(g, 1);
    }
    std::vector<DeviceSpec> devices;
    for (int i = 0; i < sm.split_count; ++i) devices.push_back(Plain(1 + 50 * u(rng), 0.2 + 0.8 * u(rng)));
    const NetworkSpec net = Net(1e6 + 1e8 * u(rng), 0.02 * u(rng));
    const Strategy s{StrategyKind::kLcp, sm.split_count};
    SimOptions opt;
    opt.n_inferences = 3;
    const SimResult r = Simulate(sm, s, DefaultPlacement(sm, s, sm.split_count), devices, net, opt);
    const double expected = LcpCriticalPath(sm, devices, net);
    for (double lat : r.latencies_s) {
      EXPECT_NEAR(lat, expected, 1e-9 * std::max(1.0, expected)) << "trial " << trial;
    }
  }
}

TEST(ClosedForm, SingleDeviceIsInputPlusCompute) {
  const ModelGraph g = Bundled("alexnet_v2");
  const DeviceSpec d = Plain(10);
  const NetworkSpec net = Net(62.24e6, 0.00883);
  const Strategy s{StrategyKind::kDataParallel, 1};
  const SimResult r = Simulate(g, s, DefaultPlacement(g, s, 1), {d}, net, {});
  std::vector<const LayerSpec*> all;
  for (const LayerSpec& l : g.layers) all.push_back(&l);
  const double expected =
      net.TransmitSeconds(3 * 224 * 224 * 4) + 0.00883 + MacSeconds(g, all, d);
  EXPECT_NEAR(r.mean_s, expected, 1e-12);
}

class Seeded : public ::testing::Test {
 protected:
  SimResult Run(uint64_t seed, bool trace) const {
    const ModelGraph g = Bundled("alexnet_v2");
    NetworkSpec net = Net(62.24e6, 0.00883);
    net.jitter.kind = JitterSpec::Kind::kLognormal;
    net.jitter.sigma = 0.8;
    net.jitter.scale_s = 0.003;
    const Strategy s{StrategyKind::kModelParallelOutputSplit, 4};
    SimOptions opt;
    opt.n_inferences = 50;
    opt.seed = seed;
    opt.record_trace = trace;
    return Simulate(g, s, DefaultPlacement(g, s, 4), std::vector<DeviceSpec>(4, Plain(5)), net,
                    opt);
  }
};

TEST_F(Seeded, SameSeedIsBitIdentical) {
  const SimResult a = Run(7, true);
  const SimResult b = Run(7, true);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(a.latencies_s, b.latencies_s);
  EXPECT_EQ(a.trace->size(), b.trace->size());
}

TEST_F(Seeded, DifferentSeedsDiffer) {
  EXPECT_NE(Run(7, false).latencies_s, Run(8, false).latencies_s);
}

TEST_F(Seeded, JitterOnlyAddsLatency) {
  const SimResult r = Run(3, false);
  const ModelGraph g = Bundled("alexnet_v2");
  const Strategy s{StrategyKind::kModelParallelOutputSplit, 4};
  const SimResult calm = Simulate(g, s, DefaultPlacement(g, s, 4),
                                  std::vector<DeviceSpec>(4, Plain(5)),
                                  Net(62.24e6, 0.00883), {});
  for (double lat : r.latencies_s) EXPECT_GT(lat, calm.mean_s);
}

TEST(Stats, QuantilesInterpolate) {
  SimResult r;
  r.latencies_s = {4, 1, 3, 2};
  r.RecomputeStats();
  EXPECT_DOUBLE_EQ(r.mean_s, 2.5);
  EXPECT_DOUBLE_EQ(r.p50_s, 2.5);
  EXPECT_DOUBLE_EQ(r.p95_s, 3.85);
  EXPECT_DOUBLE_EQ(r.max_s, 4);
}

TEST(Histogram, CountsEveryInference) {
  SimResult r;
  r.latencies_s = {0.101, 0.105, 0.119, 0.2};
  r.RecomputeStats();
  const Histogram h = LatencyHistogram(r, 0.01);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), int64_t{0}), 4);
  EXPECT_DOUBLE_EQ(h.bucket_width_s, 0.01);
  EXPECT_LE(h.origin_s, 0.101);
  EXPECT_THROW(LatencyHistogram(r, 0.0), ValidationError);
}

TEST(Pipelining, RaisesThroughput) {
  const SplitModel sm = Branches(Bundled("alexnet_v2"), 2);
  const Strategy s{StrategyKind::kLcp, 4};
  const std::vector<DeviceSpec> devices(4, Plain(2));
  SimOptions opt;
  opt.n_inferences = 20;
  const SimResult serial =
      Simulate(sm, s, DefaultPlacement(sm, s, 4), devices, Net(62.24e6, 0.00883), opt);
  opt.pipelined = true;
  const SimResult piped =
      Simulate(sm, s, DefaultPlacement(sm, s, 4), devices, Net(62.24e6, 0.00883), opt);
  EXPECT_GT(piped.throughput_ips, serial.throughput_ips);
  EXPECT_GE(piped.mean_s, serial.mean_s);
}

TEST(Paging, RpiPagesTheWholeModelButNotABranch) {
  const DeviceSpec rpi = LoadDevice("rpi3");
  const ModelGraph g = Bundled("alexnet_v2");
  const ShapeMap shapes = InferShapes(g);
  std::vector<WorkItem> all;
  for (const LayerSpec& l : g.layers) all.push_back({&l, 1.0});
  EXPECT_TRUE(Oversubscribed(g, shapes, all, rpi));
  const SplitModel sm = Branches(g, 2);
  const ShapeMap sshapes = InferShapes(sm.graph);
  std::vector<WorkItem> branch;
  for (const LayerSpec* l : sm.BranchLayers(1)) branch.push_back({l, 1.0});
  EXPECT_FALSE(Oversubscribed(sm.graph, sshapes, branch, rpi));
}

TEST(Calibration, ReachesTarget) {
  const ModelGraph g = Bundled("alexnet_v2");
  const ShapeMap shapes = InferShapes(g);
  std::vector<WorkItem> all;
  for (const LayerSpec& l : g.layers) all.push_back({&l, 1.0});
  for (const char* preset : {"rpi3", "rpi3-resident"}) {
    DeviceSpec d = LoadDevice(preset);
    const double eff = CalibrateEfficiency(g, d, 2.8);
    d.efficiency = eff;
    EXPECT_NEAR(ComputeSeconds(g, shapes, all, d, Oversubscribed(g, shapes, all, d)), 2.8, 1e-9);
    // The shipped preset carries the calibrated value.
    EXPECT_NEAR(LoadDevice(preset).efficiency, eff, 1e-6) << preset;
  }
  DeviceSpec slow = LoadDevice("rpi3");
  EXPECT_THROW(CalibrateEfficiency(g, slow, 0.5), InfeasibleError);  // paging alone is longer
  EXPECT_THROW(CalibrateEfficiency(g, LoadDevice("fpga-z7020"), 1.0), ValidationError);
}

TEST(Energy, LcpBelowModelParallel) {
  const ModelGraph g = Bundled("alexnet_v2");
  const SplitModel sm = Branches(g, 2);
  const std::vector<DeviceSpec> devices(4, LoadDevice("rpi3"));
  const NetworkSpec net = LoadNetwork("wifi");
  SimOptions opt;
  opt.n_inferences = 5;
  opt.record_trace = true;
  const Strategy lcp{StrategyKind::kLcp, 4};
  const Strategy mp{StrategyKind::kModelParallelOutputSplit, 4};
  const SimResult a = Simulate(sm, lcp, DefaultPlacement(sm, lcp, 4), devices, net, opt);
  const SimResult b = Simulate(g, mp, DefaultPlacement(g, mp, 4), devices, net, opt);
  const EnergyReport ea = Energy(a, devices);
  const EnergyReport eb = Energy(b, devices);
  EXPECT_LT(ea.total_j, eb.total_j);
  EXPECT_NEAR(ea.total_j, a.energy_j_total, 1e-9 * ea.total_j);
  for (size_t i = 0; i < devices.size(); ++i) {
    EXPECT_GE(ea.busy_s[i], 0.0);
    EXPECT_GE(ea.idle_s[i], 0.0);
  }
  SimResult no_trace = a;
  no_trace.trace.reset();
  EXPECT_THROW(Energy(no_trace, devices), ValidationError);
}

TEST(Speedup, Ratio) {
  SimResult base, fast;
  base.mean_s = 2.8;
  fast.mean_s = 0.115;
  EXPECT_NEAR(Speedup(fast, base), 24.35, 0.01);
  EXPECT_DOUBLE_EQ(Speedup(base, base), 1.0);
}

TEST(Placement, Validation) {
  const SplitModel sm = Branches(Bundled("lenet"), 2);
  const Strategy s{StrategyKind::kLcp, 4};
  EXPECT_THROW(DefaultPlacement(sm, s, 2), ValidationError);
  Placement p = DefaultPlacement(sm, s, 4);
  p.assignment[1] = 9;
  EXPECT_THROW(Simulate(sm, s, p, std::vector<DeviceSpec>(4, Plain(1)), Net(1e8, 0), {}),
               ValidationError);
}

}  // namespace
}  // namespace lcp
