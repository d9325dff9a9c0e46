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

// Invariants of the splitter and the analytics over seeded random models.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lcp/analytics.h"
#include "lcp/model_io.h"
#include "lcp/splitter.h"
#include "testing/count_oracle.h"
#include "testing/paths.h"
#include "testing/random_models.h"

namespace lcp {
namespace {

SplitModel SplitPasses(const ModelGraph& g, int passes, StemMode stem) {
  SplitConfig cfg;
  cfg.device = UnboundedDevice();
  cfg.forced_passes = passes;
  cfg.stem = stem;
  return Split(g, cfg);
}

constexpr int kModels = 240;

TEST(Property, BranchIndependence) {
  std::mt19937_64 rng(20240501);
  for (int i = 0; i < kModels; ++i) {
    const ModelGraph g = testing::RandomModel(rng);
    const int passes = 1 + i % 3;
    const StemMode stem = i % 4 == 3 ? StemMode::kShared : StemMode::kReplicated;
    const SplitModel sm = SplitPasses(g, passes, stem);
    SCOPED_TRACE("model " + std::to_string(i));
    EXPECT_EQ(sm.split_count, 1 << passes);
    EXPECT_EQ(CountBranchComponents(sm.graph), sm.split_count);
    EXPECT_EQ(RemoveNonBranchConnections(sm.graph), sm.graph);
    EXPECT_EQ(Fatten(sm, 0.0), sm);
    const SplitModel fat = Fatten(sm, 0.25);
    EXPECT_EQ(CountBranchComponents(fat.graph), fat.split_count);
    EXPECT_NO_THROW(Validate(fat.graph));
    EXPECT_EQ(ParseSplitModel(SerializeModel(sm)), sm);
  }
}

TEST(Property, CountsMatchOracle) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < kModels; ++i) {
    const ModelGraph g = testing::RandomModel(rng);
    const SplitModel sm = SplitPasses(g, 1 + i % 3, StemMode::kReplicated);
    for (const std::string& doc : {SerializeModel(g), SerializeModel(sm)}) {
      const testing::OracleCounts o = testing::CountByEnumeration(doc);
      const FootprintReport f = TotalFootprint(ParseModel(doc));
      EXPECT_EQ(f.total_params, o.params) << i;
      EXPECT_EQ(f.total_macs, o.macs) << i;
    }
  }
}

TEST(Property, CommunicationShape) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < kModels; ++i) {
    const ModelGraph g = testing::RandomModel(rng);
    const int passes = 1 + i % 3;
    const SplitModel sm = SplitPasses(g, passes, StemMode::kReplicated);
    const int b = sm.split_count;
    const CommReport lcp = CommunicationLoad(sm, {StrategyKind::kLcp, b});
    EXPECT_EQ(lcp.connection_pairs, 2 * b - 1) << i;
    const CommReport mp = CommunicationLoad(g, {StrategyKind::kModelParallelOutputSplit, b});
    EXPECT_GT(mp.connection_pairs, lcp.connection_pairs) << i;
    const CommReport dp = CommunicationLoad(g, {StrategyKind::kDataParallel, b});
    EXPECT_EQ(dp.connection_pairs, 1) << i;
  }
}

bool ReadsInput(const ModelGraph& g, const std::string& id) {
  const LayerSpec& l = *g.Find(id);
  return std::find(l.predecessors.begin(), l.predecessors.end(), g.input().id) !=
         l.predecessors.end();
}

// MACs of the layers reading the input, attributed back to the original.
int64_t InputReaderMacs(const ModelGraph& g, const testing::OracleCounts& o) {
  int64_t macs = 0;
  for (const auto& [id, m] : o.layer_macs) {
    if (ReadsInput(g, id)) macs += m;
  }
  return macs;
}

// Split-k totals scale by about 1/k. `whole_macs` demands it of the total
// MACs; otherwise only the layers past the input readers must scale, and the
// total must stay above the input readers' unsplittable cost.
void ExpectSplitRatio(const ModelGraph& g, const std::string& label, bool whole_macs) {
  const testing::OracleCounts base = testing::CountByEnumeration(SerializeModel(g));
  const int64_t base_first = InputReaderMacs(g, base);
  for (int passes = 1; passes <= 3; ++passes) {
    const int k = 1 << passes;
    const SplitModel sm = SplitPasses(g, passes, StemMode::kReplicated);
    const testing::OracleCounts o = testing::CountByEnumeration(SerializeModel(sm));
    const double rp = static_cast<double>(o.params) / base.params;
    EXPECT_GE(rp, 0.7 / k) << label << " k=" << k;
    EXPECT_LE(rp, 1.4 / k) << label << " k=" << k;
    double rm = static_cast<double>(o.macs) / base.macs;
    if (!whole_macs) {
      const int64_t first = InputReaderMacs(sm.graph, o);
      EXPECT_GE(first, base_first) << label << " k=" << k;
      EXPECT_GE(rm, static_cast<double>(base_first) / base.macs) << label << " k=" << k;
      rm = static_cast<double>(o.macs - first) / (base.macs - base_first);
    }
    EXPECT_GE(rm, 0.7 / k) << label << " k=" << k;
    EXPECT_LE(rm, 1.4 / k) << label << " k=" << k;
  }
}

TEST(Property, SplitRatio) {
  ExpectSplitRatio(testing::Bundled("lenet"), "lenet", false);
  ExpectSplitRatio(testing::Bundled("vgg_s"), "vgg_s", false);
  ExpectSplitRatio(testing::Bundled("vgg16"), "vgg16", true);
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 50; ++i) {
    ExpectSplitRatio(testing::RandomInteriorDominatedModel(rng), "random " + std::to_string(i),
                     true);
  }
}

}  // namespace
}  // namespace lcp
