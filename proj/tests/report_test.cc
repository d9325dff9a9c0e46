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

#include "lcp/report.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <regex>

#include "json.hpp"
#include "lcp/error.h"
#include "lcp/manifest.h"
#include "lcp/model_io.h"
#include "lcp/splitter.h"
#include "testing/paths.h"

namespace lcp {
namespace {

using nlohmann::json;
using testing::Bundled;

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(2.0), "2");
  EXPECT_EQ(FormatNumber(1e-9), "1e-09");
  for (double v : {1.0 / 3.0, 123456.789, 2.8e-3}) {
    EXPECT_EQ(std::stod(FormatNumber(v)), v);
  }
}

TEST(Csv, Compare) {
  StrategyRow r;
  r.strategy = "lcp";
  r.n = 4;
  r.params = 10;
  r.macs = 20;
  r.mem_bytes = 30;
  r.comm_bytes = 40;
  r.comm_pairs = 7;
  EXPECT_EQ(CompareCsv({r}), std::string(kCompareCsvHeader) + "\nlcp,4,0,10,20,30,40,7\n");
  const json j = json::parse(CompareJson({r}));
  EXPECT_EQ(j[0]["comm_pairs"], 7);
}

TEST(Csv, FootprintRowsPerLayer) {
  const ModelGraph g = Bundled("toy_fc");
  const std::string csv = FootprintCsv(g, TotalFootprint(g));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kFootprintCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + static_cast<long>(g.layers.size()));
  const json j = json::parse(FootprintJson(g, TotalFootprint(g)));
  EXPECT_EQ(j["footprint"]["total_params"], 172);
}

TEST(Csv, HistogramAndLatency) {
  Histogram h;
  h.bucket_width_s = 0.5;
  h.origin_s = 1.0;
  h.counts = {2, 0, 1};
  EXPECT_EQ(HistogramCsv(h),
            std::string(kHistogramCsvHeader) + "\n1,1.5,2\n1.5,2,0\n2,2.5,1\n");
  SimResult r;
  r.latencies_s = {0.25, 0.5};
  EXPECT_EQ(LatencyCsv(r), std::string(kLatencyCsvHeader) + "\n0,0.25\n1,0.5\n");
}

TEST(Json, SplitSummary) {
  SplitConfig cfg;
  cfg.device = UnboundedDevice();
  cfg.forced_passes = 2;
  const SplitModel sm = Split(Bundled("lenet"), cfg);
  const json j = json::parse(SplitSummaryJson(sm));
  EXPECT_EQ(j["key"], "LeNet-split4");
  EXPECT_EQ(j["branches"].size(), 4u);
  EXPECT_EQ(j["signature"], LayerSignature(sm.graph));
}

TEST(Json, SimResult) {
  SimResult r;
  r.latencies_s = {1, 2};
  r.RecomputeStats();
  r.seed = 42;
  const json j = json::parse(SimResultJson(r));
  EXPECT_EQ(j["seed"], 42);
  EXPECT_DOUBLE_EQ(j["mean_s"].get<double>(), 1.5);
}

TEST(Manifest, Sha256KnownVectors) {
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, RoundTripAndFileDigest) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "lcp-report-test";
  std::filesystem::create_directories(dir);
  WriteTextFile(dir / "a.txt", "abc");
  EXPECT_EQ(Sha256File(dir / "a.txt"), Sha256Hex("abc"));

  RunManifest m;
  m.command = "analyze";
  m.argv = {"analyze", "x.json"};
  m.inputs = {DigestOf(dir / "a.txt")};
  m.outputs = {{"footprint.csv", Sha256Hex("x")}};
  m.config_json = R"({"element_bits":8})";
  m.tool_version = ToolVersion();
  m.seed = 3;
  m.timestamp = UtcTimestamp();
  const RunManifest back = ParseManifest(SerializeManifest(m));
  EXPECT_EQ(back.command, m.command);
  EXPECT_EQ(back.argv, m.argv);
  EXPECT_EQ(back.inputs, m.inputs);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(json::parse(back.config_json), json::parse(m.config_json));
  EXPECT_EQ(back.seed, 3u);
  EXPECT_TRUE(std::regex_match(m.timestamp,
                               std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
  EXPECT_THROW(ParseManifest("{}"), ParseError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace lcp
