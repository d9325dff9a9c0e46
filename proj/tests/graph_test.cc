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

#include "lcp/graph.h"

#include <gtest/gtest.h>

#include <map>

#include "lcp/error.h"
#include "lcp/model_io.h"
#include "testing/count_oracle.h"
#include "testing/paths.h"

namespace lcp {
namespace {

using testing::Bundled;
using testing::CountByEnumeration;

class BundledCounts : public ::testing::TestWithParam<const char*> {};

TEST_P(BundledCounts, MatchesEnumerationOracle) {
  const ModelGraph g = Bundled(GetParam());
  const FootprintReport f = TotalFootprint(g);
  const testing::OracleCounts o = CountByEnumeration(SerializeModel(g));
  EXPECT_EQ(f.total_params, o.params);
  EXPECT_EQ(f.total_macs, o.macs);
  for (const LayerFootprint& lf : f.per_layer) {
    EXPECT_EQ(lf.params, o.layer_params.at(lf.id)) << lf.id;
    EXPECT_EQ(lf.macs, o.layer_macs.at(lf.id)) << lf.id;
  }
}

INSTANTIATE_TEST_SUITE_P(Models, BundledCounts,
                         ::testing::Values("toy_fc", "lenet", "lenet_fc", "cifarnet", "vgg_s",
                                           "vgg16", "alexnet_v2", "resnet18", "resnet50",
                                           "mobilenet_v1"));

// Published parameter counts of the reference architectures.
TEST(Footprint, ReferenceParamCounts) {
  EXPECT_EQ(TotalFootprint(Bundled("vgg16")).total_params, 138357544);
  EXPECT_EQ(TotalFootprint(Bundled("resnet18")).total_params, 11689512);
  EXPECT_EQ(TotalFootprint(Bundled("resnet50")).total_params, 25557032);
  EXPECT_EQ(TotalFootprint(Bundled("lenet")).total_params, 61706);
  EXPECT_EQ(TotalFootprint(Bundled("toy_fc")).total_params, 172);
}

TEST(Footprint, ToyByHand) {
  // 16 -> fc 8 -> classifier 4, biases included.
  const FootprintReport f = TotalFootprint(Bundled("toy_fc"));
  EXPECT_EQ(f.total_params, 16 * 8 + 8 + 8 * 4 + 4);
  EXPECT_EQ(f.total_macs, 16 * 8 + 8 * 4);
  EXPECT_EQ(f.model_bytes, f.total_params * 4);
  EXPECT_EQ(TotalFootprint(Bundled("toy_fc"), 8).model_bytes, f.total_params);
}

TEST(Shapes, Vgg16) {
  const ModelGraph g = Bundled("vgg16");
  const ShapeMap s = InferShapes(g);
  EXPECT_EQ(s.at("pool5").dims, (std::vector<int64_t>{512, 7, 7}));
  EXPECT_EQ(s.at(Sink(g).id).dims, (std::vector<int64_t>{1000}));
}

TEST(Shapes, ConvArithmetic) {
  LayerSpec l;
  l.id = "c";
  l.kind = LayerKind::kConvolution;
  l.width = 8;
  l.kernel = {3, 3};
  l.stride = {2, 2};
  l.padding = {1, 1};
  ModelGraph g;
  g.name = "t";
  g.input_shape = {3, 15, 15};
  LayerSpec in;
  in.id = "input";
  in.kind = LayerKind::kInput;
  l.predecessors = {"input"};
  LayerSpec cls;
  cls.id = "cls";
  cls.kind = LayerKind::kClassifierFc;
  cls.width = 2;
  cls.predecessors = {"c"};
  g.layers = {in, l, cls};
  const ShapeMap s = InferShapes(g);
  EXPECT_EQ(s.at("c").dims, (std::vector<int64_t>{8, 8, 8}));  // floor((15+2-3)/2)+1
  EXPECT_EQ(LayerParams(l, s.at("input")), 3 * 9 * 8 + 8);
  EXPECT_EQ(LayerMacs(l, s.at("input"), s.at("c")), 8 * 8 * 8 * 27);
}

TEST(Signature, Bundled) {
  EXPECT_EQ(LayerSignature(Bundled("lenet")), "2fc-3c-2p");
  EXPECT_EQ(LayerSignature(Bundled("alexnet_v2")), "3fc-5c-3p-2d");
  EXPECT_EQ(LayerSignature(Bundled("toy_fc")), "2fc");
}

TEST(Topology, OrderRespectsPredecessors) {
  const ModelGraph g = Bundled("resnet18");
  std::map<std::string, size_t> pos;
  const std::vector<size_t> order = TopologicalOrder(g);
  for (size_t i = 0; i < order.size(); ++i) pos[g.layers[order[i]].id] = i;
  for (const LayerSpec& l : g.layers) {
    for (const std::string& p : l.predecessors) EXPECT_LT(pos.at(p), pos.at(l.id));
  }
  EXPECT_EQ(order.size(), g.layers.size());
}

ModelGraph Toy() { return Bundled("toy_fc"); }

TEST(Validate, RejectsBrokenGraphs) {
  {
    ModelGraph g = Toy();
    g.layers[1].predecessors = {"nope"};
    EXPECT_THROW(Validate(g), ValidationError);
  }
  {
    ModelGraph g = Toy();
    g.layers[1].id = g.layers[2].id;
    EXPECT_THROW(Validate(g), ValidationError);
  }
  {
    ModelGraph g = Toy();
    g.layers[1].predecessors = {g.layers[2].id};  // cycle
    EXPECT_THROW(Validate(g), ValidationError);
  }
  {
    ModelGraph g = Toy();
    g.layers[1].width = 0;
    EXPECT_THROW(Validate(g), ValidationError);
  }
  {
    ModelGraph g = Toy();
    g.element_bits = 12;
    EXPECT_THROW(Validate(g), ValidationError);
  }
}

TEST(Validate, GroupsMustDivideChannels) {
  ModelGraph g = Bundled("lenet");
  for (LayerSpec& l : g.layers) {
    if (l.kind == LayerKind::kConvolution) {
      l.groups = 7;
      break;
    }
  }
  EXPECT_THROW(InferShapes(g), ValidationError);
}

TEST(LayerKinds, Names) {
  for (LayerKind k : {LayerKind::kInput, LayerKind::kFullyConnected, LayerKind::kConvolution,
                      LayerKind::kPooling, LayerKind::kNormalization, LayerKind::kDropout,
                      LayerKind::kActivation, LayerKind::kAdd, LayerKind::kConcat,
                      LayerKind::kClassifierFc}) {
    EXPECT_EQ(LayerKindFromName(LayerKindName(k)), k);
  }
  EXPECT_FALSE(LayerKindFromName("lstm"));
}

}  // namespace
}  // namespace lcp
