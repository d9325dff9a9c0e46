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

#include "testing/random_models.h"

#include <algorithm>
#include <string>

namespace lcp::testing {
namespace {

class Builder {
 public:
  explicit Builder(ModelGraph& g) : g_(g) {}

  std::string Add(LayerSpec l, std::vector<std::string> preds) {
    l.id = l.id.empty() ? "l" + std::to_string(next_++) : l.id;
    l.predecessors = std::move(preds);
    g_.layers.push_back(l);
    return g_.layers.back().id;
  }

  std::string Conv(const std::string& in, int64_t width, int64_t k, int64_t stride,
                   bool bias = true) {
    LayerSpec l;
    l.kind = LayerKind::kConvolution;
    l.width = width;
    l.kernel = {k, k};
    l.stride = {stride, stride};
    l.padding = {k / 2, k / 2};
    l.bias = bias;
    return Add(l, {in});
  }

  std::string Simple(LayerKind kind, const std::vector<std::string>& in) {
    LayerSpec l;
    l.kind = kind;
    if (kind == LayerKind::kActivation) l.function = "relu";
    if (kind == LayerKind::kDropout) l.dropout_rate = 0.5;
    return Add(l, in);
  }

 private:
  ModelGraph& g_;
  int next_ = 0;
};

}  // namespace

ModelGraph RandomModel(std::mt19937_64& rng, const RandomModelOptions& opt) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  ModelGraph g;
  g.name = "random";
  int64_t hw = 8 * uni(2, 5);
  g.input_shape = {coin(0.5) ? 3 : 1, hw, hw};
  Builder b(g);
  LayerSpec in;
  in.id = "input";
  in.kind = LayerKind::kInput;
  std::string cur = b.Add(in, {});

  const int64_t widths[] = {16, 24, 32, 48, 64, 96, 128};
  const int n_convs = uni(opt.min_convs, opt.max_convs);
  int64_t width = 0;
  for (int i = 0; i < n_convs; ++i) {
    width = widths[uni(0, 6)];
    const int64_t k = coin(0.7) ? 3 : (coin(0.5) ? 1 : 5);
    cur = b.Conv(cur, width, k, 1, coin(0.8));
    if (coin(0.4)) cur = b.Simple(LayerKind::kNormalization, {cur});
    cur = b.Simple(LayerKind::kActivation, {cur});
    if (opt.depthwise && coin(0.2)) {
      LayerSpec dw;
      dw.kind = LayerKind::kConvolution;
      dw.depthwise = true;
      dw.kernel = {3, 3};
      dw.padding = {1, 1};
      dw.bias = false;
      cur = b.Add(dw, {cur});
    }
    if (opt.residual && coin(0.25)) {
      std::string r = b.Conv(cur, width, 3, 1, false);
      r = b.Simple(LayerKind::kActivation, {r});
      r = b.Conv(r, width, 3, 1, false);
      cur = b.Simple(LayerKind::kAdd, {r, cur});
    } else if (opt.concat && coin(0.2)) {
      const std::string a = b.Conv(cur, widths[uni(0, 3)], 1, 1);
      const std::string c = b.Conv(cur, widths[uni(0, 3)], 3, 1);
      cur = b.Simple(LayerKind::kConcat, {a, c});
    }
    if (hw >= 8 && coin(0.5)) {
      LayerSpec p;
      p.kind = LayerKind::kPooling;
      p.kernel = {2, 2};
      p.stride = {2, 2};
      cur = b.Add(p, {cur});
      hw /= 2;
    }
  }
  if (coin(0.3)) {
    LayerSpec p;
    p.kind = LayerKind::kPooling;
    p.global_pool = true;
    p.pool_mode = PoolMode::kAvg;
    cur = b.Add(p, {cur});
  }
  const int n_fc = uni(0, 2);
  for (int i = 0; i < n_fc; ++i) {
    LayerSpec fc;
    fc.kind = LayerKind::kFullyConnected;
    fc.width = 32 * uni(1, 8);
    cur = b.Add(fc, {cur});
    cur = b.Simple(LayerKind::kActivation, {cur});
    if (coin(0.5)) cur = b.Simple(LayerKind::kDropout, {cur});
  }
  LayerSpec cls;
  cls.id = "classifier";
  cls.kind = LayerKind::kClassifierFc;
  cls.width = 10;
  b.Add(cls, {cur});
  Validate(g);
  return g;
}

double InteriorShare(const ModelGraph& g) {
  const FootprintReport f = TotalFootprint(g);
  const std::string input = g.input().id;
  const std::string sink = Sink(g).id;
  int64_t params = 0, macs = 0;
  for (const LayerFootprint& lf : f.per_layer) {
    const LayerSpec& l = *g.Find(lf.id);
    const bool reads_input =
        std::find(l.predecessors.begin(), l.predecessors.end(), input) != l.predecessors.end();
    // Only layers that couple two divided widths shrink by 1/k when split;
    // the first layer and depthwise convolutions keep their total cost.
    const bool linear = l.kind == LayerKind::kConvolution && l.depthwise;
    if (reads_input || linear || l.id == sink) continue;
    params += lf.params;
    macs += lf.macs;
  }
  return std::min(static_cast<double>(params) / static_cast<double>(f.total_params),
                  static_cast<double>(macs) / static_cast<double>(f.total_macs));
}

ModelGraph RandomInteriorDominatedModel(std::mt19937_64& rng, double min_share) {
  RandomModelOptions opt;
  opt.min_convs = 3;
  for (;;) {
    ModelGraph g = RandomModel(rng, opt);
    if (InteriorShare(g) >= min_share) return g;
  }
}

}  // namespace lcp::testing
