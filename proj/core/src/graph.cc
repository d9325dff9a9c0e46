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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lcp/error.h"

namespace lcp {
namespace {

struct KindName {
  LayerKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {LayerKind::kInput, "input"},
    {LayerKind::kFullyConnected, "fully_connected"},
    {LayerKind::kConvolution, "convolution"},
    {LayerKind::kPooling, "pooling"},
    {LayerKind::kNormalization, "normalization"},
    {LayerKind::kDropout, "dropout"},
    {LayerKind::kActivation, "activation"},
    {LayerKind::kAdd, "add"},
    {LayerKind::kConcat, "concat"},
    {LayerKind::kClassifierFc, "classifier_fc"},
};

std::string Quote(std::string_view s) { return "'" + std::string(s) + "'"; }

int64_t OutputDim(int64_t in, int64_t kernel, int64_t stride, int64_t pad) {
  return (in + 2 * pad - kernel) / stride + 1;
}

// Kept size of a reduction dimension after structured pruning.
int64_t KeptReduction(int64_t k, double keep_fraction) {
  if (keep_fraction >= 1.0) return k;
  const double kept = std::ceil(static_cast<double>(k) * keep_fraction - 1e-9);
  return std::max<int64_t>(1, static_cast<int64_t>(kept));
}

}  // namespace

std::string_view LayerKindName(LayerKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

std::optional<LayerKind> LayerKindFromName(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  return std::nullopt;
}

bool HasWidth(LayerKind kind) {
  return kind == LayerKind::kFullyConnected ||
         kind == LayerKind::kClassifierFc || kind == LayerKind::kConvolution;
}

bool IsWeighted(LayerKind kind) { return HasWidth(kind); }

int64_t TensorShape::elements() const {
  if (dims.empty()) return 0;
  return std::accumulate(dims.begin(), dims.end(), int64_t{1},
                         std::multiplies<>());
}

std::string TensorShape::ToString() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) os << ",";
    os << dims[i];
  }
  os << ")";
  return os.str();
}

const LayerSpec* ModelGraph::Find(std::string_view id) const {
  for (const LayerSpec& l : layers) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

LayerSpec* ModelGraph::Find(std::string_view id) {
  for (LayerSpec& l : layers) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

const LayerSpec& ModelGraph::input() const {
  for (const LayerSpec& l : layers) {
    if (l.kind == LayerKind::kInput) return l;
  }
  throw ValidationError("model " + Quote(name) + " has no input layer");
}

namespace {

void ValidateLayer(const LayerSpec& l) {
  const std::string where = "layer " + Quote(l.id) + ": ";
  const size_t preds = l.predecessors.size();
  switch (l.kind) {
    case LayerKind::kInput:
      if (preds != 0) throw ValidationError(where + "input takes no predecessors");
      break;
    case LayerKind::kAdd:
      if (preds != 2) {
        throw ValidationError(where + "add needs exactly 2 predecessors, got " +
                              std::to_string(preds));
      }
      break;
    default:
      if (preds < 1) throw ValidationError(where + "missing predecessors");
  }
  if (l.kind == LayerKind::kConvolution || l.kind == LayerKind::kPooling) {
    if (!l.global_pool && (l.kernel.h < 1 || l.kernel.w < 1)) {
      throw ValidationError(where + "kernel dims must be >= 1");
    }
    if (l.stride.h < 1 || l.stride.w < 1) {
      throw ValidationError(where + "stride dims must be >= 1");
    }
    if (l.padding.h < 0 || l.padding.w < 0) {
      throw ValidationError(where + "padding must be >= 0");
    }
  }
  if (HasWidth(l.kind) && !(l.kind == LayerKind::kConvolution && l.depthwise) &&
      l.width < 1) {
    throw ValidationError(where + "width must be >= 1");
  }
  if (l.kind == LayerKind::kConvolution && l.groups < 1) {
    throw ValidationError(where + "groups must be >= 1");
  }
  if (l.kind == LayerKind::kDropout && (l.dropout_rate < 0 || l.dropout_rate > 1)) {
    throw ValidationError(where + "dropout rate must lie in [0,1]");
  }
  if (!(l.keep_fraction > 0.0 && l.keep_fraction <= 1.0)) {
    throw ValidationError(where + "keep_fraction must lie in (0,1]");
  }
}

}  // namespace

std::vector<size_t> TopologicalOrder(const ModelGraph& g) {
  std::unordered_map<std::string_view, size_t> index;
  for (size_t i = 0; i < g.layers.size(); ++i) index[g.layers[i].id] = i;

  std::vector<int> indegree(g.layers.size(), 0);
  std::vector<std::vector<size_t>> out(g.layers.size());
  for (size_t i = 0; i < g.layers.size(); ++i) {
    for (const std::string& p : g.layers[i].predecessors) {
      auto it = index.find(p);
      if (it == index.end()) continue;
      out[it->second].push_back(i);
      ++indegree[i];
    }
  }
  std::priority_queue<size_t, std::vector<size_t>, std::greater<>> ready;
  for (size_t i = 0; i < g.layers.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<size_t> order;
  order.reserve(g.layers.size());
  while (!ready.empty()) {
    size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (size_t j : out[i]) {
      if (--indegree[j] == 0) ready.push(j);
    }
  }
  return order;
}

namespace {

// Returns one cycle as a list of ids, or empty when the graph is acyclic.
std::vector<std::string> FindCycle(const ModelGraph& g) {
  std::unordered_map<std::string_view, size_t> index;
  for (size_t i = 0; i < g.layers.size(); ++i) index[g.layers[i].id] = i;
  // 0 = unvisited, 1 = on stack, 2 = done. Walks predecessor edges.
  std::vector<int> state(g.layers.size(), 0);
  std::vector<size_t> stack;
  std::vector<std::string> cycle;

  std::function<bool(size_t)> visit = [&](size_t i) {
    state[i] = 1;
    stack.push_back(i);
    for (const std::string& p : g.layers[i].predecessors) {
      auto it = index.find(p);
      if (it == index.end()) continue;
      size_t j = it->second;
      if (state[j] == 1) {
        auto pos = std::find(stack.begin(), stack.end(), j);
        for (auto k = pos; k != stack.end(); ++k) cycle.push_back(g.layers[*k].id);
        return true;
      }
      if (state[j] == 0 && visit(j)) return true;
    }
    stack.pop_back();
    state[i] = 2;
    return false;
  };
  for (size_t i = 0; i < g.layers.size(); ++i) {
    if (state[i] == 0 && visit(i)) break;
  }
  return cycle;
}

}  // namespace

void Validate(const ModelGraph& g) {
  if (g.layers.empty()) {
    throw ValidationError("model " + Quote(g.name) + " has no layers");
  }
  if (g.element_bits != 8 && g.element_bits != 16 && g.element_bits != 32) {
    throw ValidationError("element_bits must be one of 8, 16, 32");
  }
  if (g.input_shape.empty() || g.input_shape.size() == 2 ||
      g.input_shape.size() > 3) {
    throw ValidationError("input_shape must be (c,h,w) or (features)");
  }
  for (int64_t d : g.input_shape) {
    if (d < 1) throw ValidationError("input_shape dims must be >= 1");
  }

  std::unordered_set<std::string_view> ids;
  int inputs = 0;
  for (const LayerSpec& l : g.layers) {
    if (l.id.empty()) throw ValidationError("layer with empty id");
    if (!ids.insert(l.id).second) {
      throw ValidationError("duplicate layer id " + Quote(l.id));
    }
    if (l.kind == LayerKind::kInput) ++inputs;
  }
  if (inputs != 1) {
    throw ValidationError("model must have exactly one input layer, found " +
                          std::to_string(inputs));
  }
  for (const LayerSpec& l : g.layers) {
    ValidateLayer(l);
    for (const std::string& p : l.predecessors) {
      if (!ids.count(p)) {
        throw ValidationError("layer " + Quote(l.id) +
                              " references unknown predecessor " + Quote(p));
      }
    }
  }
  std::vector<std::string> cycle = FindCycle(g);
  if (!cycle.empty()) {
    std::string msg = "cycle detected:";
    for (const std::string& id : cycle) msg += " " + id;
    throw ValidationError(msg);
  }
  std::unordered_set<std::string_view> consumed;
  for (const LayerSpec& l : g.layers) {
    for (const std::string& p : l.predecessors) consumed.insert(p);
  }
  int sinks = 0;
  for (const LayerSpec& l : g.layers) {
    if (!consumed.count(l.id)) ++sinks;
  }
  if (sinks != 1) {
    throw ValidationError("model must have exactly one sink layer, found " +
                          std::to_string(sinks));
  }
}

std::vector<std::string> Successors(const ModelGraph& g, std::string_view id) {
  std::vector<std::string> out;
  for (const LayerSpec& l : g.layers) {
    for (const std::string& p : l.predecessors) {
      if (p == id) {
        out.push_back(l.id);
        break;
      }
    }
  }
  return out;
}

const LayerSpec& Sink(const ModelGraph& g) {
  std::unordered_set<std::string_view> consumed;
  for (const LayerSpec& l : g.layers) {
    for (const std::string& p : l.predecessors) consumed.insert(p);
  }
  for (const LayerSpec& l : g.layers) {
    if (!consumed.count(l.id)) return l;
  }
  throw ValidationError("model " + Quote(g.name) + " has no sink layer");
}

namespace {

TensorShape JoinChannels(const LayerSpec& l,
                         const std::vector<const TensorShape*>& ins) {
  TensorShape out = *ins.front();
  if (ins.size() == 1) return out;
  for (size_t i = 1; i < ins.size(); ++i) {
    const TensorShape& s = *ins[i];
    if (s.dims.size() != out.dims.size()) {
      throw ValidationError("layer " + Quote(l.id) + ": cannot join " +
                            out.ToString() + " with " + s.ToString());
    }
    if (out.is_spatial() && (s.dims[1] != out.dims[1] || s.dims[2] != out.dims[2])) {
      throw ValidationError("layer " + Quote(l.id) +
                            ": concat spatial mismatch " + out.ToString() +
                            " vs " + s.ToString());
    }
    out.dims[0] += s.dims[0];
  }
  return out;
}

TensorShape ComputeOutput(const LayerSpec& l, const TensorShape& in,
                          const std::vector<const TensorShape*>& ins) {
  const std::string where = "layer " + Quote(l.id) + ": ";
  TensorShape out;
  out.element_bits = in.element_bits;
  switch (l.kind) {
    case LayerKind::kInput:
      return in;
    case LayerKind::kFullyConnected:
    case LayerKind::kClassifierFc:
      out.dims = {l.width};
      return out;
    case LayerKind::kConvolution: {
      if (!in.is_spatial()) {
        throw ValidationError(where + "convolution needs a (c,h,w) input, got " +
                              in.ToString());
      }
      const int64_t cin = in.dims[0];
      const int64_t groups = l.depthwise ? cin : l.groups;
      const int64_t cout = l.depthwise ? cin : l.width;
      if (cin % groups != 0 || cout % groups != 0) {
        throw ValidationError(where + "channels not divisible by groups");
      }
      const int64_t h = OutputDim(in.dims[1], l.kernel.h, l.stride.h, l.padding.h);
      const int64_t w = OutputDim(in.dims[2], l.kernel.w, l.stride.w, l.padding.w);
      if (h < 1 || w < 1) {
        throw ValidationError(where + "non-positive output dims from input " +
                              in.ToString());
      }
      out.dims = {cout, h, w};
      return out;
    }
    case LayerKind::kPooling: {
      if (!in.is_spatial()) {
        throw ValidationError(where + "pooling needs a (c,h,w) input, got " +
                              in.ToString());
      }
      if (l.global_pool) {
        out.dims = {in.dims[0], 1, 1};
        return out;
      }
      const int64_t h = OutputDim(in.dims[1], l.kernel.h, l.stride.h, l.padding.h);
      const int64_t w = OutputDim(in.dims[2], l.kernel.w, l.stride.w, l.padding.w);
      if (h < 1 || w < 1) {
        throw ValidationError(where + "non-positive output dims from input " +
                              in.ToString());
      }
      out.dims = {in.dims[0], h, w};
      return out;
    }
    case LayerKind::kAdd: {
      if (!(*ins[0] == *ins[1])) {
        throw ValidationError(where + "add shape mismatch " + ins[0]->ToString() +
                              " vs " + ins[1]->ToString());
      }
      return *ins[0];
    }
    case LayerKind::kConcat:
    case LayerKind::kNormalization:
    case LayerKind::kDropout:
    case LayerKind::kActivation:
      return in;
  }
  return in;
}

}  // namespace

namespace {

size_t WideOperand(const std::vector<const TensorShape*>& ins) {
  return ins[0]->channels() >= ins[1]->channels() ? 0 : 1;
}

// A branch-side add may read a shared, wider tensor (a shortcut out of a
// shared stem); it uses the branch's channel slice of it.
bool SlicedShortcut(const ModelGraph& g, const LayerSpec& l,
                    const std::vector<const TensorShape*>& ins) {
  if (l.kind != LayerKind::kAdd || l.branch < 0 || ins.size() != 2) return false;
  if (*ins[0] == *ins[1]) return false;
  const size_t wide = WideOperand(ins);
  const TensorShape& a = *ins[wide];
  const TensorShape& b = *ins[1 - wide];
  const LayerSpec* source = g.Find(l.predecessors[wide]);
  if (!source || source->branch >= 0 || a.dims.size() != b.dims.size()) return false;
  if (b.channels() == 0 || a.channels() < b.channels()) return false;
  return std::equal(a.dims.begin() + 1, a.dims.end(), b.dims.begin() + 1);
}

}  // namespace

TensorShape InputShapeOf(const ModelGraph& g, const LayerSpec& l,
                         const ShapeMap& shapes) {
  if (l.kind == LayerKind::kInput) {
    return TensorShape{g.input_shape, g.element_bits};
  }
  std::vector<const TensorShape*> ins;
  for (const std::string& p : l.predecessors) {
    auto it = shapes.find(p);
    if (it == shapes.end()) {
      throw ValidationError("layer " + Quote(l.id) + ": predecessor " + Quote(p) +
                            " has no shape");
    }
    ins.push_back(&it->second);
  }
  if (l.kind == LayerKind::kAdd) return *ins[SlicedShortcut(g, l, ins) ? 1 - WideOperand(ins) : 0];
  return JoinChannels(l, ins);
}

ShapeMap InferShapes(const ModelGraph& g) {
  Validate(g);
  ShapeMap shapes;
  for (size_t i : TopologicalOrder(g)) {
    const LayerSpec& l = g.layers[i];
    TensorShape in = InputShapeOf(g, l, shapes);
    std::vector<const TensorShape*> ins;
    for (const std::string& p : l.predecessors) ins.push_back(&shapes.at(p));
    shapes.emplace(l.id, SlicedShortcut(g, l, ins) ? in : ComputeOutput(l, in, ins));
  }
  return shapes;
}

int64_t LayerParams(const LayerSpec& l, const TensorShape& in_shape) {
  switch (l.kind) {
    case LayerKind::kFullyConnected:
    case LayerKind::kClassifierFc: {
      const int64_t k = KeptReduction(in_shape.elements(), l.keep_fraction);
      return k * l.width + (l.bias ? l.width : 0);
    }
    case LayerKind::kConvolution: {
      const int64_t cin = in_shape.channels();
      const int64_t groups = l.depthwise ? cin : l.groups;
      const int64_t cout = l.depthwise ? cin : l.width;
      const int64_t k = KeptReduction(l.kernel.h * l.kernel.w * (cin / groups),
                                      l.keep_fraction);
      return k * cout + (l.bias ? cout : 0);
    }
    case LayerKind::kNormalization:
      return 2 * in_shape.channels();
    default:
      return 0;
  }
}

int64_t LayerMacs(const LayerSpec& l, const TensorShape& in_shape,
                  const TensorShape& out_shape) {
  switch (l.kind) {
    case LayerKind::kFullyConnected:
    case LayerKind::kClassifierFc:
      return KeptReduction(in_shape.elements(), l.keep_fraction) * l.width;
    case LayerKind::kConvolution: {
      const int64_t cin = in_shape.channels();
      const int64_t groups = l.depthwise ? cin : l.groups;
      const int64_t k = KeptReduction(l.kernel.h * l.kernel.w * (cin / groups),
                                      l.keep_fraction);
      return out_shape.elements() * k;
    }
    default:
      return 0;
  }
}

FootprintReport FootprintOfLayers(const ModelGraph& g, const ShapeMap& shapes,
                                  int element_bits,
                                  const std::vector<const LayerSpec*>& layers) {
  FootprintReport r;
  r.element_bits = element_bits;
  for (const LayerSpec* l : layers) {
    TensorShape in = InputShapeOf(g, *l, shapes);
    const TensorShape& out = shapes.at(l->id);
    LayerFootprint f;
    f.id = l->id;
    f.params = LayerParams(*l, in);
    f.macs = LayerMacs(*l, in, out);
    f.activation_bytes = out.elements() * element_bits / 8;
    const int64_t in_bytes =
        l->kind == LayerKind::kInput ? 0 : in.elements() * element_bits / 8;
    r.peak_activation_bytes =
        std::max(r.peak_activation_bytes, in_bytes + f.activation_bytes);
    r.total_params += f.params;
    r.total_macs += f.macs;
    r.per_layer.push_back(std::move(f));
  }
  r.model_bytes = r.total_params * element_bits / 8;
  return r;
}

FootprintReport TotalFootprint(const ModelGraph& g, int element_bits) {
  ShapeMap shapes = InferShapes(g);
  std::vector<const LayerSpec*> ordered;
  for (size_t i : TopologicalOrder(g)) ordered.push_back(&g.layers[i]);
  return FootprintOfLayers(g, shapes, element_bits, ordered);
}

std::string LayerSignature(const ModelGraph& g) {
  int fc = 0, c = 0, p = 0, n = 0, d = 0;
  for (const LayerSpec& l : g.layers) {
    switch (l.kind) {
      case LayerKind::kFullyConnected:
      case LayerKind::kClassifierFc:
        ++fc;
        break;
      case LayerKind::kConvolution:
        ++c;
        break;
      case LayerKind::kPooling:
        ++p;
        break;
      case LayerKind::kNormalization:
        ++n;
        break;
      case LayerKind::kDropout:
        ++d;
        break;
      default:
        break;
    }
  }
  std::string sig;
  auto put = [&sig](int count, const char* tag) {
    if (count == 0) return;
    if (!sig.empty()) sig += "-";
    sig += std::to_string(count) + tag;
  };
  put(fc, "fc");
  put(c, "c");
  put(p, "p");
  put(n, "n");
  put(d, "d");
  return sig;
}

}  // namespace lcp
