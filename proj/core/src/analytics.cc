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

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>
#include <utility>

#include "lcp/error.h"
#include "lcp/splitter.h"

namespace lcp {

std::string_view StrategyName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kDataParallel:
      return "data_parallel";
    case StrategyKind::kModelParallelOutputSplit:
      return "model_parallel_output_split";
    case StrategyKind::kModelParallelInputSplit:
      return "model_parallel_input_split";
    case StrategyKind::kLcp:
      return "lcp";
  }
  return "unknown";
}

std::optional<StrategyKind> StrategyFromName(std::string_view name) {
  for (StrategyKind k :
       {StrategyKind::kDataParallel, StrategyKind::kModelParallelOutputSplit,
        StrategyKind::kModelParallelInputSplit, StrategyKind::kLcp}) {
    if (StrategyName(k) == name) return k;
  }
  if (name == "data") return StrategyKind::kDataParallel;
  if (name == "model" || name == "model_parallel") {
    return StrategyKind::kModelParallelOutputSplit;
  }
  return std::nullopt;
}

std::vector<int64_t> PartitionUnits(int64_t total, int n) {
  std::vector<int64_t> parts(static_cast<size_t>(n), total / n);
  for (int64_t i = 0; i < total % n; ++i) ++parts[static_cast<size_t>(i)];
  return parts;
}

namespace {

int BitsOf(const ModelGraph& g, const AnalyticsOptions& opt) {
  return opt.element_bits > 0 ? opt.element_bits : g.element_bits;
}

int64_t InputBytes(const ModelGraph& g, const AnalyticsOptions& opt) {
  const int bits = opt.input_bits > 0 ? opt.input_bits : BitsOf(g, opt);
  int64_t elements = 1;
  for (int64_t d : g.input_shape) elements *= d;
  return elements * bits / 8;
}

int64_t OutputBytes(const ModelGraph& g, const ShapeMap& shapes, int bits) {
  return shapes.at(Sink(g).id).elements() * bits / 8;
}

void CheckDevices(const Strategy& s) {
  if (s.n_devices < 1) {
    throw ValidationError("strategy needs at least one device, got " +
                          std::to_string(s.n_devices));
  }
}

// Share of `value` owned by a slice of `part` out of `whole` units.
int64_t Share(int64_t value, int64_t part, int64_t whole) {
  if (whole <= 0) return 0;
  if (value % whole == 0) return value / whole * part;
  return static_cast<int64_t>(std::llround(static_cast<double>(value) *
                                           static_cast<double>(part) /
                                           static_cast<double>(whole)));
}

// Slices of a tensor along its channel (or feature) axis, in bytes.
std::vector<int64_t> TensorSlices(const TensorShape& t, int n, int bits) {
  const int64_t channels = std::max<int64_t>(t.channels(), 1);
  const int64_t per_channel = t.elements() / channels;
  std::vector<int64_t> out;
  for (int64_t c : PartitionUnits(channels, n)) out.push_back(c * per_channel * bits / 8);
  return out;
}

bool NeedsFullInput(const LayerSpec& l) {
  return IsWeighted(l.kind) && !(l.kind == LayerKind::kConvolution && l.depthwise);
}

std::string PredKey(const LayerSpec& l) {
  std::string key;
  for (const std::string& p : l.predecessors) key += p + ",";
  return key;
}

std::vector<const LayerSpec*> Ordered(const ModelGraph& g) {
  std::vector<const LayerSpec*> out;
  for (size_t i : TopologicalOrder(g)) out.push_back(&g.layers[i]);
  return out;
}

BoundaryComm MakeBoundary(std::string name, std::vector<Message> messages) {
  BoundaryComm b;
  b.boundary = std::move(name);
  std::set<std::pair<int, int>> pairs;
  for (const Message& m : messages) {
    b.bytes += m.bytes;
    // The result returns over the connection its input arrived on.
    if (m.to != kSourceNode) pairs.insert({m.from, m.to});
  }
  b.pairs = static_cast<int64_t>(pairs.size());
  b.messages = std::move(messages);
  return b;
}

CommReport Finish(std::vector<BoundaryComm> boundaries) {
  CommReport r;
  for (BoundaryComm& b : boundaries) {
    if (b.messages.empty()) continue;
    r.connection_pairs += b.pairs;
    r.bytes_per_inference += b.bytes;
    for (const Message& m : b.messages) {
      if (m.from != kSourceNode && m.to != kSourceNode) r.inter_device_bytes += m.bytes;
    }
    r.per_boundary.push_back(std::move(b));
  }
  return r;
}

// Source delivers `bytes[i]` to device i and receives the result from device 0.
BoundaryComm IoBoundary(const std::vector<int64_t>& bytes, int64_t out_bytes,
                        SourceMode source) {
  const int src = source == SourceMode::kDedicated ? kSourceNode : 0;
  std::vector<Message> msgs;
  for (size_t i = 0; i < bytes.size(); ++i) {
    if (static_cast<int>(i) == src) continue;
    msgs.push_back({src, static_cast<int>(i), bytes[i]});
  }
  if (src != 0) msgs.push_back({0, src, out_bytes});
  return MakeBoundary("io", std::move(msgs));
}

}  // namespace

std::vector<ParallelStage> OutputSplitStages(const ModelGraph& g, int n,
                                             int element_bits) {
  const ShapeMap shapes = InferShapes(g);
  std::vector<ParallelStage> stages(1);
  stages[0].boundary = "input";
  stages[0].device_macs.assign(static_cast<size_t>(n), 0);
  std::unordered_set<std::string> gathered;
  for (const LayerSpec* l : Ordered(g)) {
    const TensorShape in = InputShapeOf(g, *l, shapes);
    if (NeedsFullInput(*l)) {
      const bool reads_input = std::all_of(
          l->predecessors.begin(), l->predecessors.end(),
          [&](const std::string& p) { return g.Find(p)->kind == LayerKind::kInput; });
      const std::string key = PredKey(*l);
      if (!reads_input && gathered.insert(key).second) {
        ParallelStage s;
        s.boundary = l->id;
        s.device_macs.assign(static_cast<size_t>(n), 0);
        s.gather_slice_bytes = TensorSlices(in, n, element_bits);
        stages.push_back(std::move(s));
      }
    }
    const TensorShape& out = shapes.at(l->id);
    const int64_t macs = LayerMacs(*l, in, out);
    const int64_t channels = std::max<int64_t>(out.channels(), 1);
    const std::vector<int64_t> part = PartitionUnits(channels, n);
    ParallelStage& cur = stages.back();
    cur.layers.push_back(l->id);
    for (int i = 0; i < n; ++i) cur.device_macs[i] += Share(macs, part[i], channels);
  }
  return stages;
}

std::vector<int64_t> OutputSliceBytes(const ModelGraph& g, int n, int element_bits) {
  const ShapeMap shapes = InferShapes(g);
  return TensorSlices(shapes.at(Sink(g).id), n, element_bits);
}

namespace {

std::vector<FootprintReport> OutputSplitFootprint(const ModelGraph& g, int n, int bits) {
  const ShapeMap shapes = InferShapes(g);
  std::vector<FootprintReport> out(static_cast<size_t>(n));
  for (FootprintReport& r : out) r.element_bits = bits;
  for (const LayerSpec* l : Ordered(g)) {
    const TensorShape in = InputShapeOf(g, *l, shapes);
    const TensorShape& o = shapes.at(l->id);
    const int64_t params = LayerParams(*l, in);
    const int64_t macs = LayerMacs(*l, in, o);
    const int64_t channels = std::max<int64_t>(o.channels(), 1);
    const std::vector<int64_t> part = PartitionUnits(channels, n);
    const int64_t in_bytes = l->kind == LayerKind::kInput ? 0 : in.elements() * bits / 8;
    const int64_t out_bytes = o.elements() * bits / 8;
    for (int i = 0; i < n; ++i) {
      LayerFootprint f;
      f.id = l->id;
      f.params = Share(params, part[i], channels);
      f.macs = Share(macs, part[i], channels);
      f.activation_bytes = Share(out_bytes, part[i], channels);
      // Layers that need the full input see the gathered tensor.
      const int64_t seen_in = NeedsFullInput(*l) ? in_bytes : Share(in_bytes, part[i], channels);
      FootprintReport& r = out[i];
      r.peak_activation_bytes = std::max(r.peak_activation_bytes, seen_in + f.activation_bytes);
      r.total_params += f.params;
      r.total_macs += f.macs;
      r.per_layer.push_back(std::move(f));
    }
  }
  for (FootprintReport& r : out) r.model_bytes = r.total_params * bits / 8;
  return out;
}

std::vector<FootprintReport> InputSplitFootprint(const ModelGraph& g, int n, int bits) {
  const ShapeMap shapes = InferShapes(g);
  std::vector<FootprintReport> out(static_cast<size_t>(n));
  for (FootprintReport& r : out) r.element_bits = bits;
  for (const LayerSpec* l : Ordered(g)) {
    const TensorShape in = InputShapeOf(g, *l, shapes);
    const TensorShape& o = shapes.at(l->id);
    const int64_t params = LayerParams(*l, in);
    const int64_t macs = LayerMacs(*l, in, o);
    const int64_t in_bytes = l->kind == LayerKind::kInput ? 0 : in.elements() * bits / 8;
    const int64_t out_bytes = o.elements() * bits / 8;
    for (int i = 0; i < n; ++i) {
      LayerFootprint f;
      f.id = l->id;
      f.activation_bytes = out_bytes;
      int64_t seen_in = i == 0 ? in_bytes : 0;
      if (NeedsFullInput(*l)) {
        // Slice the reduction dimension; the bias stays with the reducer.
        const int64_t cout = o.channels();
        const int64_t bias = l->bias ? cout : 0;
        const int64_t k = (params - bias) / cout;
        const int64_t k_i = PartitionUnits(k, n)[i];
        f.params = k_i * cout + (i == 0 ? bias : 0);
        f.macs = Share(macs, k_i, k);
        seen_in = Share(in_bytes, k_i, k);
      } else if (i == 0) {
        f.params = params;
        f.macs = macs;
      } else {
        f.activation_bytes = 0;
      }
      FootprintReport& r = out[i];
      r.peak_activation_bytes = std::max(r.peak_activation_bytes, seen_in + f.activation_bytes);
      r.total_params += f.params;
      r.total_macs += f.macs;
      r.per_layer.push_back(std::move(f));
    }
  }
  for (FootprintReport& r : out) r.model_bytes = r.total_params * bits / 8;
  return out;
}

void CheckLcpDevices(const SplitModel& sm, const Strategy& s) {
  if (s.n_devices < sm.split_count) {
    throw ValidationError("lcp needs at least one device per branch: " +
                          std::to_string(sm.split_count) + " branches, " +
                          std::to_string(s.n_devices) + " devices");
  }
}

}  // namespace

std::vector<FootprintReport> PerDeviceFootprint(const ModelGraph& g, const Strategy& s,
                                                const AnalyticsOptions& opt) {
  CheckDevices(s);
  const int bits = BitsOf(g, opt);
  switch (s.kind) {
    case StrategyKind::kDataParallel:
      return std::vector<FootprintReport>(static_cast<size_t>(s.n_devices),
                                          TotalFootprint(g, bits));
    case StrategyKind::kModelParallelOutputSplit:
      return OutputSplitFootprint(g, s.n_devices, bits);
    case StrategyKind::kModelParallelInputSplit:
      return InputSplitFootprint(g, s.n_devices, bits);
    case StrategyKind::kLcp:
      break;
  }
  throw ValidationError("lcp strategy requires a split model; '" + g.name +
                        "' is unsplit");
}

std::vector<FootprintReport> PerDeviceFootprint(const SplitModel& sm, const Strategy& s,
                                                const AnalyticsOptions& opt) {
  if (s.kind != StrategyKind::kLcp) return PerDeviceFootprint(sm.graph, s, opt);
  CheckDevices(s);
  CheckLcpDevices(sm, s);
  const int bits = BitsOf(sm.graph, opt);
  const ShapeMap shapes = InferShapes(sm.graph);
  std::vector<FootprintReport> out;
  for (int d = 0; d < s.n_devices; ++d) {
    std::vector<const LayerSpec*> layers;
    if (d < sm.split_count) layers = sm.BranchLayers(d);
    if (d == 0) {
      for (const LayerSpec* l : sm.SharedLayers()) {
        if (l->kind != LayerKind::kInput) layers.push_back(l);
      }
    }
    out.push_back(FootprintOfLayers(sm.graph, shapes, bits, layers));
  }
  return out;
}

CommReport CommunicationLoad(const ModelGraph& g, const Strategy& s,
                             const AnalyticsOptions& opt) {
  CheckDevices(s);
  const int n = s.n_devices;
  const int bits = BitsOf(g, opt);
  const ShapeMap shapes = InferShapes(g);
  const int64_t in_bytes = InputBytes(g, opt);
  const int64_t out_bytes = OutputBytes(g, shapes, bits);
  std::vector<BoundaryComm> boundaries;

  switch (s.kind) {
    case StrategyKind::kDataParallel:
      // Each inference is served end to end by one replica.
      boundaries.push_back(IoBoundary({in_bytes}, out_bytes, opt.source));
      break;

    case StrategyKind::kModelParallelOutputSplit: {
      boundaries.push_back(IoBoundary(std::vector<int64_t>(n, in_bytes), out_bytes,
                                      opt.source));
      for (const ParallelStage& st : OutputSplitStages(g, n, bits)) {
        if (st.gather_slice_bytes.empty()) continue;
        std::vector<Message> msgs;
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (i != j) msgs.push_back({i, j, st.gather_slice_bytes[i]});
          }
        }
        boundaries.push_back(MakeBoundary(st.boundary, std::move(msgs)));
      }
      std::vector<Message> final_msgs;
      const std::vector<int64_t> slices = OutputSliceBytes(g, n, bits);
      for (int i = 1; i < n; ++i) final_msgs.push_back({i, 0, slices[i]});
      boundaries.push_back(MakeBoundary("output", std::move(final_msgs)));
      break;
    }

    case StrategyKind::kModelParallelInputSplit: {
      const TensorShape in_shape = shapes.at(g.input().id);
      boundaries.push_back(
          IoBoundary(TensorSlices(in_shape, n, opt.input_bits > 0 ? opt.input_bits : bits),
                     out_bytes, opt.source));
      std::vector<const LayerSpec*> weighted;
      for (const LayerSpec* l : Ordered(g)) {
        if (NeedsFullInput(*l)) weighted.push_back(l);
      }
      for (size_t w = 0; w < weighted.size(); ++w) {
        const TensorShape& o = shapes.at(weighted[w]->id);
        const int64_t bytes = o.elements() * bits / 8;
        std::vector<Message> msgs;
        for (int i = 1; i < n; ++i) msgs.push_back({i, 0, bytes});
        if (w + 1 < weighted.size()) {
          const std::vector<int64_t> scatter = TensorSlices(o, n, bits);
          for (int i = 1; i < n; ++i) msgs.push_back({0, i, scatter[i]});
        }
        boundaries.push_back(MakeBoundary(weighted[w]->id, std::move(msgs)));
      }
      break;
    }

    case StrategyKind::kLcp:
      throw ValidationError("lcp strategy requires a split model; '" + g.name +
                            "' is unsplit");
  }
  return Finish(std::move(boundaries));
}

CommReport CommunicationLoad(const SplitModel& sm, const Strategy& s,
                             const AnalyticsOptions& opt) {
  if (s.kind != StrategyKind::kLcp) return CommunicationLoad(sm.graph, s, opt);
  CheckDevices(s);
  CheckLcpDevices(sm, s);
  const ModelGraph& g = sm.graph;
  const int b = sm.split_count;
  const int bits = BitsOf(g, opt);
  const ShapeMap shapes = InferShapes(g);
  const int64_t in_bytes = InputBytes(g, opt);
  const int64_t out_bytes = OutputBytes(g, shapes, bits);

  const std::vector<const LayerSpec*> head = sm.SharedHead();
  const bool shared_stem = std::any_of(head.begin(), head.end(), [](const LayerSpec* l) {
    return l->kind != LayerKind::kInput;
  });

  std::vector<BoundaryComm> boundaries;
  if (!shared_stem) {
    boundaries.push_back(IoBoundary(std::vector<int64_t>(b, in_bytes), out_bytes,
                                    opt.source));
  } else {
    // The aggregator runs the stem and forwards its output to the branches.
    boundaries.push_back(IoBoundary({in_bytes}, out_bytes, opt.source));
    std::set<std::string> feeds;
    for (const LayerSpec* l : sm.BranchLayers(0)) {
      for (const std::string& p : l->predecessors) {
        if (g.Find(p)->branch < 0) feeds.insert(p);
      }
    }
    int64_t stem_bytes = 0;
    for (const std::string& f : feeds) stem_bytes += shapes.at(f).elements() * bits / 8;
    std::vector<Message> msgs;
    for (int i = 1; i < b; ++i) msgs.push_back({0, i, stem_bytes});
    boundaries.push_back(MakeBoundary("stem", std::move(msgs)));
  }
  std::vector<Message> gather;
  for (int i = 1; i < b; ++i) {
    gather.push_back({i, 0, shapes.at(sm.PreFinal(i).id).elements() * bits / 8});
  }
  boundaries.push_back(MakeBoundary("gather", std::move(gather)));
  return Finish(std::move(boundaries));
}

SplitModel LcpSplitFor(const ModelGraph& g, int n, StemMode stem) {
  if (n < 1) throw ValidationError("lcp needs at least one device");
  if (n == 1) return WrapUnsplit(g, stem);
  SplitConfig cfg;
  cfg.device = UnboundedDevice();
  cfg.stem = stem;
  int passes = 0;
  int count = 1;
  while (count < n) {
    count *= 2;
    ++passes;
  }
  if (count == n) {
    cfg.division_factor = 2;
    cfg.forced_passes = passes;
  } else {
    cfg.division_factor = n;
    cfg.forced_passes = 1;
  }
  return Split(g, cfg);
}

std::vector<StrategyRow> CompareStrategies(const ModelGraph& g,
                                           const std::vector<Strategy>& strategies,
                                           const AnalyticsOptions& opt, StemMode stem) {
  std::vector<StrategyRow> rows;
  for (const Strategy& s : strategies) {
    std::vector<FootprintReport> fps;
    CommReport comm;
    if (s.kind == StrategyKind::kLcp) {
      SplitModel sm = LcpSplitFor(g, s.n_devices, stem);
      fps = PerDeviceFootprint(sm, s, opt);
      comm = CommunicationLoad(sm, s, opt);
    } else {
      fps = PerDeviceFootprint(g, s, opt);
      comm = CommunicationLoad(g, s, opt);
    }
    StrategyRow row;
    row.strategy = std::string(StrategyName(s.kind));
    row.n = s.n_devices;
    for (size_t d = 0; d < fps.size(); ++d) {
      if (d == 0 || MemBytes(fps[d]) > row.mem_bytes) {
        row.device = static_cast<int>(d);
        row.params = fps[d].total_params;
        row.macs = fps[d].total_macs;
        row.mem_bytes = MemBytes(fps[d]);
      }
    }
    row.comm_bytes = comm.bytes_per_inference;
    row.comm_pairs = comm.connection_pairs;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lcp
