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

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace lcp {
namespace {

using nlohmann::ordered_json;

const LayerSpec* KindSource(const ModelGraph& g, const std::string& id) { return g.Find(id); }

ordered_json FootprintObject(const FootprintReport& f) {
  ordered_json j;
  j["total_params"] = f.total_params;
  j["total_macs"] = f.total_macs;
  j["model_bytes"] = f.model_bytes;
  j["peak_activation_bytes"] = f.peak_activation_bytes;
  j["element_bits"] = f.element_bits;
  return j;
}

}  // namespace

std::string FormatNumber(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string FootprintJson(const ModelGraph& g, const FootprintReport& f) {
  ordered_json j;
  j["model"] = g.name;
  j["signature"] = LayerSignature(g);
  j["footprint"] = FootprintObject(f);
  ordered_json layers = ordered_json::array();
  for (const LayerFootprint& l : f.per_layer) {
    ordered_json e;
    e["layer"] = l.id;
    const LayerSpec* spec = KindSource(g, l.id);
    e["kind"] = spec ? std::string(LayerKindName(spec->kind)) : "";
    e["params"] = l.params;
    e["macs"] = l.macs;
    e["activation_bytes"] = l.activation_bytes;
    layers.push_back(e);
  }
  j["layers"] = layers;
  return j.dump(2) + "\n";
}

std::string FootprintCsv(const ModelGraph& g, const FootprintReport& f) {
  std::ostringstream os;
  os << kFootprintCsvHeader << "\n";
  for (const LayerFootprint& l : f.per_layer) {
    const LayerSpec* spec = KindSource(g, l.id);
    os << l.id << "," << (spec ? LayerKindName(spec->kind) : "") << "," << l.params << ","
       << l.macs << "," << l.activation_bytes << "\n";
  }
  return os.str();
}

std::string SplitSummaryJson(const SplitModel& sm) {
  ordered_json j;
  j["key"] = sm.ProvenanceKey();
  j["original_model"] = sm.provenance.original_model;
  j["split_count"] = sm.split_count;
  j["division_factor"] = sm.provenance.division_factor;
  j["division_steps"] = sm.provenance.division_steps;
  j["fatten_percent"] = sm.provenance.fatten_percent;
  j["stem"] = sm.provenance.stem == StemMode::kShared ? "shared" : "replicated";
  j["signature"] = LayerSignature(sm.graph);
  j["total"] = FootprintObject(TotalFootprint(sm.graph));
  const ShapeMap shapes = InferShapes(sm.graph);
  ordered_json branches = ordered_json::array();
  for (int b = 0; b < sm.split_count; ++b) {
    ordered_json e = FootprintObject(
        FootprintOfLayers(sm.graph, shapes, sm.graph.element_bits, sm.BranchLayers(b)));
    e["branch"] = b;
    branches.push_back(e);
  }
  j["branches"] = branches;
  std::vector<const LayerSpec*> shared;
  for (const LayerSpec* l : sm.SharedLayers()) {
    if (l->kind != LayerKind::kInput) shared.push_back(l);
  }
  j["shared"] = FootprintObject(FootprintOfLayers(sm.graph, shapes, sm.graph.element_bits, shared));
  return j.dump(2) + "\n";
}

std::string CompareJson(const std::vector<StrategyRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const StrategyRow& r : rows) {
    ordered_json e;
    e["strategy"] = r.strategy;
    e["n"] = r.n;
    e["device"] = r.device;
    e["params"] = r.params;
    e["macs"] = r.macs;
    e["mem_bytes"] = r.mem_bytes;
    e["comm_bytes"] = r.comm_bytes;
    e["comm_pairs"] = r.comm_pairs;
    arr.push_back(e);
  }
  return arr.dump(2) + "\n";
}

std::string CompareCsv(const std::vector<StrategyRow>& rows) {
  std::ostringstream os;
  os << kCompareCsvHeader << "\n";
  for (const StrategyRow& r : rows) {
    os << r.strategy << "," << r.n << "," << r.device << "," << r.params << "," << r.macs
       << "," << r.mem_bytes << "," << r.comm_bytes << "," << r.comm_pairs << "\n";
  }
  return os.str();
}

std::string CommJson(const CommReport& r) {
  ordered_json j;
  j["connection_pairs"] = r.connection_pairs;
  j["bytes_per_inference"] = r.bytes_per_inference;
  j["inter_device_bytes"] = r.inter_device_bytes;
  ordered_json arr = ordered_json::array();
  for (const BoundaryComm& b : r.per_boundary) {
    ordered_json e;
    e["boundary"] = b.boundary;
    e["bytes"] = b.bytes;
    e["pairs"] = b.pairs;
    arr.push_back(e);
  }
  j["per_boundary"] = arr;
  return j.dump(2) + "\n";
}

std::string AccelJson(const std::string& model, const accel::AccelConfig& cfg,
                      const accel::ModelTiming& t) {
  ordered_json j;
  j["model"] = model;
  j["preset"] = cfg.name;
  j["peak_ops_s"] = accel::PeakThroughput(cfg);
  j["latency_s"] = t.latency_s;
  j["ops"] = t.ops;
  j["throughput_ops_s"] = t.latency_s > 0 ? static_cast<double>(t.ops) / t.latency_s : 0.0;
  ordered_json arr = ordered_json::array();
  for (const accel::LayerTiming& l : t.layers) {
    if (l.latency_s == 0.0 && l.ops == 0) continue;
    ordered_json e;
    e["layer"] = l.layer_id;
    e["compute_cycles"] = l.compute_cycles;
    e["bytes"] = l.bytes;
    e["ops"] = l.ops;
    e["resident"] = l.resident;
    e["latency_s"] = l.latency_s;
    arr.push_back(e);
  }
  j["layers"] = arr;
  return j.dump(2) + "\n";
}

std::string AccelCsv(const accel::ModelTiming& t) {
  std::ostringstream os;
  os << kAccelCsvHeader << "\n";
  for (const accel::LayerTiming& l : t.layers) {
    if (l.latency_s == 0.0 && l.ops == 0) continue;
    os << l.layer_id << "," << l.compute_cycles << "," << l.bytes << "," << l.ops << ","
       << (l.resident ? 1 : 0) << "," << FormatNumber(l.compute_s) << ","
       << FormatNumber(l.memory_s) << "," << FormatNumber(l.reuse_s) << ","
       << FormatNumber(l.latency_s) << "\n";
  }
  return os.str();
}

std::string SimResultJson(const SimResult& r) {
  ordered_json j;
  j["seed"] = r.seed;
  j["n_devices"] = r.n_devices;
  j["n_inferences"] = r.latencies_s.size();
  j["mean_s"] = r.mean_s;
  j["p50_s"] = r.p50_s;
  j["p95_s"] = r.p95_s;
  j["max_s"] = r.max_s;
  j["makespan_s"] = r.makespan_s;
  j["throughput_ips"] = r.throughput_ips;
  j["energy_j_per_device"] = r.energy_j_per_device;
  j["energy_j_total"] = r.energy_j_total;
  j["latencies_s"] = r.latencies_s;
  return j.dump(2) + "\n";
}

std::string LatencyCsv(const SimResult& r) {
  std::ostringstream os;
  os << kLatencyCsvHeader << "\n";
  for (size_t i = 0; i < r.latencies_s.size(); ++i) {
    os << i << "," << FormatNumber(r.latencies_s[i]) << "\n";
  }
  return os.str();
}

std::string HistogramCsv(const Histogram& h) {
  std::ostringstream os;
  os << kHistogramCsvHeader << "\n";
  for (size_t i = 0; i < h.counts.size(); ++i) {
    const double lo = h.origin_s + static_cast<double>(i) * h.bucket_width_s;
    os << FormatNumber(lo) << "," << FormatNumber(lo + h.bucket_width_s) << "," << h.counts[i]
       << "\n";
  }
  return os.str();
}

}  // namespace lcp
