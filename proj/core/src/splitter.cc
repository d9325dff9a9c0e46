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

#include "lcp/splitter.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lcp/error.h"

namespace lcp {

// ---- SplitModel ------------------------------------------------------------

std::string ProvenanceKey(const std::string& model, int split_count,
                          double fatten_percent) {
  std::string key = model;
  if (split_count > 1) key += "-split" + std::to_string(split_count);
  if (fatten_percent > 0.0) {
    key += "-f" + std::to_string(static_cast<int>(std::lround(fatten_percent * 100.0)));
  }
  return key;
}

std::string SplitModel::ProvenanceKey() const {
  return lcp::ProvenanceKey(provenance.original_model, split_count,
                            provenance.fatten_percent);
}

std::vector<const LayerSpec*> SplitModel::BranchLayers(int branch) const {
  std::vector<const LayerSpec*> out;
  for (const LayerSpec& l : graph.layers) {
    if (l.branch == branch) out.push_back(&l);
  }
  return out;
}

std::vector<const LayerSpec*> SplitModel::SharedLayers() const {
  std::vector<const LayerSpec*> out;
  for (const LayerSpec& l : graph.layers) {
    if (l.branch < 0) out.push_back(&l);
  }
  return out;
}

namespace {

// Shared layers that have a branch layer somewhere downstream.
std::unordered_set<std::string> UpstreamOfBranches(const ModelGraph& g) {
  std::unordered_map<std::string, const LayerSpec*> by_id;
  for (const LayerSpec& l : g.layers) by_id[l.id] = &l;
  std::unordered_set<std::string> head;
  std::vector<const LayerSpec*> stack;
  for (const LayerSpec& l : g.layers) {
    if (l.branch >= 0) stack.push_back(&l);
  }
  std::unordered_set<std::string> seen;
  while (!stack.empty()) {
    const LayerSpec* l = stack.back();
    stack.pop_back();
    for (const std::string& p : l->predecessors) {
      if (!seen.insert(p).second) continue;
      const LayerSpec* pl = by_id.at(p);
      if (pl->branch < 0) head.insert(p);
      stack.push_back(pl);
    }
  }
  return head;
}

}  // namespace

std::vector<const LayerSpec*> SplitModel::SharedHead() const {
  std::unordered_set<std::string> head = UpstreamOfBranches(graph);
  std::vector<const LayerSpec*> out;
  for (const LayerSpec& l : graph.layers) {
    if (l.branch < 0 && (head.count(l.id) || l.kind == LayerKind::kInput)) {
      out.push_back(&l);
    }
  }
  return out;
}

std::vector<const LayerSpec*> SplitModel::SharedTail() const {
  std::unordered_set<std::string> head = UpstreamOfBranches(graph);
  std::vector<const LayerSpec*> out;
  for (const LayerSpec& l : graph.layers) {
    if (l.branch < 0 && !head.count(l.id) && l.kind != LayerKind::kInput) {
      out.push_back(&l);
    }
  }
  return out;
}

const LayerSpec& SplitModel::PreFinal(int branch) const {
  for (const LayerSpec& l : graph.layers) {
    if (l.branch >= 0) continue;
    for (const std::string& p : l.predecessors) {
      const LayerSpec* pl = graph.Find(p);
      if (pl && pl->branch == branch) return *pl;
    }
  }
  throw ValidationError("branch " + std::to_string(branch) + " has no consumer");
}

const LayerSpec& SplitModel::Classifier() const {
  for (const LayerSpec& l : graph.layers) {
    if (l.kind == LayerKind::kClassifierFc) return l;
  }
  throw ValidationError("model '" + graph.name + "' has no classifier_fc layer");
}

ModelGraph SplitModel::BranchGraph(int branch) const {
  ModelGraph out;
  out.name = graph.name + "/branch" + std::to_string(branch);
  out.input_shape = graph.input_shape;
  out.element_bits = graph.element_bits;
  for (const LayerSpec* l : SharedHead()) out.layers.push_back(*l);
  for (const LayerSpec* l : BranchLayers(branch)) out.layers.push_back(*l);
  return out;
}

// ---- configuration ---------------------------------------------------------

void SplitConfig::Validate() const {
  if (division_factor < 2) {
    throw ValidationError("division factor must be >= 2, got " +
                          std::to_string(division_factor));
  }
  if (!(fatten_step_percent > 0.0 && fatten_step_percent <= 1.0)) {
    throw ValidationError("fatten step must lie in (0, 100%]");
  }
  if (task_error_bound < 0.0) throw ValidationError("task error bound must be >= 0");
  if (framework_mem_overhead < 0) {
    throw ValidationError("framework memory overhead must be >= 0");
  }
  if (forced_passes && *forced_passes < 0) {
    throw ValidationError("forced pass count must be >= 0");
  }
  device.Validate();
}

DeviceSpec UnboundedDevice() {
  DeviceSpec d;
  d.name = "unbounded";
  d.mem_bytes = std::numeric_limits<int64_t>::max();
  d.peak_gops = std::numeric_limits<double>::infinity();
  d.efficiency = 1.0;
  return d;
}

// ---- splitting -------------------------------------------------------------

namespace {

int64_t CeilDiv(int64_t a, int64_t b) { return (a + b - 1) / b; }

bool Divisible(const LayerSpec& l) {
  return HasWidth(l.kind) && !(l.kind == LayerKind::kConvolution && l.depthwise);
}

std::string CopyId(const LayerSpec& l, int branch) {
  const std::string& base = l.origin.empty() ? l.id : l.origin;
  return base + "_b" + std::to_string(branch);
}

}  // namespace

SplitModel WrapUnsplit(const ModelGraph& g, StemMode stem) {
  Validate(g);
  SplitModel sm;
  sm.graph = g;
  sm.split_count = 1;
  sm.provenance.original_model = g.name;
  sm.provenance.stem = stem;

  const LayerSpec* classifier = nullptr;
  for (const LayerSpec& l : g.layers) {
    if (l.kind == LayerKind::kClassifierFc) {
      if (classifier) {
        throw ValidationError("model '" + g.name + "' has more than one classifier_fc");
      }
      classifier = &l;
    }
  }
  if (!classifier) {
    throw ValidationError("model '" + g.name +
                          "' has no classifier_fc layer to keep shared");
  }

  // Ancestors of the classifier are branch material.
  std::unordered_map<std::string, const LayerSpec*> by_id;
  for (const LayerSpec& l : g.layers) by_id[l.id] = &l;
  std::unordered_set<std::string> ancestors;
  std::vector<std::string> stack(classifier->predecessors.begin(),
                                 classifier->predecessors.end());
  while (!stack.empty()) {
    std::string id = stack.back();
    stack.pop_back();
    if (!ancestors.insert(id).second) continue;
    for (const std::string& p : by_id.at(id)->predecessors) stack.push_back(p);
  }

  std::unordered_set<std::string> stem_layers;
  if (stem == StemMode::kShared) {
    const std::vector<size_t> order = TopologicalOrder(g);
    size_t i = 0;
    for (; i < order.size(); ++i) {
      const LayerSpec& l = g.layers[order[i]];
      stem_layers.insert(l.id);
      if (IsWeighted(l.kind)) break;
    }
    // Layers without their own width (including depthwise convolutions)
    // fed only by the stem stay with it, so shortcuts
    // leave the stem as one shared tensor.
    for (++i; i < order.size(); ++i) {
      const LayerSpec& l = g.layers[order[i]];
      if (Divisible(l)) continue;
      const bool fed_by_stem =
          std::all_of(l.predecessors.begin(), l.predecessors.end(),
                      [&](const std::string& p) { return stem_layers.count(p) > 0; });
      if (fed_by_stem) stem_layers.insert(l.id);
    }
  }
  for (LayerSpec& l : sm.graph.layers) {
    l.origin = l.id;
    const bool branch_material = ancestors.count(l.id) &&
                                 l.kind != LayerKind::kInput &&
                                 !stem_layers.count(l.id);
    l.branch = branch_material ? 0 : -1;
  }
  return sm;
}

ModelGraph DivideWidths(const SplitModel& current, int factor, int* new_count) {
  const ModelGraph& g = current.graph;
  std::unordered_map<std::string, const LayerSpec*> by_id;
  for (const LayerSpec& l : g.layers) by_id[l.id] = &l;

  // Ids of the copies that replace each branch layer.
  std::unordered_map<std::string, std::vector<std::string>> copies;
  for (const LayerSpec& l : g.layers) {
    if (l.branch < 0) continue;
    for (int r = 0; r < factor; ++r) {
      copies[l.id].push_back(CopyId(l, l.branch * factor + r));
    }
  }

  ModelGraph out;
  out.name = g.name;
  out.input_shape = g.input_shape;
  out.element_bits = g.element_bits;
  for (const LayerSpec& l : g.layers) {
    if (l.branch < 0) {
      LayerSpec s = l;
      s.predecessors.clear();
      for (const std::string& p : l.predecessors) {
        if (by_id.at(p)->branch < 0) {
          s.predecessors.push_back(p);
          continue;
        }
        const auto& cs = copies.at(p);
        if (l.kind == LayerKind::kConcat || cs.size() == 1) {
          s.predecessors.insert(s.predecessors.end(), cs.begin(), cs.end());
          continue;
        }
        // A shared consumer of branch outputs gathers them explicitly.
        LayerSpec gather;
        gather.id = l.id + "_gather";
        gather.origin = gather.id;
        gather.kind = LayerKind::kConcat;
        gather.branch = -1;
        gather.predecessors = cs;
        out.layers.push_back(gather);
        s.predecessors.push_back(gather.id);
      }
      out.layers.push_back(std::move(s));
      continue;
    }
    for (int r = 0; r < factor; ++r) {
      LayerSpec c = l;
      c.branch = l.branch * factor + r;
      c.id = CopyId(l, c.branch);
      if (c.origin.empty()) c.origin = l.id;
      if (Divisible(l)) c.width = CeilDiv(l.width, factor);
      c.predecessors.clear();
      for (const std::string& p : l.predecessors) {
        if (by_id.at(p)->branch < 0) {
          c.predecessors.push_back(p);
        } else {
          // The width-sliced layer still reads every slice of its input.
          const auto& cs = copies.at(p);
          c.predecessors.insert(c.predecessors.end(), cs.begin(), cs.end());
        }
      }
      out.layers.push_back(std::move(c));
    }
  }
  if (new_count) *new_count = current.split_count * factor;
  return out;
}

ModelGraph RemoveNonBranchConnections(const ModelGraph& g) {
  std::unordered_map<std::string, int> branch_of;
  for (const LayerSpec& l : g.layers) branch_of[l.id] = l.branch;
  ModelGraph out = g;
  for (LayerSpec& l : out.layers) {
    if (l.branch < 0 || l.kind == LayerKind::kInput) continue;
    std::vector<std::string> kept;
    for (const std::string& p : l.predecessors) {
      auto it = branch_of.find(p);
      const int pb = it == branch_of.end() ? -1 : it->second;
      if (pb == l.branch || pb < 0) kept.push_back(p);
    }
    if (kept.empty()) {
      throw ValidationError("layer '" + l.id +
                            "' has no same-branch predecessor after removing "
                            "cross-branch connections");
    }
    l.predecessors = std::move(kept);
  }
  return out;
}

std::vector<BranchFit> CheckFit(const SplitModel& sm, const SplitConfig& cfg) {
  const ShapeMap shapes = InferShapes(sm.graph);
  const int bits = sm.graph.element_bits;
  std::vector<BranchFit> fits;
  for (int b = 0; b < sm.split_count; ++b) {
    std::vector<const LayerSpec*> layers = sm.BranchLayers(b);
    if (b == 0) {
      for (const LayerSpec* l : sm.SharedLayers()) {
        if (l->kind != LayerKind::kInput) layers.push_back(l);
      }
    }
    FootprintReport fp = FootprintOfLayers(sm.graph, shapes, bits, layers);
    BranchFit f;
    f.branch = b;
    f.mem_bytes = fp.model_bytes + fp.peak_activation_bytes + cfg.framework_mem_overhead;
    const double ops_s = cfg.device.effective_ops_s();
    f.compute_s = std::isinf(ops_s) ? 0.0 : 2.0 * static_cast<double>(fp.total_macs) / ops_s;
    f.fits_mem = f.mem_bytes <= cfg.device.mem_bytes;
    f.fits_compute = f.compute_s <= cfg.latency_budget_s;
    int64_t best = -1;
    for (const LayerFootprint& lf : fp.per_layer) {
      if (lf.params > best) {
        best = lf.params;
        f.largest_layer = lf.id;
      }
    }
    fits.push_back(std::move(f));
  }
  return fits;
}

namespace {

bool AllFit(const std::vector<BranchFit>& fits) {
  return std::all_of(fits.begin(), fits.end(), [](const BranchFit& f) {
    return f.fits_mem && f.fits_compute;
  });
}

std::string DescribeMisfit(const std::vector<BranchFit>& fits, const SplitConfig& cfg) {
  for (const BranchFit& f : fits) {
    if (f.fits_mem && f.fits_compute) continue;
    std::ostringstream os;
    os << "branch " << f.branch << " needs " << f.mem_bytes << " B (device "
       << cfg.device.mem_bytes << " B) and " << f.compute_s << " s (budget "
       << cfg.latency_budget_s << " s); limiting layer '" << f.largest_layer << "'";
    return os.str();
  }
  return "fits";
}

}  // namespace

SplitModel Split(const ModelGraph& g, const SplitConfig& cfg) {
  cfg.Validate();
  SplitModel sm = WrapUnsplit(g, cfg.stem);
  sm.provenance.division_factor = cfg.division_factor;

  int passes = 0;
  while (true) {
    if (cfg.forced_passes) {
      if (passes >= *cfg.forced_passes) break;
    } else {
      std::vector<BranchFit> fits = CheckFit(sm, cfg);
      if (AllFit(fits)) break;
      // Nothing left to divide: only shared layers would remain.
      const bool has_width = std::any_of(
          sm.graph.layers.begin(), sm.graph.layers.end(), [](const LayerSpec& l) {
            return l.branch >= 0 && Divisible(l) && l.width > 1;
          });
      if (!has_width) {
        throw InfeasibleError("device cannot fit even the maximal split: " +
                              DescribeMisfit(fits, cfg));
      }
    }
    for (const LayerSpec& l : sm.graph.layers) {
      if (l.branch >= 0 && Divisible(l) && l.width <= 1) {
        throw InfeasibleError("over-split: layer '" + l.id +
                              "' has width 1 and cannot be divided again");
      }
    }
    int count = 0;
    ModelGraph divided = DivideWidths(sm, cfg.division_factor, &count);
    sm.graph = RemoveNonBranchConnections(divided);
    sm.split_count = count;
    ++passes;
    sm.provenance.division_steps = passes;
  }
  InferShapes(sm.graph);
  return sm;
}

SplitModel Fatten(const SplitModel& sm, double percent) {
  if (percent < 0.0) throw ValidationError("fatten percent must be >= 0");
  SplitModel out = sm;
  if (percent == 0.0) return out;
  for (LayerSpec& l : out.graph.layers) {
    if (l.branch < 0 || !Divisible(l)) continue;
    const double scaled = static_cast<double>(l.width) * (1.0 + percent);
    l.width = static_cast<int64_t>(std::ceil(scaled - 1e-9 * scaled));
  }
  out.provenance.fatten_percent =
      (1.0 + sm.provenance.fatten_percent) * (1.0 + percent) - 1.0;
  InferShapes(out.graph);
  return out;
}

// ---- design loop -----------------------------------------------------------

AccuracyTable AccuracyTable::Parse(const std::string& text) {
  std::map<std::string, double> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      s.erase(0, s.find_first_not_of(ws));
      s.erase(s.find_last_not_of(ws) + 1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("accuracy table line " + std::to_string(lineno) +
                       ": expected 'key,top1'");
    }
    std::string key = trim(line.substr(0, comma));
    std::string value = trim(line.substr(comma + 1));
    if (key == "key" || key == "model") continue;
    try {
      size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      rows[key] = v;
    } catch (const std::exception&) {
      throw ParseError("accuracy table line " + std::to_string(lineno) +
                       ": top1 '" + value + "' is not a number");
    }
  }
  return AccuracyTable(std::move(rows));
}

double AccuracyTable::Lookup(const std::string& key) const {
  auto it = rows_.find(key);
  if (it == rows_.end()) {
    throw ValidationError("accuracy table has no entry for '" + key + "'");
  }
  return it->second;
}

AccuracyOracle AccuracyTable::AsOracle() const {
  return [table = *this](const SplitModel& sm) { return table.Lookup(sm.ProvenanceKey()); };
}

DesignResult DesignLoop(const ModelGraph& g, const SplitConfig& cfg,
                        const AccuracyOracle& oracle) {
  const double original = oracle(WrapUnsplit(g, cfg.stem));
  const double bound_points = cfg.task_error_bound * 100.0;

  DesignResult result;
  SplitModel base = Split(g, cfg);
  auto evaluate = [&](const SplitModel& candidate) {
    DesignStep step;
    step.key = candidate.ProvenanceKey();
    step.accuracy = oracle(candidate);
    step.gap = original - step.accuracy;
    result.trace.push_back(step);
    return step.gap <= bound_points + 1e-12;
  };
  if (evaluate(base)) {
    result.model = std::move(base);
    return result;
  }
  const int steps = static_cast<int>(
      std::floor(cfg.fatten_cap_percent / cfg.fatten_step_percent + 1e-9));
  for (int i = 1; i <= steps; ++i) {
    SplitModel candidate = Fatten(base, cfg.fatten_step_percent * i);
    if (evaluate(candidate)) {
      result.model = std::move(candidate);
      return result;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::ostringstream trace;
  for (const DesignStep& s : result.trace) {
    best = std::min(best, s.gap);
    trace << " " << s.key << "=" << s.accuracy << " (gap " << s.gap << ")";
  }
  std::ostringstream msg;
  msg << "fattening reached the " << cfg.fatten_cap_percent * 100.0
      << "% cap without meeting the error bound; best gap " << best
      << " points; trace:" << trace.str();
  throw InfeasibleError(msg.str());
}

int CountBranchComponents(const ModelGraph& g) {
  std::unordered_map<std::string, size_t> index;
  std::vector<const LayerSpec*> nodes;
  for (const LayerSpec& l : g.layers) {
    if (l.branch < 0) continue;
    index[l.id] = nodes.size();
    nodes.push_back(&l);
  }
  std::vector<size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (const std::string& p : nodes[i]->predecessors) {
      auto it = index.find(p);
      if (it != index.end()) parent[find(i)] = find(it->second);
    }
  }
  std::unordered_set<size_t> roots;
  for (size_t i = 0; i < nodes.size(); ++i) roots.insert(find(i));
  return static_cast<int>(roots.size());
}

}  // namespace lcp
