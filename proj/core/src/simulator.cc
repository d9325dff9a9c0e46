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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <utility>

#include "lcp/accel.h"
#include "lcp/error.h"

namespace lcp {

// ---- per-device work -------------------------------------------------------

namespace {

struct LayerCost {
  int64_t params = 0;
  int64_t macs = 0;
  int64_t in_bytes = 0;
  int64_t out_bytes = 0;
};

LayerCost CostOf(const ModelGraph& g, const ShapeMap& shapes, const LayerSpec& l) {
  const TensorShape in = InputShapeOf(g, l, shapes);
  const TensorShape& out = shapes.at(l.id);
  LayerCost c;
  c.params = LayerParams(l, in);
  c.macs = LayerMacs(l, in, out);
  c.in_bytes = l.kind == LayerKind::kInput ? 0 : in.elements() * g.element_bits / 8;
  c.out_bytes = out.elements() * g.element_bits / 8;
  return c;
}

double WeightBytes(const ModelGraph& g, const ShapeMap& shapes,
                   const std::vector<WorkItem>& work) {
  double bytes = 0.0;
  for (const WorkItem& w : work) {
    bytes += w.fraction * static_cast<double>(CostOf(g, shapes, *w.layer).params) *
             g.element_bits / 8.0;
  }
  return bytes;
}

}  // namespace

bool Oversubscribed(const ModelGraph& g, const ShapeMap& shapes,
                    const std::vector<WorkItem>& work, const DeviceSpec& device) {
  double peak = 0.0;
  for (const WorkItem& w : work) {
    const LayerCost c = CostOf(g, shapes, *w.layer);
    peak = std::max(peak, static_cast<double>(c.in_bytes) +
                              w.fraction * static_cast<double>(c.out_bytes));
  }
  const double need = WeightBytes(g, shapes, work) + peak +
                      static_cast<double>(device.runtime_overhead_bytes);
  return need > static_cast<double>(device.mem_bytes);
}

double ComputeSeconds(const ModelGraph& g, const ShapeMap& shapes,
                      const std::vector<WorkItem>& work, const DeviceSpec& device,
                      bool paging) {
  double t = 0.0;
  for (const WorkItem& w : work) {
    const LayerSpec& l = *w.layer;
    if (device.accel) {
      const TensorShape in = InputShapeOf(g, l, shapes);
      accel::LayerTiming lt =
          accel::LayerLatency(l, in, shapes.at(l.id), *device.accel, g.element_bits);
      double layer_s = lt.latency_s;
      if (IsWeighted(l.kind)) layer_s += device.accel->switch_overhead_s;
      t += w.fraction * layer_s;
    } else {
      t += w.fraction * 2.0 * static_cast<double>(CostOf(g, shapes, l).macs) /
           device.effective_ops_s();
    }
  }
  if (paging && device.swap_bandwidth_bytes_s > 0.0) {
    t += WeightBytes(g, shapes, work) / device.swap_bandwidth_bytes_s;
  }
  return t;
}

double CalibrateEfficiency(const ModelGraph& g, DeviceSpec device, double target_s) {
  if (device.accel) {
    throw ValidationError("device '" + device.name +
                          "' uses the accelerator model; nothing to calibrate");
  }
  if (!(target_s > 0.0)) throw ValidationError("calibration target must be positive");
  const ShapeMap shapes = InferShapes(g);
  std::vector<WorkItem> work;
  for (const LayerSpec& l : g.layers) work.push_back({&l, 1.0});
  device.efficiency = 1.0;
  const bool paging = Oversubscribed(g, shapes, work, device);
  const double paging_s =
      paging && device.swap_bandwidth_bytes_s > 0.0
          ? WeightBytes(g, shapes, work) / device.swap_bandwidth_bytes_s
          : 0.0;
  const double compute_at_peak = ComputeSeconds(g, shapes, work, device, false);
  if (target_s <= paging_s) {
    throw InfeasibleError("paging alone takes " + std::to_string(paging_s) +
                          " s, above the " + std::to_string(target_s) + " s target");
  }
  const double eff = compute_at_peak / (target_s - paging_s);
  if (eff > 1.0) {
    throw InfeasibleError("device '" + device.name + "' cannot reach " +
                          std::to_string(target_s) + " s even at peak throughput");
  }
  return eff;
}

// ---- event engine ----------------------------------------------------------

namespace {

struct Task {
  int resource = 0;
  double duration = 0.0;
  double post_delay = 0.0;  // propagation after the resource is released
  std::vector<int> deps;
  int node = 0;
  TraceEvent::Kind kind = TraceEvent::Kind::kCompute;
  std::string label;
  int inference = 0;
  // filled by the engine
  double start = 0.0;
  double end = 0.0;
};

class Dag {
 public:
  Dag(int n_devices, const NetworkSpec& net, std::mt19937_64* rng)
      : n_(n_devices), net_(net), rng_(rng) {}

  int LinkOf(int node) const { return node == kSourceNode ? 2 * n_ : n_ + node; }
  int resources() const { return 2 * n_ + 1; }

  int Compute(int device, double seconds, std::string label, std::vector<int> deps) {
    Task t;
    t.resource = device;
    t.duration = seconds;
    t.node = device;
    t.kind = TraceEvent::Kind::kCompute;
    t.label = std::move(label);
    t.deps = Clean(std::move(deps));
    return Add(std::move(t));
  }

  // Returns -1 when sender and receiver coincide (no message).
  int Send(int from, int to, int64_t bytes, std::string label, std::vector<int> deps) {
    if (from == to) return -1;
    Task t;
    t.resource = LinkOf(from);
    t.duration = net_.TransmitSeconds(bytes);
    t.post_delay = net_.base_latency_s + SampleJitter();
    t.node = from;
    t.kind = TraceEvent::Kind::kTransmit;
    t.label = std::move(label);
    t.deps = Clean(std::move(deps));
    return Add(std::move(t));
  }

  void SetInference(int k) { inference_ = k; }
  std::vector<Task>& tasks() { return tasks_; }

 private:
  static std::vector<int> Clean(std::vector<int> deps) {
    deps.erase(std::remove(deps.begin(), deps.end(), -1), deps.end());
    return deps;
  }

  int Add(Task t) {
    t.inference = inference_;
    tasks_.push_back(std::move(t));
    return static_cast<int>(tasks_.size()) - 1;
  }

  double SampleJitter() {
    const JitterSpec& j = net_.jitter;
    switch (j.kind) {
      case JitterSpec::Kind::kNone:
        return 0.0;
      case JitterSpec::Kind::kLognormal: {
        std::normal_distribution<double> z(0.0, 1.0);
        return j.scale_s * std::exp(j.sigma * z(*rng_));
      }
      case JitterSpec::Kind::kExponentialTail: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double draw = u(*rng_);
        std::exponential_distribution<double> e(1.0);
        const double tail = e(*rng_) * j.tail_mean_s;
        return draw < j.tail_probability ? tail : 0.0;
      }
    }
    return 0.0;
  }

  int n_;
  const NetworkSpec& net_;
  std::mt19937_64* rng_;
  std::vector<Task> tasks_;
  int inference_ = 0;
};

// Runs the tasks with index in [first, tasks.size()), released at `release`.
// Resources are FIFO in order of readiness; ties go to the lower task index.
void Run(std::vector<Task>& tasks, size_t first, double release,
         std::vector<double>& resource_free) {
  const size_t count = tasks.size() - first;
  std::vector<int> pending(count, 0);
  std::vector<std::vector<size_t>> succ(count);
  for (size_t i = 0; i < count; ++i) {
    for (int d : tasks[first + i].deps) {
      succ[static_cast<size_t>(d) - first].push_back(i);
      ++pending[i];
    }
  }
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  std::vector<double> ready_at(count, release);
  for (size_t i = 0; i < count; ++i) {
    if (pending[i] == 0) ready.push({release, i});
  }
  while (!ready.empty()) {
    auto [at, i] = ready.top();
    ready.pop();
    Task& t = tasks[first + i];
    double& free = resource_free[static_cast<size_t>(t.resource)];
    t.start = std::max(at, free);
    t.end = t.start + t.duration;
    free = t.end;
    const double done = t.end + t.post_delay;
    for (size_t s : succ[i]) {
      ready_at[s] = std::max(ready_at[s], done);
      if (--pending[s] == 0) ready.push({ready_at[s], s});
    }
  }
}

// ---- DAG builders ----------------------------------------------------------

struct Context {
  const ModelGraph& g;
  ShapeMap shapes;
  const std::vector<DeviceSpec>& devices;
  std::vector<bool> paging;  // per device
  int64_t in_bytes = 0;
};

double Seconds(const Context& c, int device, const std::vector<WorkItem>& work) {
  return ComputeSeconds(c.g, c.shapes, work, c.devices[static_cast<size_t>(device)],
                        c.paging[static_cast<size_t>(device)]);
}

int64_t BytesOf(const Context& c, const std::string& id) {
  return c.shapes.at(id).elements() * c.g.element_bits / 8;
}

std::vector<WorkItem> Items(const std::vector<const LayerSpec*>& layers) {
  std::vector<WorkItem> out;
  for (const LayerSpec* l : layers) out.push_back({l, 1.0});
  return out;
}

// The builders return the tasks whose completion ends the inference.
using Builder = std::function<std::vector<int>(Dag&, int inference)>;

std::vector<int> DistinctDevices(const std::vector<int>& assignment) {
  std::vector<int> out;
  for (int d : assignment) {
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  return out;
}

}  // namespace

// ---- placement -------------------------------------------------------------

Placement DefaultPlacement(const SplitModel& sm, const Strategy& s, int n_devices) {
  if (s.kind != StrategyKind::kLcp) return DefaultPlacement(sm.graph, s, n_devices);
  if (n_devices < sm.split_count) {
    throw ValidationError("lcp placement needs one device per branch: " +
                          std::to_string(sm.split_count) + " branches, " +
                          std::to_string(n_devices) + " devices");
  }
  Placement p;
  for (int b = 0; b < sm.split_count; ++b) p.assignment.push_back(b % n_devices);
  return p;
}

Placement DefaultPlacement(const ModelGraph& g, const Strategy& s, int n_devices) {
  if (s.kind == StrategyKind::kLcp) {
    throw ValidationError("lcp strategy requires a split model; '" + g.name +
                          "' is unsplit");
  }
  if (n_devices < s.n_devices) {
    throw ValidationError("strategy needs " + std::to_string(s.n_devices) +
                          " devices, only " + std::to_string(n_devices) + " given");
  }
  Placement p;
  for (int i = 0; i < s.n_devices; ++i) p.assignment.push_back(i % n_devices);
  return p;
}

// ---- simulation ------------------------------------------------------------

namespace {

void CheckPlacement(const Placement& p, size_t units, const std::vector<DeviceSpec>& devices) {
  const int n = static_cast<int>(devices.size());
  if (p.assignment.size() != units) {
    throw ValidationError("placement assigns " + std::to_string(p.assignment.size()) +
                          " work units, strategy has " + std::to_string(units));
  }
  for (size_t u = 0; u < units; ++u) {
    if (p.assignment[u] < 0 || p.assignment[u] >= n) {
      throw ValidationError("work unit " + std::to_string(u) + " placed on unknown device " +
                            std::to_string(p.assignment[u]));
    }
  }
  if (p.aggregator < 0 || p.aggregator >= n) {
    throw ValidationError("aggregator " + std::to_string(p.aggregator) +
                          " is not a device id");
  }
  if (p.source != kSourceNode && (p.source < 0 || p.source >= n)) {
    throw ValidationError("source " + std::to_string(p.source) + " is not a device id");
  }
}

double Quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double UnionLength(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  double total = 0.0;
  double cur_start = 0.0, cur_end = -std::numeric_limits<double>::infinity();
  for (const auto& [s, e] : iv) {
    if (e <= s) continue;
    if (s > cur_end) {
      if (cur_end > cur_start) total += cur_end - cur_start;
      cur_start = s;
      cur_end = e;
    } else {
      cur_end = std::max(cur_end, e);
    }
  }
  if (cur_end > cur_start) total += cur_end - cur_start;
  return total;
}

EnergyReport EnergyFromTasks(const std::vector<TraceEvent>& events, double makespan,
                             int n_inferences, const std::vector<DeviceSpec>& devices) {
  const size_t n = devices.size();
  std::vector<std::vector<std::pair<double, double>>> busy(n);
  for (const TraceEvent& e : events) {
    if (e.node >= 0 && static_cast<size_t>(e.node) < n) {
      busy[static_cast<size_t>(e.node)].push_back({e.start_s, e.end_s});
    }
  }
  EnergyReport r;
  for (size_t d = 0; d < n; ++d) {
    const double b = UnionLength(busy[d]);
    const double idle = std::max(0.0, makespan - b);
    r.busy_s.push_back(b);
    r.idle_s.push_back(idle);
    const double j = (b * devices[d].active_power_w + idle * devices[d].idle_power_w) /
                     static_cast<double>(n_inferences);
    r.per_device_j.push_back(j);
    r.total_j += j;
  }
  return r;
}

SimResult RunSimulation(int n_units, const Builder& build,
                        const std::vector<DeviceSpec>& devices, const NetworkSpec& net,
                        const SimOptions& opt) {
  (void)n_units;
  if (opt.n_inferences < 1) throw ValidationError("n_inferences must be >= 1");
  const int n = static_cast<int>(devices.size());
  std::mt19937_64 rng(opt.seed);
  Dag dag(n, net, &rng);
  std::vector<double> resource_free(static_cast<size_t>(dag.resources()), 0.0);

  SimResult r;
  r.seed = opt.seed;
  r.n_devices = n;
  std::vector<std::pair<size_t, std::vector<int>>> finals;
  double release = 0.0;
  std::vector<double> releases;
  for (int k = 0; k < opt.n_inferences; ++k) {
    dag.SetInference(k);
    const size_t first = dag.tasks().size();
    std::vector<int> fin = build(dag, k);
    releases.push_back(opt.pipelined ? 0.0 : release);
    if (!opt.pipelined) {
      Run(dag.tasks(), first, release, resource_free);
      double done = release;
      for (int f : fin) {
        const Task& t = dag.tasks()[static_cast<size_t>(f)];
        done = std::max(done, t.end + t.post_delay);
      }
      r.latencies_s.push_back(done - release);
      release = done;
    }
    finals.push_back({first, std::move(fin)});
  }
  if (opt.pipelined) {
    Run(dag.tasks(), 0, 0.0, resource_free);
    for (const auto& [first, fin] : finals) {
      double done = 0.0;
      for (int f : fin) {
        const Task& t = dag.tasks()[static_cast<size_t>(f)];
        done = std::max(done, t.end + t.post_delay);
      }
      r.latencies_s.push_back(done);
    }
  }
  std::vector<TraceEvent> events;
  events.reserve(dag.tasks().size());
  double makespan = 0.0;
  for (const Task& t : dag.tasks()) {
    makespan = std::max(makespan, t.end + t.post_delay);
    events.push_back({t.inference, t.node, t.kind, t.start, t.end, t.label});
  }
  for (size_t k = 0; k < r.latencies_s.size(); ++k) {
    makespan = std::max(makespan, releases[k] + r.latencies_s[k]);
  }
  r.makespan_s = makespan;
  r.throughput_ips = makespan > 0 ? opt.n_inferences / makespan : 0.0;
  r.RecomputeStats();
  EnergyReport e = EnergyFromTasks(events, makespan, opt.n_inferences, devices);
  r.energy_j_per_device = e.per_device_j;
  r.energy_j_total = e.total_j;
  if (opt.record_trace) r.trace = std::move(events);
  return r;
}

std::vector<bool> PagingFlags(const Context& c,
                              const std::vector<std::vector<WorkItem>>& per_device) {
  std::vector<bool> out;
  for (size_t d = 0; d < c.devices.size(); ++d) {
    out.push_back(!per_device[d].empty() &&
                  Oversubscribed(c.g, c.shapes, per_device[d], c.devices[d]));
  }
  return out;
}

int64_t FrameBytes(const ModelGraph& g, const SimOptions& opt) {
  int64_t elements = 1;
  for (int64_t d : g.input_shape) elements *= d;
  const int bits = opt.input_bits > 0 ? opt.input_bits : g.element_bits;
  return elements * bits / 8;
}

void CheckCommon(const std::vector<DeviceSpec>& devices, const NetworkSpec& net) {
  if (devices.empty()) throw ValidationError("simulation needs at least one device");
  for (const DeviceSpec& d : devices) d.Validate();
  net.Validate();
}

}  // namespace

void SimResult::RecomputeStats() {
  if (latencies_s.empty()) {
    mean_s = p50_s = p95_s = max_s = 0.0;
    return;
  }
  double sum = 0.0;
  for (double l : latencies_s) sum += l;
  mean_s = sum / static_cast<double>(latencies_s.size());
  std::vector<double> sorted = latencies_s;
  std::sort(sorted.begin(), sorted.end());
  p50_s = Quantile(sorted, 0.50);
  p95_s = Quantile(sorted, 0.95);
  max_s = sorted.back();
}

SimResult Simulate(const SplitModel& sm, const Strategy& s, const Placement& placement,
                   const std::vector<DeviceSpec>& devices, const NetworkSpec& net,
                   const SimOptions& opt) {
  if (s.kind != StrategyKind::kLcp) {
    return Simulate(sm.graph, s, placement, devices, net, opt);
  }
  CheckCommon(devices, net);
  if (s.n_devices < sm.split_count) {
    throw ValidationError("lcp needs at least one device per branch: " +
                          std::to_string(sm.split_count) + " branches, " +
                          std::to_string(s.n_devices) + " devices");
  }
  CheckPlacement(placement, static_cast<size_t>(sm.split_count), devices);

  Context c{sm.graph, InferShapes(sm.graph), devices, {}, FrameBytes(sm.graph, opt)};
  const int agg = placement.aggregator;
  std::vector<const LayerSpec*> head;
  for (const LayerSpec* l : sm.SharedHead()) {
    if (l->kind != LayerKind::kInput) head.push_back(l);
  }
  const std::vector<const LayerSpec*> tail = sm.SharedTail();

  std::vector<std::vector<WorkItem>> per_device(devices.size());
  for (int b = 0; b < sm.split_count; ++b) {
    for (const WorkItem& w : Items(sm.BranchLayers(b))) {
      per_device[static_cast<size_t>(placement.assignment[b])].push_back(w);
    }
  }
  for (const WorkItem& w : Items(head)) per_device[agg].push_back(w);
  for (const WorkItem& w : Items(tail)) per_device[agg].push_back(w);
  c.paging = PagingFlags(c, per_device);

  std::vector<double> branch_s;
  std::vector<int64_t> prefinal_bytes;
  for (int b = 0; b < sm.split_count; ++b) {
    branch_s.push_back(Seconds(c, placement.assignment[b], Items(sm.BranchLayers(b))));
    prefinal_bytes.push_back(BytesOf(c, sm.PreFinal(b).id));
  }
  const double head_s = head.empty() ? 0.0 : Seconds(c, agg, Items(head));
  const double tail_s = Seconds(c, agg, Items(tail));
  int64_t stem_bytes = 0;
  if (!head.empty()) {
    std::set<std::string> feeds;
    for (const LayerSpec* l : sm.BranchLayers(0)) {
      for (const std::string& p : l->predecessors) {
        if (sm.graph.Find(p)->branch < 0) feeds.insert(p);
      }
    }
    for (const std::string& f : feeds) stem_bytes += BytesOf(c, f);
  }

  const std::vector<int> branch_devices = DistinctDevices(placement.assignment);
  Builder build = [&](Dag& dag, int) {
    std::vector<int> delivered(devices.size(), -1);
    if (head.empty()) {
      for (int d : branch_devices) {
        delivered[d] = dag.Send(placement.source, d, c.in_bytes, "input", {});
      }
    } else {
      const int in = dag.Send(placement.source, agg, c.in_bytes, "input", {});
      const int stem = dag.Compute(agg, head_s, "stem", {in});
      for (int d : branch_devices) {
        delivered[d] = d == agg ? stem : dag.Send(agg, d, stem_bytes, "stem", {stem});
      }
    }
    std::vector<int> cls_deps;
    for (int b = 0; b < sm.split_count; ++b) {
      const int d = placement.assignment[b];
      const int t = dag.Compute(d, branch_s[b], "branch" + std::to_string(b), {delivered[d]});
      cls_deps.push_back(d == agg ? t : dag.Send(d, agg, prefinal_bytes[b], "gather", {t}));
    }
    return std::vector<int>{dag.Compute(agg, tail_s, "classifier", cls_deps)};
  };
  return RunSimulation(sm.split_count, build, devices, net, opt);
}

SimResult Simulate(const ModelGraph& g, const Strategy& s, const Placement& placement,
                   const std::vector<DeviceSpec>& devices, const NetworkSpec& net,
                   const SimOptions& opt) {
  if (s.kind == StrategyKind::kLcp) {
    throw ValidationError("lcp strategy requires a split model; '" + g.name +
                          "' is unsplit");
  }
  CheckCommon(devices, net);
  const int n = s.n_devices;
  if (n < 1) throw ValidationError("strategy needs at least one device");
  CheckPlacement(placement, static_cast<size_t>(n), devices);
  Context c{g, InferShapes(g), devices, {}, FrameBytes(g, opt)};
  std::vector<const LayerSpec*> ordered;
  for (size_t i : TopologicalOrder(g)) ordered.push_back(&g.layers[i]);
  const int agg = placement.assignment[0];
  std::vector<std::vector<WorkItem>> per_device(devices.size());

  if (s.kind == StrategyKind::kDataParallel) {
    for (int u = 0; u < n; ++u) per_device[placement.assignment[u]] = Items(ordered);
    c.paging = PagingFlags(c, per_device);
    std::vector<double> replica_s;
    for (int u = 0; u < n; ++u) replica_s.push_back(Seconds(c, placement.assignment[u], Items(ordered)));
    Builder build = [&](Dag& dag, int k) {
      const int u = k % n;
      const int d = placement.assignment[u];
      const int in = dag.Send(placement.source, d, c.in_bytes, "input", {});
      return std::vector<int>{dag.Compute(d, replica_s[u], "model", {in})};
    };
    return RunSimulation(n, build, devices, net, opt);
  }

  if (s.kind == StrategyKind::kModelParallelOutputSplit) {
    const std::vector<ParallelStage> stages = OutputSplitStages(g, n, g.element_bits);
    // stage_work[s][u]: slice u's share of every layer in stage s.
    std::vector<std::vector<std::vector<WorkItem>>> stage_work(stages.size());
    for (size_t st = 0; st < stages.size(); ++st) {
      stage_work[st].resize(static_cast<size_t>(n));
      for (const std::string& id : stages[st].layers) {
        const LayerSpec* l = g.Find(id);
        const int64_t ch = std::max<int64_t>(c.shapes.at(id).channels(), 1);
        const std::vector<int64_t> part = PartitionUnits(ch, n);
        for (int u = 0; u < n; ++u) {
          const double f = static_cast<double>(part[u]) / static_cast<double>(ch);
          stage_work[st][u].push_back({l, f});
          per_device[placement.assignment[u]].push_back({l, f});
        }
      }
    }
    c.paging = PagingFlags(c, per_device);
    std::vector<std::vector<double>> stage_s(stages.size(), std::vector<double>(n));
    for (size_t st = 0; st < stages.size(); ++st) {
      for (int u = 0; u < n; ++u) stage_s[st][u] = Seconds(c, placement.assignment[u], stage_work[st][u]);
    }
    const std::vector<int64_t> out_slices = OutputSliceBytes(g, n, g.element_bits);
    Builder build = [&](Dag& dag, int) {
      std::vector<int> prev(static_cast<size_t>(n));
      for (int u = 0; u < n; ++u) {
        const int d = placement.assignment[u];
        const int in = dag.Send(placement.source, d, c.in_bytes, "input", {});
        prev[u] = dag.Compute(d, stage_s[0][u], stages[0].boundary, {in});
      }
      for (size_t st = 1; st < stages.size(); ++st) {
        std::vector<std::vector<int>> inbox(static_cast<size_t>(n));
        for (int u = 0; u < n; ++u) {
          for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            const int m = dag.Send(placement.assignment[u], placement.assignment[v],
                                   stages[st].gather_slice_bytes[u], "allgather", {prev[u]});
            inbox[v].push_back(m == -1 ? prev[u] : m);
          }
        }
        std::vector<int> next(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) {
          inbox[v].push_back(prev[v]);
          next[v] = dag.Compute(placement.assignment[v], stage_s[st][v], stages[st].boundary,
                                inbox[v]);
        }
        prev = std::move(next);
      }
      std::vector<int> fin{prev[0]};
      for (int u = 1; u < n; ++u) {
        const int m = dag.Send(placement.assignment[u], agg, out_slices[u], "output", {prev[u]});
        fin.push_back(m == -1 ? prev[u] : m);
      }
      return fin;
    };
    return RunSimulation(n, build, devices, net, opt);
  }

  // Input splitting: every weighted layer's reduction is sliced; partial sums
  // are reduced on the aggregator, which runs the element-wise layers and
  // scatters the next input.
  struct InputStage {
    const LayerSpec* weighted = nullptr;
    std::vector<const LayerSpec*> follow;  // element-wise layers on the reducer
  };
  std::vector<InputStage> stages;
  std::vector<const LayerSpec*> prologue;
  for (const LayerSpec* l : ordered) {
    const bool full = IsWeighted(l->kind) && !(l->kind == LayerKind::kConvolution && l->depthwise);
    if (full) {
      stages.push_back({l, {}});
    } else if (stages.empty()) {
      prologue.push_back(l);
    } else {
      stages.back().follow.push_back(l);
    }
  }
  if (stages.empty()) throw ValidationError("model '" + g.name + "' has no weighted layer");
  std::vector<std::vector<double>> fracs;
  for (const InputStage& st : stages) {
    const LayerCost cost = CostOf(g, c.shapes, *st.weighted);
    const int64_t cout = std::max<int64_t>(c.shapes.at(st.weighted->id).channels(), 1);
    const int64_t bias = st.weighted->bias ? cout : 0;
    const int64_t k = std::max<int64_t>((cost.params - bias) / cout, 1);
    std::vector<double> f;
    for (int64_t part : PartitionUnits(k, n)) f.push_back(static_cast<double>(part) / k);
    for (int u = 0; u < n; ++u) per_device[placement.assignment[u]].push_back({st.weighted, f[u]});
    for (const WorkItem& w : Items(st.follow)) per_device[agg].push_back(w);
    fracs.push_back(std::move(f));
  }
  c.paging = PagingFlags(c, per_device);
  const std::vector<int64_t> in_slices = [&] {
    const TensorShape in_shape = c.shapes.at(g.input().id);
    const int64_t ch = std::max<int64_t>(in_shape.channels(), 1);
    std::vector<int64_t> out;
    for (int64_t part : PartitionUnits(ch, n)) out.push_back(c.in_bytes / ch * part);
    return out;
  }();
  Builder build = [&](Dag& dag, int) {
    std::vector<int> have(static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) {
      have[u] = dag.Send(placement.source, placement.assignment[u], in_slices[u], "input", {});
    }
    int last = -1;
    for (size_t st = 0; st < stages.size(); ++st) {
      std::vector<int> reduce;
      for (int u = 0; u < n; ++u) {
        const int d = placement.assignment[u];
        const int t = dag.Compute(d, Seconds(c, d, {{stages[st].weighted, fracs[st][u]}}),
                                  stages[st].weighted->id, {have[u]});
        const int m = dag.Send(d, agg, BytesOf(c, stages[st].weighted->id), "reduce", {t});
        reduce.push_back(m == -1 ? t : m);
      }
      last = dag.Compute(agg, Seconds(c, agg, Items(stages[st].follow)), "reduce", reduce);
      if (st + 1 == stages.size()) break;
      const TensorShape next_in = InputShapeOf(g, *stages[st + 1].weighted, c.shapes);
      const int64_t ch = std::max<int64_t>(next_in.channels(), 1);
      const std::vector<int64_t> part = PartitionUnits(ch, n);
      const int64_t per_ch = next_in.elements() / ch * g.element_bits / 8;
      for (int u = 0; u < n; ++u) {
        const int m = dag.Send(agg, placement.assignment[u], part[u] * per_ch, "scatter", {last});
        have[u] = m == -1 ? last : m;
      }
    }
    return std::vector<int>{last};
  };
  return RunSimulation(n, build, devices, net, opt);
}

double Speedup(const SimResult& result, const SimResult& baseline) {
  if (!(result.mean_s > 0.0) || !(baseline.mean_s > 0.0)) {
    throw ValidationError("speedup needs results with positive mean latency");
  }
  return baseline.mean_s / result.mean_s;
}

EnergyReport Energy(const SimResult& result, const std::vector<DeviceSpec>& devices) {
  if (!result.trace) {
    throw ValidationError("energy needs a simulation run with a recorded trace");
  }
  if (devices.size() != static_cast<size_t>(result.n_devices)) {
    throw ValidationError("energy: " + std::to_string(devices.size()) +
                          " device specs for a " + std::to_string(result.n_devices) +
                          "-device result");
  }
  return EnergyFromTasks(*result.trace, result.makespan_s,
                         static_cast<int>(result.latencies_s.size()), devices);
}

Histogram LatencyHistogram(const SimResult& result, double bucket_width_s) {
  if (!(bucket_width_s > 0.0)) throw ValidationError("histogram bucket width must be positive");
  if (result.latencies_s.empty()) throw ValidationError("histogram needs at least one sample");
  Histogram h;
  h.bucket_width_s = bucket_width_s;
  const double lo = *std::min_element(result.latencies_s.begin(), result.latencies_s.end());
  h.origin_s = std::floor(lo / bucket_width_s) * bucket_width_s;
  for (double l : result.latencies_s) {
    const size_t b = static_cast<size_t>(std::floor((l - h.origin_s) / bucket_width_s));
    if (h.counts.size() <= b) h.counts.resize(b + 1, 0);
    ++h.counts[b];
  }
  return h;
}

}  // namespace lcp
