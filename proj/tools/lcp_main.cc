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

// lcp: command-line front end. Every command writes its outputs and a
// manifest.json into --output-dir.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lcp/accel.h"
#include "lcp/analytics.h"
#include "lcp/error.h"
#include "lcp/graph.h"
#include "lcp/manifest.h"
#include "lcp/model_io.h"
#include "lcp/presets.h"
#include "lcp/report.h"
#include "lcp/scenario.h"
#include "lcp/simulator.h"
#include "lcp/splitter.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Globals {
  uint64_t seed = 0;
  bool seed_given = false;
  std::string output_dir = ".";
  std::string format;  // empty: both
  int jobs = 1;
};

bool WantJson(const Globals& g) { return g.format.empty() || g.format == "json"; }
bool WantCsv(const Globals& g) { return g.format.empty() || g.format == "csv"; }

// Collects outputs and inputs of one command and writes its manifest.
class Run {
 public:
  Run(std::string command, std::vector<std::string> argv, fs::path dir)
      : dir_(std::move(dir)) {
    m_.command = std::move(command);
    m_.argv = std::move(argv);
    m_.tool_version = lcp::ToolVersion();
    fs::create_directories(dir_);
  }

  void Input(const fs::path& p) {
    const lcp::FileDigest d = lcp::DigestOf(p);
    for (const lcp::FileDigest& e : m_.inputs) {
      if (e.path == d.path) return;
    }
    m_.inputs.push_back(d);
  }

  void Write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    lcp::WriteTextFile(p, content);
    m_.outputs.push_back({name, lcp::Sha256Hex(content)});
  }

  void Config(const ordered_json& cfg) { m_.config_json = cfg.dump(); }
  void Seed(uint64_t seed) { m_.seed = seed; }

  void Finish() {
    m_.timestamp = lcp::UtcTimestamp();
    lcp::WriteTextFile(dir_ / "manifest.json", lcp::SerializeManifest(m_));
  }

 private:
  fs::path dir_;
  lcp::RunManifest m_;
};

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

lcp::StemMode ParseStem(const std::string& s) {
  if (s == "shared") return lcp::StemMode::kShared;
  if (s == "replicated") return lcp::StemMode::kReplicated;
  throw lcp::ValidationError("stem must be 'replicated' or 'shared', got '" + s + "'");
}

void PrintBranches(const lcp::SplitModel& sm) {
  const lcp::ShapeMap shapes = lcp::InferShapes(sm.graph);
  std::cout << sm.ProvenanceKey() << ": " << sm.split_count << " branches, signature "
            << lcp::LayerSignature(sm.graph) << "\n";
  for (int b = 0; b < sm.split_count; ++b) {
    lcp::FootprintReport f = lcp::FootprintOfLayers(sm.graph, shapes, sm.graph.element_bits,
                                                    sm.BranchLayers(b));
    std::cout << "  branch " << b << ": " << f.total_params << " params, " << f.total_macs
              << " MACs, " << lcp::MemBytes(f) << " bytes\n";
  }
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeOpts {
  std::string model;
  int element_bits = 0;
};

void CmdAnalyze(const AnalyzeOpts& o, const Globals& gl, Run& run) {
  run.Input(o.model);
  const lcp::ModelDocument doc = lcp::LoadModelDocument(o.model);
  const lcp::ModelGraph& g = lcp::GraphOf(doc);
  const int bits = o.element_bits > 0 ? o.element_bits : g.element_bits;
  const lcp::FootprintReport f = lcp::TotalFootprint(g, bits);
  run.Config({{"model", o.model}, {"element_bits", bits}});
  if (WantJson(gl)) run.Write("footprint.json", lcp::FootprintJson(g, f));
  if (WantCsv(gl)) run.Write("footprint.csv", lcp::FootprintCsv(g, f));
  std::cout << g.name << ": " << f.total_params << " params (" << Fixed(f.total_params / 1e6, 2)
            << " M), " << f.total_macs << " MACs (" << Fixed(f.total_macs / 1e9, 2)
            << " G), signature " << lcp::LayerSignature(g) << "\n"
            << "  model " << f.model_bytes << " bytes, peak activation "
            << f.peak_activation_bytes << " bytes at " << bits << " bits\n";
}

// ---- split / fatten --------------------------------------------------------

struct SplitOpts {
  std::string model;
  int factor = 2;
  std::string device;
  int passes = -1;
  double fatten_percent = 0.0;
  std::string stem = "replicated";
  int64_t framework_overhead = 0;
  double latency_budget_s = 1.0;
};

lcp::SplitConfig ConfigFor(const SplitOpts& o, Run* run) {
  lcp::SplitConfig cfg;
  cfg.division_factor = o.factor;
  cfg.stem = ParseStem(o.stem);
  cfg.framework_mem_overhead = o.framework_overhead;
  cfg.latency_budget_s = o.latency_budget_s;
  if (!o.device.empty()) {
    const fs::path p = lcp::ResolvePreset(lcp::PresetKind::kDevice, o.device);
    if (run) run->Input(p);
    cfg.device = lcp::LoadDevice(o.device);
    if (o.passes >= 0) cfg.forced_passes = o.passes;
  } else {
    cfg.device = lcp::UnboundedDevice();
    cfg.forced_passes = o.passes >= 0 ? o.passes : 1;
  }
  return cfg;
}

ordered_json SplitConfigJson(const SplitOpts& o) {
  return {{"model", o.model},        {"factor", o.factor},
          {"device", o.device},      {"passes", o.passes},
          {"fatten_percent", o.fatten_percent}, {"stem", o.stem},
          {"framework_overhead", o.framework_overhead},
          {"latency_budget_s", o.latency_budget_s}};
}

void WriteSplit(const lcp::SplitModel& sm, const Globals& gl, Run& run) {
  run.Write(sm.ProvenanceKey() + ".json", lcp::SerializeModel(sm));
  if (WantJson(gl)) run.Write("split_summary.json", lcp::SplitSummaryJson(sm));
  PrintBranches(sm);
}

void CmdSplit(const SplitOpts& o, const Globals& gl, Run& run) {
  run.Input(o.model);
  const lcp::ModelGraph g = lcp::LoadModel(o.model);
  run.Config(SplitConfigJson(o));
  lcp::SplitModel sm = lcp::Split(g, ConfigFor(o, &run));
  if (o.fatten_percent > 0.0) sm = lcp::Fatten(sm, o.fatten_percent / 100.0);
  WriteSplit(sm, gl, run);
}

struct FattenOpts {
  SplitOpts split;
  double percent = -1.0;
  std::string accuracy_table;
  double step_percent = 10.0;
  double error_bound_percent = 3.0;
  double cap_percent = 100.0;
};

void CmdFatten(const FattenOpts& o, const Globals& gl, Run& run) {
  run.Input(o.split.model);
  const lcp::ModelDocument doc = lcp::LoadModelDocument(o.split.model);
  ordered_json cfg = SplitConfigJson(o.split);
  cfg["percent"] = o.percent;
  cfg["accuracy_table"] = o.accuracy_table;
  cfg["step_percent"] = o.step_percent;
  cfg["error_bound_percent"] = o.error_bound_percent;
  cfg["cap_percent"] = o.cap_percent;
  run.Config(cfg);

  if (o.accuracy_table.empty()) {
    if (o.percent < 0.0) {
      throw lcp::ValidationError("fatten needs --percent or --accuracy-table");
    }
    const auto* sm = std::get_if<lcp::SplitModel>(&doc);
    if (!sm) throw lcp::ValidationError("fatten --percent needs a split model document");
    WriteSplit(lcp::Fatten(*sm, o.percent / 100.0), gl, run);
    return;
  }
  if (!std::holds_alternative<lcp::ModelGraph>(doc)) {
    throw lcp::ValidationError("the design loop starts from an unsplit model");
  }
  run.Input(o.accuracy_table);
  const lcp::AccuracyTable table =
      lcp::AccuracyTable::Parse(lcp::ReadTextFile(o.accuracy_table));
  lcp::SplitConfig scfg = ConfigFor(o.split, &run);
  scfg.fatten_step_percent = o.step_percent / 100.0;
  scfg.task_error_bound = o.error_bound_percent / 100.0;
  scfg.fatten_cap_percent = o.cap_percent / 100.0;
  const lcp::DesignResult result =
      lcp::DesignLoop(std::get<lcp::ModelGraph>(doc), scfg, table.AsOracle());
  std::string trace = "key,top1,gap\n";
  for (const lcp::DesignStep& s : result.trace) {
    trace += s.key + "," + lcp::FormatNumber(s.accuracy) + "," + lcp::FormatNumber(s.gap) + "\n";
  }
  run.Write("design_trace.csv", trace);
  WriteSplit(result.model, gl, run);
}

// ---- compare ---------------------------------------------------------------

struct CompareOpts {
  std::string model;
  std::vector<std::string> strategies{"data_parallel", "model_parallel_output_split", "lcp"};
  std::vector<int> devices_n{2, 4, 8};
  int element_bits = 0;
  std::string source = "dedicated";
  std::string stem = "replicated";
};

void CmdCompare(const CompareOpts& o, const Globals& gl, Run& run) {
  run.Input(o.model);
  const lcp::ModelGraph g = lcp::LoadModel(o.model);
  std::vector<lcp::Strategy> strategies;
  for (const std::string& name : o.strategies) {
    std::optional<lcp::StrategyKind> kind = lcp::StrategyFromName(name);
    if (!kind && name == "input") kind = lcp::StrategyKind::kModelParallelInputSplit;
    if (!kind) throw lcp::ValidationError("unknown strategy '" + name + "'");
    for (int n : o.devices_n) strategies.push_back({*kind, n});
  }
  lcp::AnalyticsOptions opt;
  opt.element_bits = o.element_bits;
  if (o.source == "colocated") {
    opt.source = lcp::SourceMode::kColocated;
  } else if (o.source != "dedicated") {
    throw lcp::ValidationError("source must be 'dedicated' or 'colocated'");
  }
  const std::vector<lcp::StrategyRow> rows =
      lcp::CompareStrategies(g, strategies, opt, ParseStem(o.stem));
  run.Config({{"model", o.model},
              {"strategies", o.strategies},
              {"devices_n", o.devices_n},
              {"element_bits", o.element_bits},
              {"source", o.source},
              {"stem", o.stem}});
  const std::string csv = lcp::CompareCsv(rows);
  if (WantCsv(gl)) run.Write("compare.csv", csv);
  if (WantJson(gl)) run.Write("compare.json", lcp::CompareJson(rows));
  std::cout << csv;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOpts {
  std::vector<std::string> scenarios;
  double bucket_width_s = 0.01;
  bool trace = false;
};

std::string TraceCsv(const lcp::SimResult& r) {
  std::string out = "inference,node,kind,start_s,end_s,label\n";
  for (const lcp::TraceEvent& e : *r.trace) {
    out += std::to_string(e.inference) + "," + std::to_string(e.node) + "," +
           (e.kind == lcp::TraceEvent::Kind::kCompute ? "compute" : "transmit") + "," +
           lcp::FormatNumber(e.start_s) + "," + lcp::FormatNumber(e.end_s) + "," + e.label +
           "\n";
  }
  return out;
}

void CmdSimulate(const SimulateOpts& o, const Globals& gl, Run& run) {
  struct Job {
    lcp::Scenario scenario;
    lcp::ScenarioRun result;
    std::string error;
    int exit_code = 0;
  };
  std::vector<Job> jobs;
  ordered_json cfg = {{"scenarios", o.scenarios},
                      {"bucket_width_s", o.bucket_width_s},
                      {"trace", o.trace}};
  for (const std::string& path : o.scenarios) {
    run.Input(path);
    Job j;
    j.scenario = lcp::LoadScenario(path);
    j.scenario.options.record_trace = o.trace;
    if (gl.seed_given) j.scenario.options.seed = gl.seed;
    run.Input(j.scenario.model_path);
    jobs.push_back(std::move(j));
  }
  run.Config(cfg);
  run.Seed(jobs.empty() ? gl.seed : jobs.front().scenario.options.seed);

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i].result = lcp::RunScenario(jobs[i].scenario);
      } catch (const lcp::Error& e) {
        jobs[i].error = e.what();
        jobs[i].exit_code = lcp::ExitCodeFor(e);
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::max(1, std::min<int>(gl.jobs, static_cast<int>(jobs.size())));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (const Job& j : jobs) {
    if (j.exit_code != 0) {
      if (j.exit_code == 3) throw lcp::InfeasibleError(j.scenario.name + ": " + j.error);
      throw lcp::ValidationError(j.scenario.name + ": " + j.error);
    }
    const std::string prefix = jobs.size() == 1 ? "" : j.scenario.name + "/";
    const lcp::SimResult& r = j.result.result;
    if (WantJson(gl)) run.Write(prefix + "sim_result.json", lcp::SimResultJson(r));
    if (WantCsv(gl)) {
      run.Write(prefix + "latencies.csv", lcp::LatencyCsv(r));
      run.Write(prefix + "histogram.csv",
                lcp::HistogramCsv(lcp::LatencyHistogram(r, o.bucket_width_s)));
    }
    if (o.trace) run.Write(prefix + "trace.csv", TraceCsv(r));
    std::cout << j.scenario.name << ": mean " << Fixed(r.mean_s * 1e3, 3) << " ms, p50 "
              << Fixed(r.p50_s * 1e3, 3) << " ms, p95 " << Fixed(r.p95_s * 1e3, 3)
              << " ms, max " << Fixed(r.max_s * 1e3, 3) << " ms, energy "
              << Fixed(r.energy_j_total, 4) << " J/inference";
    if (j.result.calibrated_efficiency) {
      std::cout << " (calibrated efficiency " << Fixed(*j.result.calibrated_efficiency, 6) << ")";
    }
    std::cout << "\n";
  }
}

// ---- accel -----------------------------------------------------------------

struct AccelOpts {
  std::string model;
  std::string preset = "fpga-z7020";
  int quant = 0;
  double prune = 0.0;
};

void CmdAccel(const AccelOpts& o, const Globals& gl, Run& run) {
  run.Input(o.model);
  const fs::path preset = lcp::ResolvePreset(lcp::PresetKind::kAccel, o.preset);
  run.Input(preset);
  const lcp::accel::AccelConfig cfg = lcp::LoadAccel(o.preset);
  const lcp::ModelDocument doc = lcp::LoadModelDocument(o.model);
  const lcp::ModelGraph& g = lcp::GraphOf(doc);
  run.Config({{"model", o.model}, {"preset", o.preset}, {"quant", o.quant}, {"prune", o.prune}});

  const lcp::accel::ModelTiming base = lcp::accel::ModelLatency(g, cfg);
  lcp::accel::ModelTiming timing = base;
  if (o.quant > 0 || o.prune > 0.0) {
    lcp::accel::QuantPruneSpec qp;
    qp.quant_bits = o.quant > 0 ? o.quant : g.element_bits;
    qp.prune_fraction = o.prune;
    timing = lcp::accel::ModelLatency(lcp::accel::ApplyQuantPrune(g, qp), cfg);
  }
  if (WantJson(gl)) run.Write("accel.json", lcp::AccelJson(g.name, cfg, timing));
  if (WantCsv(gl)) run.Write("accel.csv", lcp::AccelCsv(timing));
  std::cout << g.name << " on " << cfg.name << ": " << Fixed(timing.latency_s * 1e3, 3)
            << " ms, " << Fixed(timing.ops / timing.latency_s / 1e9, 2) << " GOPs/s (peak "
            << Fixed(lcp::accel::PeakThroughput(cfg) / 1e9, 1) << ")\n";
  if (o.quant > 0 || o.prune > 0.0) {
    std::cout << "  baseline " << Fixed(base.latency_s * 1e3, 3) << " ms, speedup "
              << Fixed(base.latency_s / timing.latency_s, 3) << "x\n";
  }
}

// ---- report ----------------------------------------------------------------

int Dispatch(std::vector<std::string> args);

struct ReportOpts {
  std::string manifest;
  bool rerun = false;
};

int CmdReport(const ReportOpts& o) {
  const lcp::RunManifest m = lcp::ParseManifest(lcp::ReadTextFile(o.manifest));
  const fs::path dir = fs::path(o.manifest).parent_path();
  int bad = 0;
  std::cout << "command: " << m.command << " (lcp " << m.tool_version << ", seed " << m.seed
            << ", " << m.timestamp << ")\n";
  for (const lcp::FileDigest& f : m.inputs) {
    const bool ok = fs::exists(f.path) && lcp::Sha256File(f.path) == f.sha256;
    bad += ok ? 0 : 1;
    std::cout << (ok ? "  ok       input  " : "  MISMATCH input  ") << f.path << "\n";
  }
  for (const lcp::FileDigest& f : m.outputs) {
    const fs::path p = dir / f.path;
    const bool ok = fs::exists(p) && lcp::Sha256File(p) == f.sha256;
    bad += ok ? 0 : 1;
    std::cout << (ok ? "  ok       output " : "  MISMATCH output ") << f.path << "\n";
  }
  if (o.rerun) {
    const fs::path tmp = fs::temp_directory_path() /
                         ("lcp-rerun-" + lcp::Sha256Hex(o.manifest + lcp::UtcTimestamp()).substr(0, 12));
    std::vector<std::string> args = m.argv;
    args.insert(args.begin(), {"--output-dir", tmp.string()});
    const int rc = Dispatch(args);
    if (rc != 0) {
      std::cout << "  rerun failed with exit code " << rc << "\n";
      ++bad;
    }
    for (const lcp::FileDigest& f : m.outputs) {
      const fs::path p = tmp / f.path;
      const bool ok = fs::exists(p) && lcp::Sha256File(p) == f.sha256;
      bad += ok ? 0 : 1;
      std::cout << (ok ? "  ok       rerun  " : "  MISMATCH rerun  ") << f.path << "\n";
    }
    fs::remove_all(tmp);
  }
  if (bad) throw lcp::ValidationError(std::to_string(bad) + " digest mismatch(es)");
  std::cout << "manifest verified\n";
  return 0;
}

// ---- dispatch --------------------------------------------------------------

// argv without the program name and without --output-dir, for the manifest.
std::vector<std::string> RecordedArgs(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--output-dir" || args[i] == "-o") {
      ++i;
      continue;
    }
    if (args[i].rfind("--output-dir=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

int Dispatch(std::vector<std::string> args) {
  CLI::App app{"Low-communication parallelization toolkit", "lcp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", lcp::ToolVersion());
  Globals gl;
  app.add_option("--seed", gl.seed, "Seed for stochastic commands");
  app.add_option("-o,--output-dir", gl.output_dir, "Directory for outputs and manifest");
  app.add_option("--format", gl.format, "Restrict outputs to json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", gl.jobs, "Parallel sweep points")->check(CLI::PositiveNumber);

  AnalyzeOpts analyze;
  CLI::App* a = app.add_subcommand("analyze", "Parameter, MAC and memory footprint");
  a->add_option("model", analyze.model, "Model file")->required();
  a->add_option("--element-bits", analyze.element_bits, "Element width override");

  auto add_split_opts = [](CLI::App* c, SplitOpts& s) {
    c->add_option("model", s.model, "Model file")->required();
    c->add_option("--factor", s.factor, "Division factor per pass");
    c->add_option("--device", s.device, "Device preset the branches must fit");
    c->add_option("--passes", s.passes, "Exact number of division passes");
    c->add_option("--stem", s.stem, "replicated or shared");
    c->add_option("--framework-overhead", s.framework_overhead, "Per-device framework bytes");
    c->add_option("--latency-budget", s.latency_budget_s, "Per-branch compute budget (s)");
  };
  SplitOpts split;
  CLI::App* s = app.add_subcommand("split", "Split a model into independent branches");
  add_split_opts(s, split);
  s->add_option("--fatten", split.fatten_percent, "Fatten the split model by this percent");

  FattenOpts fatten;
  CLI::App* f = app.add_subcommand("fatten", "Fatten a split model or run the design loop");
  add_split_opts(f, fatten.split);
  f->add_option("--percent", fatten.percent, "Fatten percent for a split model");
  f->add_option("--accuracy-table", fatten.accuracy_table, "key,top1 CSV for the design loop");
  f->add_option("--step", fatten.step_percent, "Fatten step in percent");
  f->add_option("--error-bound", fatten.error_bound_percent, "Accuracy bound in percent");
  f->add_option("--cap", fatten.cap_percent, "Maximum fatten percent");

  CompareOpts compare;
  CLI::App* c = app.add_subcommand("compare", "Footprint and communication per strategy");
  c->add_option("model", compare.model, "Model file")->required();
  c->add_option("--strategies", compare.strategies, "Strategies")->delimiter(',');
  c->add_option("--devices-n", compare.devices_n, "Device counts")->delimiter(',');
  c->add_option("--element-bits", compare.element_bits, "Element width override");
  c->add_option("--source", compare.source, "dedicated or colocated camera");
  c->add_option("--stem", compare.stem, "replicated or shared");

  SimulateOpts simulate;
  CLI::App* m = app.add_subcommand("simulate", "Discrete-event simulation of a scenario");
  m->add_option("scenarios", simulate.scenarios, "Scenario files")->required();
  m->add_option("--bucket-width", simulate.bucket_width_s, "Histogram bucket (s)");
  m->add_flag("--trace", simulate.trace, "Write the event trace");

  AccelOpts accel;
  CLI::App* x = app.add_subcommand("accel", "Systolic-array latency model");
  x->add_option("model", accel.model, "Model file")->required();
  x->add_option("--preset", accel.preset, "Accelerator preset");
  x->add_option("--quant", accel.quant, "Quantize to this many bits");
  x->add_option("--prune", accel.prune, "Structured pruning fraction");

  ReportOpts report;
  CLI::App* r = app.add_subcommand("report", "Verify a run manifest");
  r->add_option("manifest", report.manifest, "manifest.json")->required();
  r->add_flag("--rerun", report.rerun, "Re-run the command and compare outputs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  gl.seed_given = app.count("--seed") > 0;

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == r) return CmdReport(report);
    Run run(sub->get_name(), RecordedArgs(args), gl.output_dir);
    run.Seed(gl.seed);
    if (sub == a) CmdAnalyze(analyze, gl, run);
    if (sub == s) CmdSplit(split, gl, run);
    if (sub == f) CmdFatten(fatten, gl, run);
    if (sub == c) CmdCompare(compare, gl, run);
    if (sub == m) CmdSimulate(simulate, gl, run);
    if (sub == x) CmdAccel(accel, gl, run);
    run.Finish();
    return 0;
  } catch (const lcp::Error& e) {
    std::cerr << "lcp: " << e.what() << "\n";
    return lcp::ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "lcp: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  return Dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
