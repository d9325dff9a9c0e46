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

#include "testing/sim_oracles.h"

#include <algorithm>

#include "lcp/analytics.h"
#include "lcp/splitter.h"

namespace lcp::testing {

DeviceSpec Plain(double gops, double eff) {
  DeviceSpec d;
  d.name = "plain";
  d.mem_bytes = int64_t{1} << 40;
  d.peak_gops = gops;
  d.efficiency = eff;
  return d;
}

NetworkSpec Net(double bps, double latency) {
  NetworkSpec n;
  n.bandwidth_bps = bps;
  n.base_latency_s = latency;
  return n;
}

SplitModel Branches(const ModelGraph& g, int passes) {
  SplitConfig cfg;
  cfg.device = UnboundedDevice();
  cfg.forced_passes = passes;
  return Split(g, cfg);
}

double MacSeconds(const ModelGraph& g, const std::vector<const LayerSpec*>& layers,
                  const DeviceSpec& d) {
  const FootprintReport f = FootprintOfLayers(g, InferShapes(g), g.element_bits, layers);
  return 2.0 * static_cast<double>(f.total_macs) / d.effective_ops_s();
}

double LcpCriticalPath(const SplitModel& sm, const std::vector<DeviceSpec>& dev,
                       const NetworkSpec& net) {
  const ShapeMap shapes = InferShapes(sm.graph);
  const int64_t in_bytes = shapes.at(sm.graph.input().id).bytes();
  const double tx_in = net.TransmitSeconds(in_bytes);
  double ready_for_tail = 0.0;
  double device0_free = 0.0;
  for (int i = 0; i < sm.split_count; ++i) {
    const double arrival = (i + 1) * tx_in + net.base_latency_s;
    const double done = arrival + MacSeconds(sm.graph, sm.BranchLayers(i), dev[i]);
    if (i == 0) {
      device0_free = done;
      ready_for_tail = std::max(ready_for_tail, done);
    } else {
      const int64_t bytes = shapes.at(sm.PreFinal(i).id).bytes();
      ready_for_tail =
          std::max(ready_for_tail, done + net.TransmitSeconds(bytes) + net.base_latency_s);
    }
  }
  return std::max(ready_for_tail, device0_free) +
         MacSeconds(sm.graph, sm.SharedTail(), dev[0]);
}

}  // namespace lcp::testing
