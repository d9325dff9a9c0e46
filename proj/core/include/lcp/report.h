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

#ifndef LCP_REPORT_H_
#define LCP_REPORT_H_

// JSON and CSV renderings of the analysis results. CSV column orders are part
// of the interface and must stay stable.

#include <string>
#include <vector>

#include "lcp/accel.h"
#include "lcp/analytics.h"
#include "lcp/graph.h"
#include "lcp/simulator.h"
#include "lcp/split_model.h"

namespace lcp {

inline constexpr const char* kCompareCsvHeader =
    "strategy,n,device,params,macs,mem_bytes,comm_bytes,comm_pairs";
inline constexpr const char* kFootprintCsvHeader = "layer,kind,params,macs,activation_bytes";
inline constexpr const char* kAccelCsvHeader =
    "layer,compute_cycles,bytes,ops,resident,compute_s,memory_s,reuse_s,latency_s";
inline constexpr const char* kHistogramCsvHeader = "bucket_lo_s,bucket_hi_s,count";
inline constexpr const char* kLatencyCsvHeader = "inference,latency_s";

// Shortest decimal form that round-trips a double.
std::string FormatNumber(double v);

std::string FootprintJson(const ModelGraph& g, const FootprintReport& f);
std::string FootprintCsv(const ModelGraph& g, const FootprintReport& f);

std::string SplitSummaryJson(const SplitModel& sm);

std::string CompareJson(const std::vector<StrategyRow>& rows);
std::string CompareCsv(const std::vector<StrategyRow>& rows);

std::string CommJson(const CommReport& r);

std::string AccelJson(const std::string& model, const accel::AccelConfig& cfg,
                      const accel::ModelTiming& t);
std::string AccelCsv(const accel::ModelTiming& t);

std::string SimResultJson(const SimResult& r);
std::string LatencyCsv(const SimResult& r);
std::string HistogramCsv(const Histogram& h);

}  // namespace lcp

#endif  // LCP_REPORT_H_
