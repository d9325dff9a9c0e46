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

#ifndef LCP_DEVICE_H_
#define LCP_DEVICE_H_

#include <cstdint>
#include <optional>
#include <string>

#include "lcp/accel.h"

namespace lcp {

// Capability of one compute node. With `accel` set, the node's compute time
// comes from the systolic-array model instead of peak_gops * efficiency.
struct DeviceSpec {
  std::string name = "device";
  int64_t mem_bytes = 0;
  double peak_gops = 0.0;  // ops/s in units of 1e9; 1 MAC = 2 ops
  double efficiency = 1.0;
  double active_power_w = 1.0;
  double idle_power_w = 0.1;

  // Resident runtime memory (OS, framework) that competes with the model.
  int64_t runtime_overhead_bytes = 0;
  // When model + activations + runtime exceed mem_bytes, every weight byte is
  // paged in per inference at this rate. Zero disables the paging term.
  double swap_bandwidth_bytes_s = 0.0;

  std::optional<accel::AccelConfig> accel;

  double effective_ops_s() const { return peak_gops * 1e9 * efficiency; }
  void Validate() const;
};

struct JitterSpec {
  enum class Kind { kNone, kLognormal, kExponentialTail };
  Kind kind = Kind::kNone;
  // lognormal: jitter = scale_s * exp(sigma * Z), Z ~ N(0,1).
  double sigma = 0.0;
  double scale_s = 0.0;
  // exponential_tail: with probability tail_probability add Exp(tail_mean_s).
  double tail_probability = 0.0;
  double tail_mean_s = 0.0;

  // Expected jitter per message.
  double Mean() const;
  void Validate() const;
};

struct NetworkSpec {
  std::string name = "network";
  double bandwidth_bps = 0.0;
  double base_latency_s = 0.0;
  JitterSpec jitter;
  int64_t per_message_overhead_bytes = 0;

  // Serialization time of one message on the sender's link.
  double TransmitSeconds(int64_t payload_bytes) const;
  void Validate() const;
};

}  // namespace lcp

#endif  // LCP_DEVICE_H_
