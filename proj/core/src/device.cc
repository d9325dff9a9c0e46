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

#include "lcp/device.h"

#include <cmath>

#include "lcp/error.h"

namespace lcp {

void DeviceSpec::Validate() const {
  if (mem_bytes <= 0) {
    throw ValidationError("device '" + name + "': mem_bytes must be positive");
  }
  if (!(peak_gops > 0.0) || !(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ValidationError("device '" + name +
                          "': peak_gops must be positive and efficiency in (0, 1]");
  }
  if (active_power_w < 0.0 || idle_power_w < 0.0) {
    throw ValidationError("device '" + name + "': power must be >= 0");
  }
  if (runtime_overhead_bytes < 0 || swap_bandwidth_bytes_s < 0.0) {
    throw ValidationError("device '" + name +
                          "': runtime overhead and swap bandwidth must be >= 0");
  }
  if (accel) accel->Validate();
}

double JitterSpec::Mean() const {
  switch (kind) {
    case Kind::kNone:
      return 0.0;
    case Kind::kLognormal:
      return scale_s * std::exp(0.5 * sigma * sigma);
    case Kind::kExponentialTail:
      return tail_probability * tail_mean_s;
  }
  return 0.0;
}

void JitterSpec::Validate() const {
  if (sigma < 0.0 || scale_s < 0.0 || tail_mean_s < 0.0) {
    throw ValidationError("jitter parameters must be >= 0");
  }
  if (!(tail_probability >= 0.0 && tail_probability <= 1.0)) {
    throw ValidationError("jitter tail probability must lie in [0, 1]");
  }
}

double NetworkSpec::TransmitSeconds(int64_t payload_bytes) const {
  return static_cast<double>(payload_bytes + per_message_overhead_bytes) * 8.0 /
         bandwidth_bps;
}

void NetworkSpec::Validate() const {
  if (!(bandwidth_bps > 0.0)) {
    throw ValidationError("network '" + name + "': bandwidth must be positive");
  }
  if (base_latency_s < 0.0 || per_message_overhead_bytes < 0) {
    throw ValidationError("network '" + name +
                          "': latency and message overhead must be >= 0");
  }
  jitter.Validate();
}

}  // namespace lcp
