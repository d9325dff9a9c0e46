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

#ifndef LCP_BENCHMARKS_BENCH_MODELS_H_
#define LCP_BENCHMARKS_BENCH_MODELS_H_

#include <string>

#include "lcp/model_io.h"

namespace lcp::bench {

inline ModelGraph Bundled(const std::string& name) {
  return LoadModel(std::string(LCP_BENCH_MODELS_DIR) + "/" + name + ".json");
}

// Argument index -> bundled model, for benchmarks registered over models.
inline const char* ModelName(int index) {
  static const char* kNames[] = {"lenet", "alexnet_v2", "vgg16", "resnet50", "mobilenet_v1"};
  return kNames[index];
}

}  // namespace lcp::bench

#endif  // LCP_BENCHMARKS_BENCH_MODELS_H_
