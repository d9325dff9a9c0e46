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

#ifndef LCP_MODEL_IO_H_
#define LCP_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "lcp/graph.h"
#include "lcp/split_model.h"

namespace lcp {

// A model document holds either a plain graph or a split model (a graph with
// an embedded "split" provenance block).
using ModelDocument = std::variant<ModelGraph, SplitModel>;

// Parses and validates a model document. Throws ParseError naming the field
// and layer id on schema violations, ValidationError on structural problems.
ModelDocument ParseModelDocument(std::string_view text);
ModelGraph ParseModel(std::string_view text);
SplitModel ParseSplitModel(std::string_view text);

std::string SerializeModel(const ModelGraph& g);
std::string SerializeModel(const SplitModel& sm);

ModelDocument LoadModelDocument(const std::filesystem::path& path);
ModelGraph LoadModel(const std::filesystem::path& path);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Graph view of either document alternative.
const ModelGraph& GraphOf(const ModelDocument& doc);

}  // namespace lcp

#endif  // LCP_MODEL_IO_H_
