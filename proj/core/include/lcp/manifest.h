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

#ifndef LCP_MANIFEST_H_
#define LCP_MANIFEST_H_

// Every command writes a manifest.json next to its outputs: the argv, the
// SHA-256 of every input and output file, a snapshot of the effective
// configuration and the seed. Re-running the recorded argv reproduces the
// outputs byte for byte; only the timestamp differs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lcp {

struct FileDigest {
  std::string path;
  std::string sha256;

  bool operator==(const FileDigest&) const = default;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  std::string config_json = "{}";  // JSON object text
  std::string tool_version;
  uint64_t seed = 0;
  std::string timestamp;
};

std::string Sha256Hex(std::string_view data);
std::string Sha256File(const std::filesystem::path& path);
FileDigest DigestOf(const std::filesystem::path& path);

std::string ToolVersion();
std::string UtcTimestamp();

std::string SerializeManifest(const RunManifest& m);
RunManifest ParseManifest(std::string_view json_text);

}  // namespace lcp

#endif  // LCP_MANIFEST_H_
