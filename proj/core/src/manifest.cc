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

#include "lcp/manifest.h"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <memory>

#include "json.hpp"
#include "lcp/error.h"
#include "lcp/model_io.h"

#ifndef LCP_VERSION
#define LCP_VERSION "0.0.0"
#endif

namespace lcp {

std::string Sha256Hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw IoError("sha256 computation failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string Sha256File(const std::filesystem::path& path) {
  return Sha256Hex(ReadTextFile(path));
}

FileDigest DigestOf(const std::filesystem::path& path) {
  return {path.string(), Sha256File(path)};
}

std::string ToolVersion() { return LCP_VERSION; }

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json Digests(const std::vector<FileDigest>& files) {
  ordered_json arr = ordered_json::array();
  for (const FileDigest& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
  return arr;
}

std::vector<FileDigest> ReadDigests(const json& arr) {
  std::vector<FileDigest> out;
  for (const json& e : arr) {
    out.push_back({e.at("path").get<std::string>(), e.at("sha256").get<std::string>()});
  }
  return out;
}

}  // namespace

std::string SerializeManifest(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["argv"] = m.argv;
  j["inputs"] = Digests(m.inputs);
  j["outputs"] = Digests(m.outputs);
  j["config"] = ordered_json::parse(m.config_json);
  j["tool_version"] = m.tool_version;
  j["seed"] = m.seed;
  j["timestamp"] = m.timestamp;
  return j.dump(2) + "\n";
}

RunManifest ParseManifest(std::string_view text) {
  try {
    json j = json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.inputs = ReadDigests(j.at("inputs"));
    m.outputs = ReadDigests(j.at("outputs"));
    m.config_json = j.at("config").dump();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.timestamp = j.at("timestamp").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
}

}  // namespace lcp
