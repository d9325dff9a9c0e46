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

#ifndef LCP_PRESETS_H_
#define LCP_PRESETS_H_

// Device, network and accelerator presets are JSON files under
// <config dir>/{devices,networks,accel}/<name>.json. The config dir is
// $LCP_CONFIG_DIR when set, else the directory the library was built with.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lcp/accel.h"
#include "lcp/device.h"

namespace lcp {

enum class PresetKind { kDevice, kNetwork, kAccel };

std::filesystem::path ConfigDir();
// Bundled model files: $LCP_MODELS_DIR when set, else the build-time default.
std::filesystem::path ModelsDir();
std::string_view PresetSubdir(PresetKind kind);

// Preset names available for a kind, sorted.
std::vector<std::string> ListPresets(PresetKind kind);

// `ref` is a preset name or a path to a JSON file (anything containing '/' or
// ending in ".json"). Unknown names throw ValidationError listing the presets.
std::filesystem::path ResolvePreset(PresetKind kind, const std::string& ref);

DeviceSpec ParseDevice(std::string_view json_text);
NetworkSpec ParseNetwork(std::string_view json_text);
accel::AccelConfig ParseAccel(std::string_view json_text);

DeviceSpec LoadDevice(const std::string& ref);
NetworkSpec LoadNetwork(const std::string& ref);
accel::AccelConfig LoadAccel(const std::string& ref);

std::string SerializeDevice(const DeviceSpec& d);
std::string SerializeNetwork(const NetworkSpec& n);
std::string SerializeAccel(const accel::AccelConfig& a);

}  // namespace lcp

#endif  // LCP_PRESETS_H_
