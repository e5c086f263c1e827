// Copyright 2026 The HVAW-D Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HVAWD_CONFIG_H_
#define HVAWD_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "hvawd/bounds.h"
#include "hvawd/features.h"
#include "hvawd/forecaster.h"
#include "hvawd/streams.h"
#include "json.hpp"

namespace hvawd {

struct InputStreamConfig {
  std::filesystem::path path;
  StreamFormat format = StreamFormat::kCsv;
};

// One run, read from a JSON document (see configs/example_run.json).
// Exactly one of `scenario` and `input` is set.
struct RunConfig {
  std::int64_t horizon = 0;
  int dimension = 0;
  KernelSpec kernel;
  double grid_base = 2.0;
  double level2_ridge = 1.0;
  HintPolicy hint;
  // When unset the hint clip defaults to the label bound Y.
  bool hint_clip_explicit = false;
  std::optional<DriftScenario> scenario;
  std::optional<InputStreamConfig> input;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  bool evaluate_bounds = true;
  EnvelopeConstants envelope;
};

// Environment variable that overrides `output_dir`.
inline constexpr const char* kOutputDirEnv = "HVAWD_OUTPUT_DIR";

// Parses and validates. Relative input paths resolve against `base_dir`.
// Throws InvalidArgument with a readable message on any problem, including
// unknown keys and a missing seed.
RunConfig ParseRunConfig(const nlohmann::json& doc,
                         const std::filesystem::path& base_dir = {});

// Reads the file, parses it, and applies the output-directory override.
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Inverse of ParseRunConfig (input paths are written as resolved).
nlohmann::ordered_json RunConfigToJson(const RunConfig& config);

}  // namespace hvawd

#endif  // HVAWD_CONFIG_H_
