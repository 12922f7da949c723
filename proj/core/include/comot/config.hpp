// Copyright 2026 The comot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "comot/matching.hpp"
#include "comot/simulator.hpp"
#include "comot/tracker.hpp"

namespace comot {

/// Every knob of a simulate/track/ablate run.
struct RunConfig {
  SceneConfig scene;
  OracleConfig oracle;
  TrackerConfig tracker;
  CostWeights cost;
  double iou_threshold = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a flat key-value document:
///
///   # comment
///   shadow.ns = 3
///   tracker.mode = tala
///
/// Keys not listed by config_keys() are rejected, as are repeated keys.
/// Errors name the offending line.
RunConfig parse_run_config(std::string_view text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

/// Applies one "key = value" setting; throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

struct ConfigKey {
  std::string key;
  std::string help;
};

/// All recognized keys in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Every key with its resolved value, in config_keys() order. Reals use the
/// shortest round-trip decimal, so the output is byte-stable.
std::vector<std::pair<std::string, std::string>> flatten(const RunConfig& cfg);

/// Human-readable listing of keys, defaults and descriptions.
std::string config_reference();

std::string format_occlusions(const std::vector<Occlusion>& occlusions);
/// "3:10-20;5:30-40" -> object 3 hidden on frames 10..20, object 5 on 30..40.
std::vector<Occlusion> parse_occlusions(std::string_view text);

}  // namespace comot
