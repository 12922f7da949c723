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

#include <gtest/gtest.h>

#include "comot/config.hpp"

namespace comot {
namespace {

TEST(ParseRunConfig, DefaultsAndOverrides) {
  const RunConfig cfg = parse_run_config(R"(
# comment
shadow.ns = 5
shadow.lambda = mean   # trailing comment
tracker.mode = tala
scene.occlusions = 3:10-20;5:30-40
cost.preset = literal
seed = 17
)");
  EXPECT_EQ(cfg.tracker.shadow.n_shadows, 5);
  EXPECT_EQ(cfg.tracker.shadow.lambda, Reduction::kMean);
  EXPECT_EQ(cfg.tracker.shadow.phi, Reduction::kMin);
  EXPECT_EQ(cfg.tracker.mode, LabelMode::kTala);
  EXPECT_EQ(cfg.scene.occlusions, (std::vector<Occlusion>{{3, 10, 20}, {5, 30, 40}}));
  EXPECT_EQ(cfg.cost.w_l1, 1.0);
  EXPECT_EQ(cfg.seed, 17u);
  EXPECT_EQ(cfg.tracker.layers, 6);
  EXPECT_EQ(cfg.tracker.n_detection_sets, 60u);
}

TEST(ParseRunConfig, UnknownKeyNamesLine) {
  try {
    parse_run_config("shadow.ns = 3\nshadow.nss = 4\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("shadow.nss"), std::string::npos);
  }
}

TEST(ParseRunConfig, Errors) {
  EXPECT_THROW(parse_run_config("shadow.ns = 3\nshadow.ns = 4\n"), ConfigError);
  EXPECT_THROW(parse_run_config("shadow.ns\n"), ConfigError);
  EXPECT_THROW(parse_run_config("shadow.ns = three\n"), ConfigError);
  EXPECT_THROW(parse_run_config("shadow.phi = median\n"), ConfigError);
  EXPECT_THROW(parse_run_config("shadow.tau = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_run_config("scene.occlusions = 3:10\n"), ConfigError);
  EXPECT_THROW(parse_run_config("cost.preset = fancy\n"), ConfigError);
}

TEST(Flatten, CoversEveryKeyAndRoundTrips) {
  RunConfig cfg;
  cfg.tracker.shadow.tau = 0.3;
  cfg.oracle.box_noise = 0.017;
  cfg.scene.occlusions = {{2, 3, 4}};
  const auto flat = flatten(cfg);
  EXPECT_EQ(flat.size() + 1, config_keys().size());  // all but cost.preset
  std::string text;
  for (const auto& [k, v] : flat) text += k + " = " + v + "\n";
  const RunConfig back = parse_run_config(text);
  EXPECT_EQ(flatten(back), flat);
  EXPECT_EQ(back.oracle.box_noise, 0.017);
}

TEST(ConfigReference, ListsDefaults) {
  const std::string ref = config_reference();
  for (const ConfigKey& k : config_keys()) EXPECT_NE(ref.find(k.key), std::string::npos) << k.key;
  EXPECT_NE(ref.find("shadow.tau = 0.5"), std::string::npos);
}

TEST(Occlusions, FormatParse) {
  const std::vector<Occlusion> o{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(parse_occlusions(format_occlusions(o)), o);
  EXPECT_TRUE(parse_occlusions("").empty());
}

}  // namespace
}  // namespace comot
