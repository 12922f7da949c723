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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "comot/config.hpp"
#include "comot/metrics.hpp"
#include "comot/simulator.hpp"
#include "comot/tracklets.hpp"

namespace comot {

/// Per-layer summary of the label assignment the training targets would
/// produce on this run (mode and lambda from the config).
struct LayerTargetStats {
  int layer = 0;
  /// Mean number of detection sets matched to a target per frame.
  double positives_per_frame = 0.0;
  /// Mean reduced (lambda) cost over matched detection sets; 0 when none.
  double mean_matched_cost = 0.0;
  std::size_t matched = 0;
};

struct PipelineResult {
  Tracklets tracklets;
  std::vector<LayerTargetStats> training_targets;
};

/// Oracle decoder -> tracker over every frame of `scene`.
PipelineResult run_pipeline(const Scene& scene, const RunConfig& cfg,
                            bool with_training_targets = true);

enum class AblationAxis { kLambda, kPhi, kShadows, kInit };

/// Axis values swept in grid order; axes not named keep the base value.
struct AblationGrid {
  std::vector<AblationAxis> axes;
  std::vector<Reduction> lambdas;
  std::vector<Reduction> phis;
  std::vector<int> shadows;
  std::vector<InitMethod> inits;

  std::size_t size() const { return lambdas.size() * phis.size() * shadows.size() * inits.size(); }
};

/// Axis names separated by 'x', '×' or ',': lambda, phi, ns, init.
/// lambda and phi sweep {min, mean, max}; ns sweeps 1..6; init sweeps
/// {rand, copy, noise}.
AblationGrid parse_ablation_grid(std::string_view spec, const RunConfig& base);

struct AblationRow {
  Reduction lambda = Reduction::kMax;
  Reduction phi = Reduction::kMin;
  int shadows = 3;
  InitMethod init = InitMethod::kNoise;
  int trials = 0;
  // Means over trials.
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  double mota = 0.0;
  double idf1 = 0.0;
  double ids = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double train_positives_mid = 0.0;   // layers < L
  double train_positives_last = 0.0;  // layer L
  double train_cost = 0.0;
};

/// Runs every grid cell `trials` times. Trial t uses the same derived seed in
/// every cell, so cells differ only by their configuration. Rows come back in
/// grid order (lambda outermost, init innermost).
std::vector<AblationRow> run_ablation(const Scene& scene, const RunConfig& base,
                                      const AblationGrid& grid, int trials);

std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace comot
