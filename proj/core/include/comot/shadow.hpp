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
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "comot/geometry.hpp"
#include "comot/reduction.hpp"
#include "comot/tracklets.hpp"

namespace comot {

/// One shadow query: a 4-d position (box semantics) and a d-dim embedding.
struct QueryState {
  BoundingBox position;
  std::vector<double> embedding;

  friend bool operator==(const QueryState&, const QueryState&) = default;
};

enum class SetRole { kDetection, kTracking };

enum class InitMethod {
  kRand,   // every shadow drawn independently
  kCopy,   // all shadows equal one per-set base
  kNoise,  // per-set base plus small per-shadow Gaussian noise
};

std::string_view to_string(InitMethod method);
InitMethod parse_init_method(std::string_view text);

struct ShadowConfig {
  int n_shadows = 3;
  InitMethod init = InitMethod::kNoise;
  double sigma_p = 1e-6;
  double sigma_x = 1e-6;
  Reduction lambda = Reduction::kMax;
  Reduction phi = Reduction::kMin;
  double tau = 0.5;
  int embedding_dim = 256;

  void validate() const;
};

/// N_S shadow queries acting as one logical query.
struct ShadowSet {
  std::size_t set_id = 0;
  SetRole role = SetRole::kDetection;
  std::vector<QueryState> shadows;
  /// Present iff role == kTracking.
  std::optional<TrackId> identity;
  /// Opaque decoder memory carried with the set across frames. The oracle
  /// decoder stores the scene object the set attends to here; it plays the
  /// part of the output embedding a trained decoder would hand forward.
  std::optional<TrackId> latent;

  friend bool operator==(const ShadowSet&, const ShadowSet&) = default;

  /// Componentwise mean of the shadow positions.
  BoundingBox anchor() const;
  /// Throws std::invalid_argument if the role/identity pairing or the
  /// shadow count is inconsistent.
  void validate(int n_shadows) const;
};

/// Builds `n_sets` detection sets. Per-set draws come from a stream derived
/// from (seed, set_id), so the result does not depend on evaluation order.
std::vector<ShadowSet> init_query_bank(std::size_t n_sets, const ShadowConfig& cfg,
                                       std::uint64_t seed);

double representative_score(std::span<const double> scores, Reduction phi);

struct ScoredBox {
  BoundingBox box;
  double score = 0.0;

  friend bool operator==(const ScoredBox&, const ScoredBox&) = default;
};

struct SelectedOutput {
  std::size_t shadow = 0;
  ScoredBox prediction;
};

/// Highest-scoring shadow; ties go to the lowest index.
SelectedOutput select_output(std::span<const ScoredBox> predictions);

}  // namespace comot
