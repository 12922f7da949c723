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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "comot/assignment.hpp"
#include "comot/shadow.hpp"
#include "comot/tracklets.hpp"

namespace comot {

struct TrackerConfig {
  ShadowConfig shadow;
  int layers = 6;
  std::size_t n_detection_sets = 60;
  /// Consecutive frames a track may stay at or below tau before removal.
  int patience = 0;
  /// Only affects training-target emission, never inference.
  LabelMode mode = LabelMode::kCola;

  void validate() const;
};

/// Final-layer output of one shadow set.
struct SetPrediction {
  std::vector<ScoredBox> shadows;
  /// Decoder memory handed forward with the set (see ShadowSet::latent).
  std::optional<TrackId> latent;
};

struct FrameOutput {
  TrackId id = 0;
  BoundingBox box;
  double score = 0.0;
};

struct FrameResult {
  int frame = 0;
  std::vector<FrameOutput> outputs;
  std::vector<TrackId> births;
  std::vector<TrackId> deaths;
};

/// Inference-time shadow-set tracker.
///
/// Each frame the caller supplies one SetPrediction per live set, tracks
/// first (in tracks() order) followed by the detection bank. A set is alive
/// when the phi-reduction of its shadow scores exceeds tau; its output is the
/// highest-scoring shadow. Detection sets that pass are promoted whole into
/// the track bank under a new identity. Identities are never reused.
class Tracker {
 public:
  Tracker(TrackerConfig cfg, std::uint64_t seed);

  const TrackerConfig& config() const { return cfg_; }
  /// Frame index (1-based) the next step() call will process.
  int next_frame() const { return frame_ + 1; }

  std::span<const ShadowSet> tracks() const { return tracks_; }
  std::span<const ShadowSet> detection_bank() const { return bank_; }
  std::size_t live_set_count() const { return tracks_.size() + bank_.size(); }

  /// Throws std::invalid_argument on a prediction/set cardinality mismatch.
  FrameResult step(std::span<const SetPrediction> predictions);

 private:
  TrackerConfig cfg_;
  std::vector<ShadowSet> bank_;
  std::vector<ShadowSet> tracks_;
  std::vector<int> misses_;
  TrackId next_id_ = 1;
  int frame_ = 0;
};

void append(Tracklets& tracklets, const FrameResult& result);

using PredictionSource = std::function<std::vector<SetPrediction>(
    int frame, std::span<const ShadowSet> tracks, std::span<const ShadowSet> detection_bank)>;

/// Steps the tracker over `n_frames` frames, asking `source` for each
/// frame's predictions, and folds the results into tracklets.
Tracklets run(Tracker& tracker, int n_frames, const PredictionSource& source);

/// Same, over a pre-recorded prediction stream.
Tracklets run(Tracker& tracker, std::span<const std::vector<SetPrediction>> frames);

}  // namespace comot
