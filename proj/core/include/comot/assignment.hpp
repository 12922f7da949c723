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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "comot/matching.hpp"
#include "comot/reduction.hpp"
#include "comot/tracklets.hpp"

namespace comot {

struct GroundTruthObject {
  TrackId id = 0;
  BoundingBox box;
  std::size_t class_id = 0;

  Target target() const { return {box, class_id}; }
};

/// One frame's ground truth split into objects tracked in the previous frame
/// and newborns.
struct FrameGroundTruth {
  std::vector<GroundTruthObject> tracked;
  std::vector<GroundTruthObject> newborn;

  std::size_t size() const { return tracked.size() + newborn.size(); }
  bool contains(TrackId id) const;
  /// Throws std::invalid_argument on duplicate identities.
  void validate() const;
};

enum class LabelMode { kTala, kCola };

std::string_view to_string(LabelMode mode);
LabelMode parse_label_mode(std::string_view text);

/// Supervision target of a query: a ground-truth identity or background.
class LabelTarget {
 public:
  static LabelTarget background() { return LabelTarget(); }
  static LabelTarget identity(TrackId id) { return LabelTarget(id); }

  bool is_background() const { return background_; }
  /// Throws std::logic_error for background.
  TrackId id() const;
  std::string describe() const;

  friend bool operator==(const LabelTarget&, const LabelTarget&) = default;

 private:
  LabelTarget() = default;
  explicit LabelTarget(TrackId id) : background_(false), id_(id) {}

  bool background_ = true;
  TrackId id_ = 0;
};

struct TrackTarget {
  TrackId track = 0;
  LabelTarget target;
};

/// Which targets each query family may be matched against at one layer.
struct LayerTargets {
  std::vector<TrackTarget> track_targets;
  std::vector<GroundTruthObject> detection_candidates;
};

// `live_tracks` are the identities held by tracking sets. `layer` is
// 1-based and must satisfy 1 <= layer <= layers.
LayerTargets tala_targets(const FrameGroundTruth& gt, std::span<const TrackId> live_tracks,
                          int layer, int layers);
LayerTargets cola_targets(const FrameGroundTruth& gt, std::span<const TrackId> live_tracks,
                          int layer, int layers);
LayerTargets layer_targets(LabelMode mode, const FrameGroundTruth& gt,
                           std::span<const TrackId> live_tracks, int layer, int layers);

/// Cost of every (detection set, shadow, target) triple.
class SetCostTensor {
 public:
  SetCostTensor() = default;
  SetCostTensor(std::size_t sets, std::size_t shadows, std::size_t targets, double fill = 0.0);

  std::size_t sets() const { return sets_; }
  std::size_t shadows() const { return shadows_; }
  std::size_t targets() const { return targets_; }

  double& at(std::size_t set, std::size_t shadow, std::size_t target) {
    return values_[(set * shadows_ + shadow) * targets_ + target];
  }
  double at(std::size_t set, std::size_t shadow, std::size_t target) const {
    return values_[(set * shadows_ + shadow) * targets_ + target];
  }

 private:
  std::size_t sets_ = 0;
  std::size_t shadows_ = 0;
  std::size_t targets_ = 0;
  std::vector<double> values_;
};

/// Entry (i, k) of the result is lambda over shadows j of t(i, j, k).
CostMatrix reduce_set_costs(const SetCostTensor& t, Reduction lambda);

/// Predictions of one query set, one entry per shadow.
using SetPredictions = std::vector<Prediction>;

/// Per set, per shadow supervision targets.
using SetLabels = std::vector<std::vector<LabelTarget>>;

struct DetectionMatch {
  SetCostTensor costs;
  CostMatrix reduced;
  Assignment assignment;
  SetLabels labels;
};

/// One-to-set matching of detection sets: pair costs per shadow, lambda
/// reduction per set, Hungarian on the reduced matrix, then the set's match
/// is shared by all of its shadows. Unmatched sets get background.
DetectionMatch assign_detection_sets(std::span<const SetPredictions> preds,
                                     std::span<const GroundTruthObject> candidates,
                                     const CostWeights& weights, Reduction lambda);

/// Tracking sets inherit their stored identity when it is present in `gt`
/// and get background otherwise. A set without an identity is background.
/// Throws std::invalid_argument on duplicate identities.
SetLabels assign_tracking_sets(std::span<const std::optional<TrackId>> identities,
                               std::size_t n_shadows, const FrameGroundTruth& gt);

/// Complete supervision for one decoder layer.
struct LabelAssignment {
  int layer = 0;
  LayerTargets targets;
  SetLabels tracking;
  SetLabels detection;
  DetectionMatch detection_match;
};

LabelAssignment assign_layer(LabelMode mode, const FrameGroundTruth& gt,
                             std::span<const std::optional<TrackId>> track_identities,
                             std::span<const SetPredictions> detection_preds,
                             std::size_t n_shadows, int layer, int layers,
                             const CostWeights& weights, Reduction lambda);

}  // namespace comot
