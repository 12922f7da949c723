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
#include <string>
#include <string_view>
#include <vector>

#include "comot/assignment.hpp"
#include "comot/geometry.hpp"
#include "comot/shadow.hpp"
#include "comot/tracker.hpp"
#include "comot/tracklets.hpp"

namespace comot {

enum class NewbornSchedule {
  kAllAtStart,  // enclosed scene: every object present from frame 1
  kUniform,     // birth frames spread uniformly over the sequence
};

std::string_view to_string(NewbornSchedule schedule);
NewbornSchedule parse_newborn_schedule(std::string_view text);

struct Occlusion {
  TrackId object = 0;
  int start = 0;  // inclusive, 1-based
  int end = 0;    // inclusive

  friend bool operator==(const Occlusion&, const Occlusion&) = default;
};

struct SceneConfig {
  int frames = 100;
  int objects = 10;
  NewbornSchedule schedule = NewbornSchedule::kAllAtStart;
  /// Std of the initial per-axis velocity, normalized units per frame.
  double speed = 0.003;
  /// Std of the per-frame Gaussian velocity jitter.
  double jitter = 0.0003;
  double min_size = 0.05;
  double max_size = 0.15;
  std::vector<Occlusion> occlusions;
  ImageSize image;
  int classes = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;

  void validate() const;
};

struct ScenePoint {
  int frame = 0;
  BoundingBox box;
  bool visible = true;

  friend bool operator==(const ScenePoint&, const ScenePoint&) = default;
};

struct SceneTrack {
  TrackId id = 0;
  std::size_t class_id = 0;
  std::vector<ScenePoint> points;  // strictly increasing frames

  friend bool operator==(const SceneTrack&, const SceneTrack&) = default;

  const ScenePoint* at(int frame) const;
};

struct Scene {
  SceneConfig config;
  std::vector<SceneTrack> tracks;  // ascending id

  friend bool operator==(const Scene&, const Scene&) = default;

  int frames() const { return config.frames; }
  const SceneTrack* track(TrackId id) const;
  /// Visible objects at `frame`, ascending id.
  std::vector<GroundTruthObject> visible_objects(int frame) const;
  /// Visible points only; this is what gt.txt contains.
  Tracklets ground_truth() const;
};

/// Constant-velocity objects with Gaussian velocity jitter, reflecting at the
/// image borders. Deterministic in config.seed.
Scene generate_scene(const SceneConfig& cfg);

/// Versioned JSON document: {"version":1, "config":{...}, "tracks":[...]}.
std::string scene_to_json(const Scene& scene);
/// Throws std::runtime_error on malformed input or unsupported version.
Scene scene_from_json(std::string_view text);

struct OracleConfig {
  /// Per-shadow box noise std at layer 1, normalized units.
  double box_noise = 0.01;
  double base_score = 0.9;
  /// Subtracted from the score while the object is occluded.
  double occlusion_drop = 0.6;
  /// Per-shadow, per-frame probability that the score collapses to 0.
  double p_corrupt = 0.0;
  /// Layer l noise is box_noise * refinement^(l - 1).
  double refinement = 0.5;
  /// Probability that an idle detection set fires on a random box.
  double fp_rate = 0.0;
  double fp_score = 0.6;
  double background_score = 0.05;

  friend bool operator==(const OracleConfig&, const OracleConfig&) = default;

  void validate() const;
};

/// Every decoder layer's predictions for all live sets of one frame.
struct DecodedFrame {
  int frame = 0;
  std::size_t n_tracks = 0;
  /// layers[l - 1][set][shadow]; sets are tracks first, then the detection bank.
  std::vector<std::vector<SetPredictions>> layers;
  /// Scene object each set attended to, if any.
  std::vector<std::optional<TrackId>> latents;

  std::size_t n_sets() const { return latents.size(); }
  /// Detection-bank slice of one layer (1-based).
  std::vector<SetPredictions> detection_layer(int layer) const;
  /// Last layer reduced to what the tracker consumes: per shadow the box and
  /// its highest class score.
  std::vector<SetPrediction> final_layer() const;
};

/// Stand-in for the trained decoder.
///
/// Tracking sets follow the object in their latent slot. Detection sets are
/// paired greedily (highest anchor IoU first) with visible objects no live
/// track attends to; idle detection sets emit random boxes at background
/// score, or at fp_score with probability fp_rate.
/// Throws std::out_of_range when `frame` is outside the scene.
DecodedFrame oracle_decode(const Scene& scene, int frame, std::span<const ShadowSet> tracks,
                           std::span<const ShadowSet> detection_bank, const OracleConfig& cfg,
                           int layers, std::uint64_t seed);

/// Splits the visible objects at `frame` into tracked (identity in
/// `tracked_ids`) and newborn.
FrameGroundTruth emit_training_targets(const Scene& scene, int frame,
                                       std::span<const TrackId> tracked_ids);

}  // namespace comot
