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

#include "comot/assignment.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace comot {
namespace {

void check_layer(int layer, int layers) {
  if (layers < 1 || layer < 1 || layer > layers) {
    throw std::invalid_argument("layer " + std::to_string(layer) + " outside [1, " +
                                std::to_string(layers) + "]");
  }
}

// Shared by TALA and COLA: identity binding for tracking sets plus a check
// that the tracked/newborn partition agrees with the live track list.
std::vector<TrackTarget> bind_tracks(const FrameGroundTruth& gt,
                                     std::span<const TrackId> live_tracks) {
  gt.validate();
  const std::unordered_set<TrackId> live(live_tracks.begin(), live_tracks.end());
  if (live.size() != live_tracks.size()) {
    throw std::invalid_argument("duplicate identity in live track list");
  }
  for (const GroundTruthObject& o : gt.tracked) {
    if (!live.contains(o.id)) {
      throw std::invalid_argument("tracked object " + std::to_string(o.id) +
                                  " is not held by any live track");
    }
  }
  for (const GroundTruthObject& o : gt.newborn) {
    if (live.contains(o.id)) {
      throw std::invalid_argument("newborn object " + std::to_string(o.id) +
                                  " is already held by a live track");
    }
  }
  std::vector<TrackTarget> targets;
  targets.reserve(live_tracks.size());
  for (TrackId id : live_tracks) {
    targets.push_back({id, gt.contains(id) ? LabelTarget::identity(id) : LabelTarget::background()});
  }
  return targets;
}

}  // namespace

bool FrameGroundTruth::contains(TrackId id) const {
  const auto has = [id](const GroundTruthObject& o) { return o.id == id; };
  return std::any_of(tracked.begin(), tracked.end(), has) ||
         std::any_of(newborn.begin(), newborn.end(), has);
}

void FrameGroundTruth::validate() const {
  std::unordered_set<TrackId> seen;
  for (const auto* part : {&tracked, &newborn}) {
    for (const GroundTruthObject& o : *part) {
      if (!seen.insert(o.id).second) {
        throw std::invalid_argument("duplicate ground-truth identity " + std::to_string(o.id));
      }
    }
  }
}

std::string_view to_string(LabelMode mode) { return mode == LabelMode::kTala ? "tala" : "cola"; }

LabelMode parse_label_mode(std::string_view text) {
  if (text == "tala") return LabelMode::kTala;
  if (text == "cola") return LabelMode::kCola;
  throw std::invalid_argument("unknown assignment mode '" + std::string(text) +
                              "' (expected tala or cola)");
}

TrackId LabelTarget::id() const {
  if (background_) {
    throw std::logic_error("background target has no identity");
  }
  return id_;
}

std::string LabelTarget::describe() const {
  return background_ ? std::string("bg") : std::to_string(id_);
}

LayerTargets tala_targets(const FrameGroundTruth& gt, std::span<const TrackId> live_tracks,
                          int layer, int layers) {
  check_layer(layer, layers);
  return {bind_tracks(gt, live_tracks), gt.newborn};
}

LayerTargets cola_targets(const FrameGroundTruth& gt, std::span<const TrackId> live_tracks,
                          int layer, int layers) {
  check_layer(layer, layers);
  LayerTargets out{bind_tracks(gt, live_tracks), gt.newborn};
  if (layer < layers) {
    out.detection_candidates.insert(out.detection_candidates.end(), gt.tracked.begin(),
                                    gt.tracked.end());
  }
  return out;
}

LayerTargets layer_targets(LabelMode mode, const FrameGroundTruth& gt,
                           std::span<const TrackId> live_tracks, int layer, int layers) {
  return mode == LabelMode::kTala ? tala_targets(gt, live_tracks, layer, layers)
                                  : cola_targets(gt, live_tracks, layer, layers);
}

SetCostTensor::SetCostTensor(std::size_t sets, std::size_t shadows, std::size_t targets,
                             double fill)
    : sets_(sets), shadows_(shadows), targets_(targets), values_(sets * shadows * targets, fill) {}

CostMatrix reduce_set_costs(const SetCostTensor& t, Reduction lambda) {
  CostMatrix out(t.sets(), t.targets());
  if (t.shadows() == 0) {
    if (t.sets() > 0 && t.targets() > 0) {
      throw std::invalid_argument("cannot reduce a set cost tensor with zero shadows");
    }
    return out;
  }
  std::vector<double> column(t.shadows());
  for (std::size_t i = 0; i < t.sets(); ++i) {
    for (std::size_t k = 0; k < t.targets(); ++k) {
      for (std::size_t j = 0; j < t.shadows(); ++j) {
        column[j] = t.at(i, j, k);
      }
      out(i, k) = reduce(column, lambda);
    }
  }
  return out;
}

DetectionMatch assign_detection_sets(std::span<const SetPredictions> preds,
                                     std::span<const GroundTruthObject> candidates,
                                     const CostWeights& weights, Reduction lambda) {
  const std::size_t n_shadows = preds.empty() ? 0 : preds.front().size();
  for (const SetPredictions& set : preds) {
    if (set.size() != n_shadows || n_shadows == 0) {
      throw std::invalid_argument("every detection set needs the same non-zero shadow count");
    }
  }

  DetectionMatch match;
  match.costs = SetCostTensor(preds.size(), n_shadows, candidates.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < n_shadows; ++j) {
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        match.costs.at(i, j, k) = pair_cost(preds[i][j], candidates[k].target(), weights);
      }
    }
  }
  match.reduced = reduce_set_costs(match.costs, lambda);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    match.reduced.row_labels.push_back("d" + std::to_string(i));
  }
  for (const GroundTruthObject& c : candidates) {
    match.reduced.col_labels.push_back(std::to_string(c.id));
  }
  match.assignment = hungarian(match.reduced);

  match.labels.assign(preds.size(),
                      std::vector<LabelTarget>(n_shadows, LabelTarget::background()));
  for (const auto& [set, k] : match.assignment.pairs) {
    std::fill(match.labels[set].begin(), match.labels[set].end(),
              LabelTarget::identity(candidates[k].id));
  }
  return match;
}

SetLabels assign_tracking_sets(std::span<const std::optional<TrackId>> identities,
                               std::size_t n_shadows, const FrameGroundTruth& gt) {
  std::set<TrackId> seen;
  SetLabels labels;
  labels.reserve(identities.size());
  for (const std::optional<TrackId>& id : identities) {
    LabelTarget target = LabelTarget::background();
    if (id.has_value()) {
      if (!seen.insert(*id).second) {
        throw std::invalid_argument("duplicate identity " + std::to_string(*id) +
                                    " in the track bank");
      }
      if (gt.contains(*id)) {
        target = LabelTarget::identity(*id);
      }
    }
    labels.emplace_back(n_shadows, target);
  }
  return labels;
}

LabelAssignment assign_layer(LabelMode mode, const FrameGroundTruth& gt,
                             std::span<const std::optional<TrackId>> track_identities,
                             std::span<const SetPredictions> detection_preds,
                             std::size_t n_shadows, int layer, int layers,
                             const CostWeights& weights, Reduction lambda) {
  std::vector<TrackId> live;
  for (const auto& id : track_identities) {
    if (id.has_value()) {
      live.push_back(*id);
    }
  }
  LabelAssignment out;
  out.layer = layer;
  out.targets = layer_targets(mode, gt, live, layer, layers);
  out.tracking = assign_tracking_sets(track_identities, n_shadows, gt);
  out.detection_match =
      assign_detection_sets(detection_preds, out.targets.detection_candidates, weights, lambda);
  out.detection = out.detection_match.labels;
  return out;
}

}  // namespace comot
