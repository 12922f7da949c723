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

#include "comot/tracker.hpp"

#include <stdexcept>
#include <string>

namespace comot {
namespace {

std::vector<double> scores_of(const SetPrediction& p) {
  std::vector<double> s;
  s.reserve(p.shadows.size());
  for (const ScoredBox& b : p.shadows) {
    s.push_back(b.score);
  }
  return s;
}

void carry_forward(ShadowSet& set, const SetPrediction& pred) {
  for (std::size_t j = 0; j < set.shadows.size(); ++j) {
    set.shadows[j].position = pred.shadows[j].box;
  }
  set.latent = pred.latent;
}

}  // namespace

void TrackerConfig::validate() const {
  shadow.validate();
  if (layers < 1) {
    throw std::invalid_argument("tracker.layers must be at least 1");
  }
  if (n_detection_sets < 1) {
    throw std::invalid_argument("tracker.detection_sets must be at least 1");
  }
  if (patience < 0) {
    throw std::invalid_argument("tracker.patience must be non-negative");
  }
}

Tracker::Tracker(TrackerConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)) {
  cfg_.validate();
  bank_ = init_query_bank(cfg_.n_detection_sets, cfg_.shadow, seed);
}

FrameResult Tracker::step(std::span<const SetPrediction> predictions) {
  if (predictions.size() != live_set_count()) {
    throw std::invalid_argument("got " + std::to_string(predictions.size()) +
                                " set predictions for " + std::to_string(live_set_count()) +
                                " live sets");
  }
  const auto n_shadows = static_cast<std::size_t>(cfg_.shadow.n_shadows);
  for (const SetPrediction& p : predictions) {
    if (p.shadows.size() != n_shadows) {
      throw std::invalid_argument("set prediction has " + std::to_string(p.shadows.size()) +
                                  " shadows, expected " + std::to_string(n_shadows));
    }
  }

  ++frame_;
  FrameResult result;
  result.frame = frame_;
  const double tau = cfg_.shadow.tau;

  std::vector<ShadowSet> next_tracks;
  std::vector<int> next_misses;
  next_tracks.reserve(tracks_.size());

  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    const SetPrediction& pred = predictions[i];
    ShadowSet set = std::move(tracks_[i]);
    if (representative_score(scores_of(pred), cfg_.shadow.phi) > tau) {
      const SelectedOutput out = select_output(pred.shadows);
      result.outputs.push_back({*set.identity, out.prediction.box, out.prediction.score});
      carry_forward(set, pred);
      next_tracks.push_back(std::move(set));
      next_misses.push_back(0);
    } else if (misses_[i] + 1 > cfg_.patience) {
      result.deaths.push_back(*set.identity);
    } else {
      set.latent = pred.latent;
      next_tracks.push_back(std::move(set));
      next_misses.push_back(misses_[i] + 1);
    }
  }

  for (std::size_t i = 0; i < bank_.size(); ++i) {
    const SetPrediction& pred = predictions[tracks_.size() + i];
    if (!(representative_score(scores_of(pred), cfg_.shadow.phi) > tau)) {
      continue;
    }
    ShadowSet set = bank_[i];
    set.role = SetRole::kTracking;
    set.identity = next_id_++;
    const SelectedOutput out = select_output(pred.shadows);
    result.outputs.push_back({*set.identity, out.prediction.box, out.prediction.score});
    result.births.push_back(*set.identity);
    carry_forward(set, pred);
    next_tracks.push_back(std::move(set));
    next_misses.push_back(0);
  }

  tracks_ = std::move(next_tracks);
  misses_ = std::move(next_misses);
  return result;
}

void append(Tracklets& tracklets, const FrameResult& result) {
  for (const FrameOutput& o : result.outputs) {
    tracklets[o.id].push_back({result.frame, o.box, o.score});
  }
}

Tracklets run(Tracker& tracker, int n_frames, const PredictionSource& source) {
  Tracklets tracklets;
  for (int f = 0; f < n_frames; ++f) {
    const int frame = tracker.next_frame();
    const auto preds = source(frame, tracker.tracks(), tracker.detection_bank());
    append(tracklets, tracker.step(preds));
  }
  return tracklets;
}

Tracklets run(Tracker& tracker, std::span<const std::vector<SetPrediction>> frames) {
  Tracklets tracklets;
  for (const auto& preds : frames) {
    append(tracklets, tracker.step(preds));
  }
  return tracklets;
}

}  // namespace comot
