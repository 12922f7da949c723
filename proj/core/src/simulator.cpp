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

#include "comot/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "comot/random.hpp"

namespace comot {
namespace {

using json = nlohmann::json;

constexpr std::uint64_t kTrackRole = 1;
constexpr std::uint64_t kDetectionRole = 2;

void reflect(double& center, double& velocity, double size) {
  const double half = 0.5 * size;
  if (center - half < 0.0) {
    center = size - center;
    velocity = -velocity;
  } else if (center + half > 1.0) {
    center = 2.0 - size - center;
    velocity = -velocity;
  }
  center = std::clamp(center, half, 1.0 - half);
}

bool occluded(const SceneConfig& cfg, TrackId id, int frame) {
  return std::any_of(cfg.occlusions.begin(), cfg.occlusions.end(), [&](const Occlusion& o) {
    return o.object == id && frame >= o.start && frame <= o.end;
  });
}

BoundingBox jitter_box(const BoundingBox& b, double stddev, Rng& rng) {
  BoundingBox out = b;
  out.cx += stddev * rng.normal();
  out.cy += stddev * rng.normal();
  out.w = std::max(0.0, out.w + stddev * rng.normal());
  out.h = std::max(0.0, out.h + stddev * rng.normal());
  return out;
}

ClassScores one_hot(int classes, std::size_t class_id, double score) {
  ClassScores s(static_cast<std::size_t>(classes), 0.0);
  s[std::min(class_id, s.size() - 1)] = score;
  return s;
}

// Fills layers[*][set] for a set that follows `box`.
void emit_following(DecodedFrame& out, std::size_t set, const BoundingBox& box,
                    std::size_t class_id, double score, int n_shadows, int classes,
                    const OracleConfig& cfg, Rng& box_rng, Rng& corrupt_rng) {
  const int layers = static_cast<int>(out.layers.size());
  std::vector<double> shadow_scores(static_cast<std::size_t>(n_shadows), score);
  for (double& s : shadow_scores) {
    if (corrupt_rng.bernoulli(cfg.p_corrupt)) {
      s = 0.0;
    }
  }
  for (int j = 0; j < n_shadows; ++j) {
    for (int l = 1; l <= layers; ++l) {
      const double stddev = cfg.box_noise * std::pow(cfg.refinement, l - 1);
      out.layers[static_cast<std::size_t>(l - 1)][set].push_back(
          {jitter_box(box, stddev, box_rng),
           one_hot(classes, class_id, shadow_scores[static_cast<std::size_t>(j)])});
    }
  }
}

void emit_idle(DecodedFrame& out, std::size_t set, const BoundingBox& box, double score,
               int n_shadows, int classes) {
  for (auto& layer : out.layers) {
    for (int j = 0; j < n_shadows; ++j) {
      layer[set].push_back({box, ClassScores(static_cast<std::size_t>(classes), score)});
    }
  }
}

json config_to_json(const SceneConfig& c) {
  json occ = json::array();
  for (const Occlusion& o : c.occlusions) {
    occ.push_back({{"object", o.object}, {"start", o.start}, {"end", o.end}});
  }
  return {{"frames", c.frames},
          {"objects", c.objects},
          {"schedule", std::string(to_string(c.schedule))},
          {"speed", c.speed},
          {"jitter", c.jitter},
          {"min_size", c.min_size},
          {"max_size", c.max_size},
          {"occlusions", occ},
          {"width", c.image.width},
          {"height", c.image.height},
          {"classes", c.classes},
          {"seed", c.seed}};
}

SceneConfig config_from_json(const json& j) {
  SceneConfig c;
  c.frames = j.at("frames").get<int>();
  c.objects = j.at("objects").get<int>();
  c.schedule = parse_newborn_schedule(j.at("schedule").get<std::string>());
  c.speed = j.at("speed").get<double>();
  c.jitter = j.at("jitter").get<double>();
  c.min_size = j.at("min_size").get<double>();
  c.max_size = j.at("max_size").get<double>();
  for (const json& o : j.at("occlusions")) {
    c.occlusions.push_back(
        {o.at("object").get<TrackId>(), o.at("start").get<int>(), o.at("end").get<int>()});
  }
  c.image = {j.at("width").get<double>(), j.at("height").get<double>()};
  c.classes = j.value("classes", 1);
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string_view to_string(NewbornSchedule schedule) {
  return schedule == NewbornSchedule::kAllAtStart ? "all-at-start" : "uniform";
}

NewbornSchedule parse_newborn_schedule(std::string_view text) {
  if (text == "all-at-start" || text == "enclosed") return NewbornSchedule::kAllAtStart;
  if (text == "uniform") return NewbornSchedule::kUniform;
  throw std::invalid_argument("unknown newborn schedule '" + std::string(text) +
                              "' (expected all-at-start or uniform)");
}

void SceneConfig::validate() const {
  if (frames < 1) throw std::invalid_argument("scene.frames must be at least 1");
  if (objects < 0) throw std::invalid_argument("scene.objects must be non-negative");
  if (!(speed >= 0.0) || !(jitter >= 0.0)) {
    throw std::invalid_argument("scene.speed and scene.jitter must be non-negative");
  }
  if (!(min_size > 0.0) || !(max_size >= min_size) || !(max_size <= 1.0)) {
    throw std::invalid_argument("scene sizes must satisfy 0 < min_size <= max_size <= 1");
  }
  if (!(image.width > 0.0) || !(image.height > 0.0)) {
    throw std::invalid_argument("scene image dimensions must be positive");
  }
  if (classes < 1) throw std::invalid_argument("scene.classes must be at least 1");
  for (const Occlusion& o : occlusions) {
    if (o.object < 1 || o.object > objects) {
      throw std::invalid_argument("occlusion names unknown object " + std::to_string(o.object));
    }
    if (o.start < 1 || o.end > frames || o.start > o.end) {
      throw std::invalid_argument("occlusion interval " + std::to_string(o.start) + "-" +
                                  std::to_string(o.end) + " outside [1, " +
                                  std::to_string(frames) + "]");
    }
  }
}

const ScenePoint* SceneTrack::at(int frame) const {
  const auto it = std::lower_bound(points.begin(), points.end(), frame,
                                   [](const ScenePoint& p, int f) { return p.frame < f; });
  return it != points.end() && it->frame == frame ? &*it : nullptr;
}

const SceneTrack* Scene::track(TrackId id) const {
  const auto it = std::lower_bound(tracks.begin(), tracks.end(), id,
                                   [](const SceneTrack& t, TrackId i) { return t.id < i; });
  return it != tracks.end() && it->id == id ? &*it : nullptr;
}

std::vector<GroundTruthObject> Scene::visible_objects(int frame) const {
  std::vector<GroundTruthObject> out;
  for (const SceneTrack& t : tracks) {
    const ScenePoint* p = t.at(frame);
    if (p != nullptr && p->visible) {
      out.push_back({t.id, p->box, t.class_id});
    }
  }
  return out;
}

Tracklets Scene::ground_truth() const {
  Tracklets gt;
  for (const SceneTrack& t : tracks) {
    for (const ScenePoint& p : t.points) {
      if (p.visible) {
        gt[t.id].push_back({p.frame, p.box, 1.0});
      }
    }
  }
  return gt;
}

Scene generate_scene(const SceneConfig& cfg) {
  cfg.validate();
  Scene scene;
  scene.config = cfg;
  for (int k = 0; k < cfg.objects; ++k) {
    Rng rng = Rng::derive(cfg.seed, {stream::kScene, static_cast<std::uint64_t>(k)});
    SceneTrack track;
    track.id = k + 1;
    track.class_id = rng.below(static_cast<std::uint64_t>(cfg.classes));
    const double w = rng.uniform(cfg.min_size, cfg.max_size);
    const double h = rng.uniform(cfg.min_size, cfg.max_size);
    double cx = rng.uniform(0.5 * w, 1.0 - 0.5 * w);
    double cy = rng.uniform(0.5 * h, 1.0 - 0.5 * h);
    double vx = cfg.speed * rng.normal();
    double vy = cfg.speed * rng.normal();
    const int birth = cfg.schedule == NewbornSchedule::kAllAtStart
                          ? 1
                          : 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.frames)));
    for (int f = birth; f <= cfg.frames; ++f) {
      track.points.push_back({f, {cx, cy, w, h}, !occluded(cfg, track.id, f)});
      vx += cfg.jitter * rng.normal();
      vy += cfg.jitter * rng.normal();
      cx += vx;
      cy += vy;
      reflect(cx, vx, w);
      reflect(cy, vy, h);
    }
    scene.tracks.push_back(std::move(track));
  }
  return scene;
}

std::string scene_to_json(const Scene& scene) {
  json tracks = json::array();
  for (const SceneTrack& t : scene.tracks) {
    json frames = json::array();
    for (const ScenePoint& p : t.points) {
      frames.push_back({{"t", p.frame},
                        {"box", {p.box.cx, p.box.cy, p.box.w, p.box.h}},
                        {"visible", p.visible}});
    }
    tracks.push_back({{"id", t.id}, {"class", t.class_id}, {"frames", frames}});
  }
  const json doc = {{"version", 1}, {"config", config_to_json(scene.config)}, {"tracks", tracks}};
  return doc.dump(1) + "\n";
}

Scene scene_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("version").get<int>() != 1) {
      throw std::runtime_error("unsupported scene version " + doc.at("version").dump());
    }
    Scene scene;
    scene.config = config_from_json(doc.at("config"));
    for (const json& jt : doc.at("tracks")) {
      SceneTrack t;
      t.id = jt.at("id").get<TrackId>();
      t.class_id = jt.value("class", std::size_t{0});
      for (const json& jp : jt.at("frames")) {
        const auto box = jp.at("box").get<std::vector<double>>();
        if (box.size() != 4) {
          throw std::runtime_error("track " + std::to_string(t.id) + ": box needs 4 numbers");
        }
        ScenePoint p{jp.at("t").get<int>(), {box[0], box[1], box[2], box[3]},
                     jp.value("visible", true)};
        if (!t.points.empty() && p.frame <= t.points.back().frame) {
          throw std::runtime_error("track " + std::to_string(t.id) +
                                   ": frames must be strictly increasing");
        }
        t.points.push_back(p);
      }
      scene.tracks.push_back(std::move(t));
    }
    std::sort(scene.tracks.begin(), scene.tracks.end(),
              [](const SceneTrack& a, const SceneTrack& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < scene.tracks.size(); ++i) {
      if (scene.tracks[i].id == scene.tracks[i - 1].id) {
        throw std::runtime_error("duplicate track id " + std::to_string(scene.tracks[i].id));
      }
    }
    return scene;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed scene document: ") + e.what());
  }
}

void OracleConfig::validate() const {
  const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!(box_noise >= 0.0) || !std::isfinite(box_noise)) {
    throw std::invalid_argument("oracle.box_noise must be finite and non-negative");
  }
  if (!prob(base_score) || !prob(occlusion_drop) || !prob(p_corrupt) || !prob(fp_rate) ||
      !prob(fp_score) || !prob(background_score)) {
    throw std::invalid_argument("oracle scores and rates must lie in [0, 1]");
  }
  if (!(refinement >= 0.0 && refinement < 1.0)) {
    throw std::invalid_argument("oracle.refinement must lie in [0, 1)");
  }
}

std::vector<SetPredictions> DecodedFrame::detection_layer(int layer) const {
  if (layer < 1 || layer > static_cast<int>(layers.size())) {
    throw std::out_of_range("layer " + std::to_string(layer) + " not decoded");
  }
  const auto& all = layers[static_cast<std::size_t>(layer - 1)];
  return {all.begin() + static_cast<std::ptrdiff_t>(n_tracks), all.end()};
}

std::vector<SetPrediction> DecodedFrame::final_layer() const {
  std::vector<SetPrediction> out;
  if (layers.empty()) {
    return out;
  }
  const auto& last = layers.back();
  out.reserve(last.size());
  for (std::size_t i = 0; i < last.size(); ++i) {
    SetPrediction p;
    p.latent = latents[i];
    for (const Prediction& shadow : last[i]) {
      p.shadows.push_back({shadow.box, shadow.max_score()});
    }
    out.push_back(std::move(p));
  }
  return out;
}

DecodedFrame oracle_decode(const Scene& scene, int frame, std::span<const ShadowSet> tracks,
                           std::span<const ShadowSet> detection_bank, const OracleConfig& cfg,
                           int layers, std::uint64_t seed) {
  if (frame < 1 || frame > scene.frames()) {
    throw std::out_of_range("frame " + std::to_string(frame) + " outside scene [1, " +
                            std::to_string(scene.frames()) + "]");
  }
  if (layers < 1) {
    throw std::invalid_argument("oracle needs at least one decoder layer");
  }
  cfg.validate();
  const int classes = scene.config.classes;
  const auto f = static_cast<std::uint64_t>(frame);
  const std::size_t n_sets = tracks.size() + detection_bank.size();

  DecodedFrame out;
  out.frame = frame;
  out.n_tracks = tracks.size();
  out.layers.assign(static_cast<std::size_t>(layers), std::vector<SetPredictions>(n_sets));
  out.latents.assign(n_sets, std::nullopt);

  std::unordered_set<TrackId> claimed;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const ShadowSet& set = tracks[i];
    const int n_shadows = static_cast<int>(set.shadows.size());
    const auto key = static_cast<std::uint64_t>(set.identity.value_or(0));
    Rng box_rng = Rng::derive(seed, {stream::kOracleBox, f, kTrackRole, key});
    Rng corrupt_rng = Rng::derive(seed, {stream::kOracleCorrupt, f, kTrackRole, key});

    const SceneTrack* target = set.latent ? scene.track(*set.latent) : nullptr;
    const ScenePoint* point = target != nullptr ? target->at(frame) : nullptr;
    if (point == nullptr) {
      emit_idle(out, i, set.anchor(), cfg.background_score, n_shadows, classes);
      continue;
    }
    claimed.insert(target->id);
    out.latents[i] = target->id;
    const double score =
        std::max(0.0, cfg.base_score - (point->visible ? 0.0 : cfg.occlusion_drop));
    emit_following(out, i, point->box, target->class_id, score, n_shadows, classes, cfg, box_rng,
                   corrupt_rng);
  }

  std::vector<GroundTruthObject> free_objects;
  for (const GroundTruthObject& o : scene.visible_objects(frame)) {
    if (!claimed.contains(o.id)) {
      free_objects.push_back(o);
    }
  }

  // Greedy pairing: highest anchor IoU first, ties by object then set index.
  struct Candidate {
    double overlap;
    std::size_t object;
    std::size_t set;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(free_objects.size() * detection_bank.size());
  for (std::size_t o = 0; o < free_objects.size(); ++o) {
    for (std::size_t d = 0; d < detection_bank.size(); ++d) {
      candidates.push_back({iou(detection_bank[d].anchor(), free_objects[o].box), o, d});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.overlap > b.overlap; });
  std::vector<long> object_of_set(detection_bank.size(), -1);
  std::vector<char> object_taken(free_objects.size(), 0);
  for (const Candidate& c : candidates) {
    if (object_taken[c.object] || object_of_set[c.set] >= 0) {
      continue;
    }
    object_taken[c.object] = 1;
    object_of_set[c.set] = static_cast<long>(c.object);
  }

  for (std::size_t d = 0; d < detection_bank.size(); ++d) {
    const std::size_t slot = tracks.size() + d;
    const ShadowSet& set = detection_bank[d];
    const int n_shadows = static_cast<int>(set.shadows.size());
    Rng box_rng = Rng::derive(seed, {stream::kOracleBox, f, kDetectionRole, d});
    Rng corrupt_rng = Rng::derive(seed, {stream::kOracleCorrupt, f, kDetectionRole, d});
    if (object_of_set[d] >= 0) {
      const GroundTruthObject& o = free_objects[static_cast<std::size_t>(object_of_set[d])];
      out.latents[slot] = o.id;
      emit_following(out, slot, o.box, o.class_id, cfg.base_score, n_shadows, classes, cfg,
                     box_rng, corrupt_rng);
      continue;
    }
    Rng fp_rng = Rng::derive(seed, {stream::kOracleFalsePositive, f, d});
    if (fp_rng.bernoulli(cfg.fp_rate)) {
      const double w = fp_rng.uniform(scene.config.min_size, scene.config.max_size);
      const double h = fp_rng.uniform(scene.config.min_size, scene.config.max_size);
      const BoundingBox box{fp_rng.uniform(), fp_rng.uniform(), w, h};
      const auto cls = static_cast<std::size_t>(fp_rng.below(static_cast<std::uint64_t>(classes)));
      for (auto& layer : out.layers) {
        for (int j = 0; j < n_shadows; ++j) {
          layer[slot].push_back({box, one_hot(classes, cls, cfg.fp_score)});
        }
      }
    } else {
      emit_idle(out, slot, set.anchor(), cfg.background_score, n_shadows, classes);
    }
  }
  return out;
}

FrameGroundTruth emit_training_targets(const Scene& scene, int frame,
                                       std::span<const TrackId> tracked_ids) {
  if (frame < 1 || frame > scene.frames()) {
    throw std::out_of_range("frame " + std::to_string(frame) + " outside scene");
  }
  const std::unordered_set<TrackId> tracked(tracked_ids.begin(), tracked_ids.end());
  FrameGroundTruth gt;
  for (const GroundTruthObject& o : scene.visible_objects(frame)) {
    (tracked.contains(o.id) ? gt.tracked : gt.newborn).push_back(o);
  }
  return gt;
}

}  // namespace comot
