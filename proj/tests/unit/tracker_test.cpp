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

#include <algorithm>
#include <set>

#include "comot/random.hpp"
#include "comot/tracker.hpp"
#include "oracles.hpp"

namespace comot {
namespace {

TrackerConfig small_config(int n_shadows, std::size_t n_sets, int patience = 0) {
  TrackerConfig cfg;
  cfg.shadow.n_shadows = n_shadows;
  cfg.shadow.embedding_dim = 4;
  cfg.n_detection_sets = n_sets;
  cfg.patience = patience;
  return cfg;
}

SetPrediction uniform_set(const BoundingBox& b, double score, int n_shadows = 1) {
  return {std::vector<ScoredBox>(static_cast<std::size_t>(n_shadows), ScoredBox{b, score}), {}};
}

const BoundingBox kBox{0.5, 0.5, 0.1, 0.1};

TEST(TrackerStep, BirthGating) {
  Tracker t(small_config(1, 2), 0);
  const std::vector<SetPrediction> p{uniform_set(kBox, 0.9), uniform_set(kBox, 0.2)};
  const FrameResult r = t.step(p);
  EXPECT_EQ(r.frame, 1);
  ASSERT_EQ(r.outputs.size(), 1u);
  EXPECT_EQ(r.births, (std::vector<TrackId>{1}));
  EXPECT_EQ(r.outputs[0].id, 1);
  EXPECT_EQ(t.tracks().size(), 1u);
  EXPECT_EQ(t.live_set_count(), 3u);
}

TEST(TrackerStep, LowScoreTrackDiesWithoutPatience) {
  Tracker t(small_config(1, 1), 0);
  t.step(std::vector<SetPrediction>{uniform_set(kBox, 0.9)});
  const FrameResult r =
      t.step(std::vector<SetPrediction>{uniform_set(kBox, 0.4), uniform_set(kBox, 0.1)});
  EXPECT_TRUE(r.outputs.empty());
  EXPECT_EQ(r.deaths, (std::vector<TrackId>{1}));
  EXPECT_TRUE(t.tracks().empty());
}

TEST(TrackerStep, PatienceKeepsIdentity) {
  Tracker t(small_config(1, 1, 1), 0);
  t.step(std::vector<SetPrediction>{uniform_set(kBox, 0.9)});
  const FrameResult low =
      t.step(std::vector<SetPrediction>{uniform_set(kBox, 0.4), uniform_set(kBox, 0.1)});
  EXPECT_TRUE(low.outputs.empty());
  EXPECT_TRUE(low.deaths.empty());
  const FrameResult back =
      t.step(std::vector<SetPrediction>{uniform_set(kBox, 0.9), uniform_set(kBox, 0.1)});
  ASSERT_EQ(back.outputs.size(), 1u);
  EXPECT_EQ(back.outputs[0].id, 1);
  EXPECT_TRUE(back.births.empty());
}

TEST(TrackerStep, PhiGatesAndMaxShadowIsEmitted) {
  TrackerConfig cfg = small_config(3, 1);
  cfg.shadow.phi = Reduction::kMin;
  Tracker t(cfg, 0);
  const BoundingBox best{0.2, 0.2, 0.1, 0.1};
  SetPrediction p{{{kBox, 0.6}, {best, 0.95}, {kBox, 0.7}}, {}};
  const FrameResult r = t.step(std::vector<SetPrediction>{p});
  ASSERT_EQ(r.outputs.size(), 1u);
  EXPECT_EQ(r.outputs[0].box, best);
  EXPECT_EQ(r.outputs[0].score, 0.95);
  // one shadow below tau fails the min gate
  p.shadows[0].score = 0.3;
  const FrameResult r2 =
      t.step(std::vector<SetPrediction>{p, uniform_set(kBox, 0.0, 3)});
  EXPECT_TRUE(r2.outputs.empty());
}

TEST(TrackerStep, PromotionMovesWholeSet) {
  TrackerConfig cfg = small_config(3, 2);
  cfg.shadow.init = InitMethod::kRand;
  Tracker t(cfg, 4);
  const ShadowSet promoted = t.detection_bank()[1];
  const FrameResult r = t.step(
      std::vector<SetPrediction>{uniform_set(kBox, 0.1, 3), uniform_set(kBox, 0.9, 3)});
  ASSERT_EQ(r.births.size(), 1u);
  ASSERT_EQ(t.tracks().size(), 1u);
  const ShadowSet& track = t.tracks()[0];
  EXPECT_EQ(track.role, SetRole::kTracking);
  EXPECT_EQ(track.identity, TrackId{1});
  EXPECT_EQ(track.set_id, promoted.set_id);
  ASSERT_EQ(track.shadows.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j)
    EXPECT_EQ(track.shadows[j].embedding, promoted.shadows[j].embedding);
  // the bank keeps its size
  EXPECT_EQ(t.detection_bank().size(), 2u);
}

TEST(TrackerStep, RejectsCardinalityMismatch) {
  Tracker t(small_config(2, 2), 0);
  EXPECT_THROW(t.step(std::vector<SetPrediction>{uniform_set(kBox, 0.9, 2)}),
               std::invalid_argument);
  EXPECT_THROW(t.step(std::vector<SetPrediction>{uniform_set(kBox, 0.9, 1),
                                                 uniform_set(kBox, 0.9, 1)}),
               std::invalid_argument);
}

TEST(TrackerRun, EmptySequence) {
  Tracker t(small_config(1, 1), 0);
  EXPECT_TRUE(run(t, std::span<const std::vector<SetPrediction>>{}).empty());
}

TEST(TrackerRun, SteadyObject) {
  Tracker t(small_config(1, 1), 0);
  std::size_t deaths = 0;
  Tracklets out;
  for (int f = 1; f <= 10; ++f) {
    std::vector<SetPrediction> p;
    for (std::size_t i = 0; i < t.tracks().size(); ++i) p.push_back(uniform_set(kBox, 0.9));
    for (std::size_t i = 0; i < t.detection_bank().size(); ++i)
      p.push_back(uniform_set(kBox, t.tracks().empty() ? 0.9 : 0.1));
    const FrameResult r = t.step(p);
    deaths += r.deaths.size();
    append(out, r);
  }
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.begin()->second.size(), 10u);
  EXPECT_EQ(deaths, 0u);
}

TEST(TrackerRun, NoReidentification) {
  Tracker t(small_config(1, 1), 0);
  const Tracklets out = run(t, 10, [&](int frame, auto tracks, auto bank) {
    const bool visible = frame < 5 || frame >= 8;
    std::vector<SetPrediction> p;
    for (std::size_t i = 0; i < tracks.size(); ++i)
      p.push_back(uniform_set(kBox, visible ? 0.9 : 0.1));
    for (std::size_t i = 0; i < bank.size(); ++i)
      p.push_back(uniform_set(kBox, visible && tracks.empty() ? 0.9 : 0.1));
    return p;
  });
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.at(1).back().frame, 4);
  EXPECT_EQ(out.at(2).front().frame, 8);
}

// Random score streams; the shadow tracker at N_S = 1 must agree with the
// single-query reference for every phi.
TEST(TrackerProperty, SingleShadowMatchesReference) {
  for (int patience : {0, 2}) {
    for (Reduction phi : {Reduction::kMin, Reduction::kMean, Reduction::kMax}) {
      Rng rng(31 + patience);
      TrackerConfig cfg = small_config(1, 4, patience);
      cfg.shadow.phi = phi;
      Tracker t(cfg, 0);
      oracle::ReferenceTracker ref(4, cfg.shadow.tau, patience);
      Tracklets got;
      for (int f = 1; f <= 60; ++f) {
        const std::size_t n = t.live_set_count();
        ASSERT_EQ(n, ref.expected_predictions());
        std::vector<double> scores(n);
        std::vector<BoundingBox> boxes(n);
        std::vector<SetPrediction> p(n);
        for (std::size_t i = 0; i < n; ++i) {
          scores[i] = i < t.tracks().size() ? rng.uniform(0.3, 1.0) : rng.uniform(0.0, 0.6);
          boxes[i] = {rng.uniform(), rng.uniform(), 0.1, 0.1};
          p[i] = {{{boxes[i], scores[i]}}, {}};
        }
        append(got, t.step(p));
        ref.step(scores, boxes);
      }
      ASSERT_EQ(got, ref.tracklets());
    }
  }
}

TEST(TrackerProperty, IdentityUniquenessAndGating) {
  Rng rng(8);
  TrackerConfig cfg = small_config(3, 5, 1);
  cfg.shadow.phi = Reduction::kMean;
  Tracker t(cfg, 0);
  std::set<TrackId> dead;
  for (int f = 1; f <= 80; ++f) {
    const std::size_t n_tracks_before = t.tracks().size();
    std::vector<SetPrediction> p(t.live_set_count());
    for (auto& s : p) {
      for (int j = 0; j < 3; ++j) s.shadows.push_back({kBox, rng.uniform()});
    }
    const FrameResult r = t.step(p);
    std::set<TrackId> seen;
    for (const FrameOutput& o : r.outputs) {
      EXPECT_TRUE(seen.insert(o.id).second);
      EXPECT_FALSE(dead.contains(o.id));
    }
    for (TrackId b : r.births) EXPECT_TRUE(seen.contains(b));
    for (TrackId d : r.deaths) dead.insert(d);
    EXPECT_EQ(t.tracks().size(), n_tracks_before - r.deaths.size() + r.births.size());
    // every emitted score is the max shadow of a set that passed the gate
    std::multiset<double> passing;
    for (const SetPrediction& s : p) {
      double mean = 0, best = 0;
      for (const auto& sb : s.shadows) {
        mean += sb.score / 3.0;
        best = std::max(best, sb.score);
      }
      if (mean > cfg.shadow.tau) passing.insert(best);
    }
    EXPECT_EQ(passing.size(), r.outputs.size());
    for (const FrameOutput& o : r.outputs) EXPECT_TRUE(passing.contains(o.score));
  }
}

TEST(TrackerConfigTest, Validate) {
  TrackerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.layers = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.n_detection_sets = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.patience = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace comot
