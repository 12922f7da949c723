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

#include <cmath>
#include <nlohmann/json.hpp>

#include "comot/metrics.hpp"
#include "comot/random.hpp"
#include "comot/simulator.hpp"
#include "oracles.hpp"

namespace comot {
namespace {

using oracle::scenario_box;
using oracle::scenario_image;

Tracklets relabel(const Tracklets& in, Rng& rng) {
  std::vector<TrackId> ids;
  for (const auto& [id, _] : in) ids.push_back(id);
  std::vector<TrackId> fresh = ids;
  for (auto& id : fresh) id = id * 7 + 1000;
  for (std::size_t i = fresh.size(); i > 1; --i) std::swap(fresh[i - 1], fresh[rng.below(i)]);
  Tracklets out;
  for (std::size_t i = 0; i < ids.size(); ++i) out[fresh[i]] = in.at(ids[i]);
  return out;
}

void expect_same(const MetricsReport& a, const MetricsReport& b) {
  EXPECT_NEAR(*a.hota, *b.hota, 1e-12);
  EXPECT_NEAR(*a.deta, *b.deta, 1e-12);
  EXPECT_NEAR(*a.assa, *b.assa, 1e-12);
  EXPECT_NEAR(*a.mota, *b.mota, 1e-12);
  EXPECT_NEAR(a.idf1, b.idf1, 1e-12);
  EXPECT_EQ(a.ids, b.ids);
  EXPECT_EQ(a.fp, b.fp);
  EXPECT_EQ(a.fn, b.fn);
}

Tracklets noisy_prediction(const Scene& scene, Rng& rng) {
  // drop boxes, split tracks and jitter positions
  Tracklets pred;
  TrackId next = 1;
  for (const auto& [id, pts] : scene.ground_truth()) {
    TrackId cur = next++;
    for (const TrackPoint& p : pts) {
      if (rng.bernoulli(0.1)) continue;
      if (rng.bernoulli(0.05)) cur = next++;
      TrackPoint q = p;
      q.box.cx += rng.normal(0.0, 0.01);
      q.box.cy += rng.normal(0.0, 0.01);
      pred[cur].push_back(q);
    }
  }
  return pred;
}

TEST(ClearMot, Perfect) {
  const auto [gt, _] = oracle::swap_case();
  const ClearMotResult r = clear_mot(gt, gt, scenario_image());
  EXPECT_EQ(*r.mota, 1.0);
  EXPECT_EQ(r.ids, 0u);
  EXPECT_EQ(r.fp, 0u);
  EXPECT_EQ(r.fn, 0u);
}

TEST(ClearMot, SingleMiss) {
  const auto [gt, pred] = oracle::miss_case();
  const ClearMotResult r = clear_mot(gt, pred, scenario_image());
  EXPECT_NEAR(*r.mota, 0.9, 1e-12);
  EXPECT_EQ(r.fn, 1u);
  EXPECT_EQ(r.gt_boxes, 10u);
}

TEST(ClearMot, IdentitySwap) {
  const auto [gt, pred] = oracle::swap_case();
  const ClearMotResult r = clear_mot(gt, pred, scenario_image());
  EXPECT_EQ(r.ids, 2u);
  EXPECT_NEAR(*r.mota, 1.0 - 2.0 / 20.0, 1e-12);
}

TEST(ClearMot, PersistencePrefersPreviousMatch) {
  // pred 2 overlaps the gt slightly better in frame 2, but pred 1 still clears
  // the gate and keeps the match.
  const ImageSize image = scenario_image();
  const BoundingBox g{0.5, 0.5, 0.2, 0.2};
  BoundingBox p1 = g, p2 = g;
  p1.cx += 0.03;
  p2.cx += 0.01;
  Tracklets gt{{1, {{1, g, 1}, {2, g, 1}}}};
  Tracklets pred{{1, {{1, g, 1}, {2, p1, 1}}}, {2, {{2, p2, 1}}}};
  const ClearMotResult r = clear_mot(gt, pred, image);
  EXPECT_EQ(r.ids, 0u);
  EXPECT_EQ(r.fp, 1u);
}

TEST(ClearMot, EmptyGroundTruthIsUndefined) {
  const auto [gt, pred] = oracle::miss_case();
  const ClearMotResult r = clear_mot({}, pred, scenario_image());
  EXPECT_FALSE(r.mota.has_value());
  EXPECT_EQ(r.fp, 9u);
}

TEST(Identity, Perfect) {
  const auto [gt, _] = oracle::swap_case();
  EXPECT_EQ(idf1(gt, gt, scenario_image()), 1.0);
}

TEST(Identity, SplitHalves) {
  const auto [gt, pred] = oracle::split_case();
  const IdentityResult r = identity_metrics(gt, pred, scenario_image());
  EXPECT_EQ(r.idtp, 5u);
  EXPECT_EQ(r.idfp, 5u);
  EXPECT_EQ(r.idfn, 5u);
  EXPECT_NEAR(r.idf1, 0.5, 1e-12);
}

TEST(Identity, NoOverlap) {
  Tracklets gt{{1, {{1, scenario_box(0), 1}}}};
  Tracklets pred{{1, {{1, scenario_box(3), 1}}}};
  EXPECT_EQ(idf1(gt, pred, scenario_image()), 0.0);
  EXPECT_EQ(idf1({}, {}, scenario_image()), 1.0);
  EXPECT_EQ(idf1(gt, {}, scenario_image()), 0.0);
}

TEST(Identity, MatchesBruteForceMapping) {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    SceneConfig sc;
    sc.frames = 1 + static_cast<int>(rng.below(8));
    sc.objects = 1 + static_cast<int>(rng.below(3));
    sc.speed = 0.05;
    sc.seed = rng.next_u64();
    const Scene scene = generate_scene(sc);
    const Tracklets gt = scene.ground_truth();
    const Tracklets pred = noisy_prediction(scene, rng);
    const IdentityResult r = identity_metrics(gt, pred, sc.image);
    ASSERT_EQ(r.idtp, oracle::brute_force_idtp(gt, pred, sc.image, 0.5));
  }
}

TEST(Hota, Perfect) {
  const auto [gt, _] = oracle::swap_case();
  const HotaResult r = hota(gt, gt, scenario_image());
  EXPECT_NEAR(*r.hota, 1.0, 1e-12);
  EXPECT_NEAR(*r.deta, 1.0, 1e-12);
  EXPECT_NEAR(*r.assa, 1.0, 1e-12);
  EXPECT_EQ(r.per_alpha.size(), 19u);
}

TEST(Hota, SplitIdentity) {
  const auto [gt, pred] = oracle::split_case();
  const HotaResult r = hota(gt, pred, scenario_image());
  EXPECT_NEAR(*r.hota, std::sqrt(0.5), 1e-9);
  for (const HotaAlphaRow& row : r.per_alpha) {
    EXPECT_NEAR(row.deta, 1.0, 1e-12);
    EXPECT_NEAR(row.assa, 0.5, 1e-12);
  }
}

TEST(Hota, FalsePositivesOnlyHurtDetection) {
  const auto [gt, pred] = oracle::false_positive_case();
  const HotaResult r = hota(gt, pred, scenario_image());
  EXPECT_NEAR(*r.deta, 0.5, 1e-12);
  EXPECT_NEAR(*r.assa, 1.0, 1e-12);
  EXPECT_NEAR(*r.hota, std::sqrt(0.5), 1e-12);
  const ClearMotResult c = clear_mot(gt, pred, scenario_image());
  EXPECT_EQ(c.fp, 3u);
  EXPECT_NEAR(*c.mota, 0.0, 1e-12);
}

TEST(Hota, MeanOfPerAlphaRows) {
  Rng rng(3);
  SceneConfig sc;
  sc.frames = 30;
  sc.seed = 5;
  const Scene scene = generate_scene(sc);
  const Tracklets pred = noisy_prediction(scene, rng);
  const HotaResult r = hota(scene.ground_truth(), pred, sc.image);
  double mean = 0.0;
  for (const HotaAlphaRow& row : r.per_alpha) {
    EXPECT_NEAR(row.hota, std::sqrt(row.deta * row.assa), 1e-12);
    mean += row.hota / 19.0;
  }
  EXPECT_NEAR(*r.hota, mean, 1e-9);
  EXPECT_LT(*r.hota, 1.0);
}

TEST(Hota, Alphas) {
  const auto a = hota_alphas();
  ASSERT_EQ(a.size(), 19u);
  EXPECT_NEAR(a.front(), 0.05, 1e-15);
  EXPECT_NEAR(a.back(), 0.95, 1e-15);
}

TEST(Hota, EmptyInputs) {
  EXPECT_FALSE(hota({}, {}, scenario_image()).hota.has_value());
  const auto [gt, _] = oracle::miss_case();
  EXPECT_EQ(*hota(gt, {}, scenario_image()).hota, 0.0);
  EXPECT_EQ(*hota({}, gt, scenario_image()).hota, 0.0);
}

TEST(MetricsProperty, RelabelInvariance) {
  Rng rng(77);
  SceneConfig sc;
  sc.frames = 40;
  sc.seed = 2;
  const Scene scene = generate_scene(sc);
  const Tracklets gt = scene.ground_truth();
  const Tracklets pred = noisy_prediction(scene, rng);
  const MetricsReport base = evaluate(gt, pred, sc.image);
  for (int t = 0; t < 20; ++t) expect_same(base, evaluate(gt, relabel(pred, rng), sc.image));
}

TEST(MetricsProperty, DeletingBoxOfConsistentTrackNeverHelps) {
  // Predictions keep one identity per object, so removing a true positive
  // can only cost detection.
  Rng rng(19);
  SceneConfig sc;
  sc.frames = 25;
  sc.objects = 4;
  sc.seed = 8;
  const Scene scene = generate_scene(sc);
  const Tracklets gt = scene.ground_truth();
  Tracklets pred = gt;
  MetricsReport before = evaluate(gt, pred, sc.image);
  for (int t = 0; t < 30; ++t) {
    auto it = pred.begin();
    std::advance(it, static_cast<long>(rng.below(pred.size())));
    if (it->second.size() <= 1) continue;
    it->second.erase(it->second.begin() + static_cast<long>(rng.below(it->second.size())));
    const MetricsReport after = evaluate(gt, pred, sc.image);
    EXPECT_LE(*after.mota, *before.mota + 1e-12);
    EXPECT_LE(after.idf1, before.idf1 + 1e-12);
    EXPECT_LE(*after.hota, *before.hota + 1e-12);
    before = after;
  }
}

TEST(Report, JsonKeysAndNulls) {
  const auto [gt, pred] = oracle::split_case();
  const auto j = nlohmann::json::parse(report_to_json(evaluate(gt, pred, scenario_image())));
  for (const char* k : {"hota", "deta", "assa", "mota", "idf1", "ids", "fp", "fn", "per_alpha"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["per_alpha"].size(), 19u);
  const auto empty = nlohmann::json::parse(report_to_json(evaluate({}, {}, scenario_image())));
  EXPECT_TRUE(empty["hota"].is_null());
  EXPECT_TRUE(empty["mota"].is_null());
  EXPECT_EQ(empty["idf1"], 1.0);
}

TEST(Report, Table) {
  const auto [gt, _] = oracle::miss_case();
  const std::string t = report_to_table(evaluate(gt, gt, scenario_image()));
  EXPECT_NE(t.find("HOTA"), std::string::npos);
  EXPECT_NE(t.find("1.0000"), std::string::npos);
}

TEST(Completeness, SplitAndMiss) {
  const auto [gt, split] = oracle::split_case();
  const auto c = identity_completeness(gt, split, scenario_image());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].second, 0.5, 1e-12);
  const auto [gt2, miss] = oracle::miss_case();
  EXPECT_NEAR(identity_completeness(gt2, miss, scenario_image())[0].second, 0.5, 1e-12);
  EXPECT_NEAR(identity_completeness(gt2, gt2, scenario_image())[0].second, 1.0, 1e-12);
}

}  // namespace
}  // namespace comot
