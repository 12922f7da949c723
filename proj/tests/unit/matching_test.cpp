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
#include <cmath>
#include <numeric>
#include <set>

#include "comot/matching.hpp"
#include "comot/random.hpp"
#include "oracles.hpp"

namespace comot {
namespace {

CostMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  CostMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform(-10.0, 10.0);
  return m;
}

void expect_valid(const Assignment& a, const CostMatrix& m) {
  std::set<std::size_t> rows, cols;
  for (const auto& [r, c] : a.pairs) {
    EXPECT_TRUE(rows.insert(r).second);
    EXPECT_TRUE(cols.insert(c).second);
  }
  EXPECT_EQ(a.pairs.size(), std::min(m.rows(), m.cols()));
  EXPECT_EQ(a.pairs.size() + a.unmatched_rows.size(), m.rows());
  EXPECT_EQ(a.pairs.size() + a.unmatched_cols.size(), m.cols());
  EXPECT_TRUE(std::is_sorted(a.pairs.begin(), a.pairs.end()));
}

TEST(Focal, HalfProbability) {
  const CostWeights w;
  const std::vector<double> p{0.5};
  EXPECT_NEAR(focal_cost(p, 0, w), -0.08664, 1e-5);
  EXPECT_NEAR(focal_cost(p, 0, w), oracle::focal(0.5, 0.25, 2.0, 1e-8), 1e-15);
}

TEST(Focal, HighProbability) {
  const std::vector<double> p{0.9};
  EXPECT_NEAR(focal_cost(p, 0, CostWeights{}), -1.39855, 1e-5);
}

TEST(Focal, DecreasingInProbability) {
  const CostWeights w;
  const std::vector<double> lo{0.1}, mid{0.5}, hi{0.9};
  EXPECT_GT(focal_cost(lo, 0, w), focal_cost(mid, 0, w));
  EXPECT_GT(focal_cost(mid, 0, w), focal_cost(hi, 0, w));
}

TEST(Focal, RejectsBadClass) {
  const std::vector<double> p{0.5};
  EXPECT_THROW(focal_cost(p, 1, CostWeights{}), std::out_of_range);
}

TEST(PairCost, PerfectPrediction) {
  const BoundingBox b{0.4, 0.4, 0.2, 0.3};
  EXPECT_NEAR(pair_cost({b, {1.0}}, {b, 0}, CostWeights::unit_weights()), -14.8155, 1e-4);
}

TEST(PairCost, HalfConfidence) {
  const BoundingBox b{0.4, 0.4, 0.2, 0.3};
  EXPECT_NEAR(pair_cost({b, {0.5}}, {b, 0}, CostWeights::unit_weights()), -1.08664, 1e-5);
}

TEST(PairCost, GiouOnly) {
  CostWeights w{0.0, 0.0, 1.0};
  const Prediction pred{BoundingBox::from_corners(0, 0, 1, 1), {0.3}};
  const Target gt{BoundingBox::from_corners(1, 1, 2, 2), 0};
  EXPECT_NEAR(pair_cost(pred, gt, w), 0.5, 1e-12);
}

TEST(PairCost, AdditiveInComponents) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Prediction pred{{rng.uniform(), rng.uniform(), rng.uniform(0.01, 0.5),
                           rng.uniform(0.01, 0.5)},
                          {rng.uniform()}};
    const Target gt{{rng.uniform(), rng.uniform(), rng.uniform(0.01, 0.5),
                     rng.uniform(0.01, 0.5)},
                    0};
    const CostWeights full = CostWeights::detr();
    CostWeights cls = full, l1 = full, g = full;
    cls.w_l1 = cls.w_giou = 0.0;
    l1.w_class = l1.w_giou = 0.0;
    g.w_class = g.w_l1 = 0.0;
    const double sum = pair_cost(pred, gt, cls) + pair_cost(pred, gt, l1) + pair_cost(pred, gt, g);
    ASSERT_NEAR(pair_cost(pred, gt, full), sum, 1e-12);
    const double independent = 2.0 * oracle::focal(pred.scores[0], 0.25, 2.0, 1e-8) +
                               5.0 * oracle::box_l1(pred.box, gt.box) -
                               2.0 * oracle::box_giou(pred.box, gt.box);
    ASSERT_NEAR(pair_cost(pred, gt, full), independent, 1e-12);
  }
}

TEST(CostWeightsTest, Validation) {
  EXPECT_NO_THROW(CostWeights::detr().validate());
  EXPECT_NO_THROW(CostWeights::unit_weights().validate());
  CostWeights w;
  w.w_l1 = -1;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = {};
  w.epsilon = 0;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = {};
  w.alpha = 1.0;
  EXPECT_THROW(w.validate(), std::invalid_argument);
}

TEST(BuildCostMatrix, EmptyPredictions) {
  std::vector<Prediction> preds;
  std::vector<Target> gts(3, Target{{0.5, 0.5, 0.1, 0.1}, 0});
  const CostMatrix m = build_cost_matrix(preds, gts, CostWeights{});
  EXPECT_EQ(m.rows(), 0u);
  EXPECT_EQ(m.cols(), 3u);
}

TEST(BuildCostMatrix, DiagonalOfPerfectBoxes) {
  const std::vector<Target> gts{{{0.2, 0.2, 0.1, 0.1}, 0}, {{0.7, 0.7, 0.2, 0.2}, 0}};
  const std::vector<Prediction> preds{{gts[0].box, {0.5}}, {gts[1].box, {0.5}}};
  const CostMatrix m = build_cost_matrix(preds, gts, CostWeights::unit_weights());
  EXPECT_NEAR(m(0, 0), -1.08664, 1e-5);
  EXPECT_NEAR(m(1, 1), -1.08664, 1e-5);
  EXPECT_EQ(m(0, 1), pair_cost(preds[0], gts[1], CostWeights::unit_weights()));
}

TEST(Hungarian, TwoByTwo) {
  const CostMatrix m = CostMatrix::from_rows({{1, 2}, {2, 1}});
  const Assignment a = hungarian(m);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
  EXPECT_DOUBLE_EQ(a.total_cost(m), 2.0);
}

TEST(Hungarian, AllZeroTies) {
  const CostMatrix m(3, 3, 0.0);
  const Assignment a = hungarian(m);
  expect_valid(a, m);
  EXPECT_DOUBLE_EQ(a.total_cost(m), 0.0);
}

TEST(Hungarian, WideMatrix) {
  const CostMatrix m = CostMatrix::from_rows({{5, 1, 9, 9}, {1, 5, 9, 9}});
  const Assignment a = hungarian(m);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 0}}));
  EXPECT_DOUBLE_EQ(a.total_cost(m), 2.0);
  EXPECT_EQ(a.unmatched_cols, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(a.col_for_row(0), 1);
}

TEST(Hungarian, TallMatrix) {
  const CostMatrix m = CostMatrix::from_rows({{5, 1}, {1, 5}, {0, 0}});
  const Assignment a = hungarian(m);
  expect_valid(a, m);
  EXPECT_DOUBLE_EQ(a.total_cost(m), oracle::brute_force_assignment(m).total);
}

TEST(Hungarian, EmptyMatrices) {
  const CostMatrix none(0, 4);
  const Assignment a = hungarian(none);
  EXPECT_TRUE(a.pairs.empty());
  EXPECT_EQ(a.unmatched_cols.size(), 4u);
  const Assignment b = hungarian(CostMatrix(3, 0));
  EXPECT_EQ(b.unmatched_rows.size(), 3u);
  EXPECT_EQ(b.col_for_row(1), -1);
}

TEST(Hungarian, RejectsNonFinite) {
  CostMatrix m(2, 2, 1.0);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(hungarian(m), std::invalid_argument);
  m(1, 0) = std::nan("");
  EXPECT_THROW(hungarian(m), std::invalid_argument);
}

TEST(HungarianProperty, MatchesBruteForce) {
  Rng rng(99);
  for (int t = 0; t < 300; ++t) {
    const std::size_t rows = 1 + rng.below(7), cols = 1 + rng.below(7);
    const CostMatrix m = random_matrix(rng, rows, cols);
    const Assignment a = hungarian(m);
    expect_valid(a, m);
    ASSERT_EQ(a.total_cost(m), oracle::brute_force_assignment(m).total) << rows << "x" << cols;
  }
}

TEST(HungarianProperty, RowPermutationInvariance) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 1 + rng.below(6), cols = 1 + rng.below(6);
    const CostMatrix m = random_matrix(rng, rows, cols);
    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = rows; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    CostMatrix p(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) p(r, c) = m(perm[r], c);
    const Assignment a = hungarian(m), b = hungarian(p);
    ASSERT_NEAR(a.total_cost(m), b.total_cost(p), 1e-9);
    // b's pairing mapped back is a valid optimum of m
    double back = 0.0;
    for (const auto& [r, c] : b.pairs) back += m(perm[r], c);
    ASSERT_NEAR(back, a.total_cost(m), 1e-9);
  }
}

TEST(HungarianProperty, ConstantShift) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const CostMatrix m = random_matrix(rng, n, n);
    const double k = rng.uniform(-5.0, 5.0);
    CostMatrix s = m;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) s(r, c) += k;
    const Assignment a = hungarian(m), b = hungarian(s);
    ASSERT_NEAR(b.total_cost(s), a.total_cost(m) + static_cast<double>(n) * k, 1e-9);
    double under_m = 0.0;
    for (const auto& [r, c] : b.pairs) under_m += m(r, c);
    ASSERT_NEAR(under_m, oracle::brute_force_assignment(m).total, 1e-9);
  }
}

}  // namespace
}  // namespace comot
