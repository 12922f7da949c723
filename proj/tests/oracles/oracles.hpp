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

// Independent reference implementations used to cross-check the library.
// Nothing here calls into the code under test except for plain data types.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "comot/geometry.hpp"
#include "comot/matching.hpp"
#include "comot/tracklets.hpp"

namespace comot::oracle {

// Box algebra straight from corner coordinates.
double box_iou(const BoundingBox& a, const BoundingBox& b);
double box_giou(const BoundingBox& a, const BoundingBox& b);
double box_l1(const BoundingBox& a, const BoundingBox& b);

// Focal term written out term by term.
double focal(double p, double alpha, double gamma, double eps);

struct BruteForceResult {
  double total = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sorted by row
};

// Exhaustive minimum over every injection of the smaller side into the
// larger one. The total is accumulated in ascending row order.
BruteForceResult brute_force_assignment(const CostMatrix& cost);

// Enumerates every partial one-to-one gt -> pred identity mapping and returns
// the largest number of identity true positives.
std::size_t brute_force_idtp(const Tracklets& gt, const Tracklets& pred, const ImageSize& image,
                             double iou_threshold);

// Single-query tracker: one score per set, a track lives while its score
// exceeds tau (with patience), an idle query above tau starts a new id.
class ReferenceTracker {
 public:
  ReferenceTracker(std::size_t n_queries, double tau, int patience)
      : n_queries_(n_queries), tau_(tau), patience_(patience) {}

  std::size_t expected_predictions() const { return live_.size() + n_queries_; }
  // `scores` / `boxes`: live tracks in order, then the idle queries.
  void step(const std::vector<double>& scores, const std::vector<BoundingBox>& boxes);
  const Tracklets& tracklets() const { return out_; }

 private:
  struct Live {
    TrackId id;
    int misses;
  };
  std::size_t n_queries_;
  double tau_;
  int patience_;
  std::vector<Live> live_;
  TrackId next_ = 1;
  int frame_ = 0;
  Tracklets out_;
};

// Hand-built metric scenarios on a 1000 x 1000 image.
ImageSize scenario_image();
BoundingBox scenario_box(int slot);
// One object for 10 frames; prediction drops frame 5.
std::pair<Tracklets, Tracklets> miss_case();
// One object for 10 frames; prediction id 1 on frames 1..5, id 2 on 6..10.
std::pair<Tracklets, Tracklets> split_case();
// Two objects for 10 frames; prediction identities swap after frame 5.
std::pair<Tracklets, Tracklets> swap_case();
// One object for 3 frames plus one far-away false positive per frame.
std::pair<Tracklets, Tracklets> false_positive_case();

}  // namespace comot::oracle
