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
#include <string>
#include <vector>

#include "comot/geometry.hpp"
#include "comot/tracklets.hpp"

namespace comot {

// All metrics compare boxes in pixel space after converting with `image`,
// so results do not depend on whether tracklets came from files or from the
// simulator.

struct ClearMotResult {
  /// Undefined (nullopt) when there are no ground-truth boxes.
  std::optional<double> mota;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t ids = 0;
  std::size_t gt_boxes = 0;
};

/// CLEAR-MOT with match persistence: pairs matched in the previous frame
/// are kept whenever they still clear the IoU gate.
ClearMotResult clear_mot(const Tracklets& gt, const Tracklets& pred, const ImageSize& image,
                         double iou_threshold = 0.5);

struct IdentityResult {
  double idf1 = 1.0;
  std::size_t idtp = 0;
  std::size_t idfp = 0;
  std::size_t idfn = 0;
  /// Optimal gt -> pred identity mapping.
  std::vector<std::pair<TrackId, TrackId>> mapping;
};

/// ID measures under the optimal global one-to-one identity mapping.
/// Both inputs empty gives IDF1 = 1.
IdentityResult identity_metrics(const Tracklets& gt, const Tracklets& pred,
                                const ImageSize& image, double iou_threshold = 0.5);

inline double idf1(const Tracklets& gt, const Tracklets& pred, const ImageSize& image,
                   double iou_threshold = 0.5) {
  return identity_metrics(gt, pred, image, iou_threshold).idf1;
}

struct HotaAlphaRow {
  double alpha = 0.0;
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
};

struct HotaResult {
  // Undefined only when both inputs are empty.
  std::optional<double> hota;
  std::optional<double> deta;
  std::optional<double> assa;
  std::vector<HotaAlphaRow> per_alpha;
};

/// The 19 localization thresholds 0.05, 0.10, ..., 0.95.
std::vector<double> hota_alphas();

HotaResult hota(const Tracklets& gt, const Tracklets& pred, const ImageSize& image);

struct MetricsReport {
  std::optional<double> hota;
  std::optional<double> deta;
  std::optional<double> assa;
  std::optional<double> mota;
  double idf1 = 1.0;
  std::size_t ids = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<HotaAlphaRow> per_alpha;
};

MetricsReport evaluate(const Tracklets& gt, const Tracklets& pred, const ImageSize& image,
                       double iou_threshold = 0.5);

/// JSON with keys hota, deta, assa, mota, idf1, ids, fp, fn, per_alpha.
/// Undefined values are written as null.
std::string report_to_json(const MetricsReport& report);
/// Aligned two-column text table.
std::string report_to_table(const MetricsReport& report);

/// Per ground-truth identity: the longest run of consecutive gt frames that
/// are covered (IoU >= threshold, best-overlapping prediction) by one single
/// predicted identity, divided by the identity's gt length.
std::vector<std::pair<TrackId, double>> identity_completeness(const Tracklets& gt,
                                                              const Tracklets& pred,
                                                              const ImageSize& image,
                                                              double iou_threshold = 0.5);

}  // namespace comot
