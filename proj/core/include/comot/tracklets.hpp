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

#include <cstdint>
#include <map>
#include <vector>

#include "comot/geometry.hpp"

namespace comot {

using TrackId = std::int64_t;

struct TrackPoint {
  int frame = 0;  // 1-based
  BoundingBox box;
  double score = 1.0;

  friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

/// Identity -> box sequence with strictly increasing frame indices.
using Tracklets = std::map<TrackId, std::vector<TrackPoint>>;

struct FrameDetection {
  TrackId id = 0;
  BoundingBox box;
  double score = 1.0;
};

/// Regroups tracklets by frame; detections within a frame are ordered by id.
std::map<int, std::vector<FrameDetection>> by_frame(const Tracklets& tracklets);

/// Throws std::invalid_argument if any tracklet has non-increasing frames.
void validate(const Tracklets& tracklets);

std::size_t box_count(const Tracklets& tracklets);

}  // namespace comot
