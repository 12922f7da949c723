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

#include "comot/tracklets.hpp"

#include <stdexcept>
#include <string>

namespace comot {

std::map<int, std::vector<FrameDetection>> by_frame(const Tracklets& tracklets) {
  std::map<int, std::vector<FrameDetection>> frames;
  // std::map iterates ids in ascending order, so each frame stays id-sorted.
  for (const auto& [id, points] : tracklets) {
    for (const TrackPoint& p : points) {
      frames[p.frame].push_back({id, p.box, p.score});
    }
  }
  return frames;
}

void validate(const Tracklets& tracklets) {
  for (const auto& [id, points] : tracklets) {
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].frame <= points[i - 1].frame) {
        throw std::invalid_argument("tracklet " + std::to_string(id) +
                                    " has non-increasing frame indices");
      }
    }
  }
}

std::size_t box_count(const Tracklets& tracklets) {
  std::size_t n = 0;
  for (const auto& [id, points] : tracklets) {
    n += points.size();
  }
  return n;
}

}  // namespace comot
