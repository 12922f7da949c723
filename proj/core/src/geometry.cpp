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

#include "comot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>
#include <stdexcept>

namespace comot {
namespace {

struct Corners {
  double x1, y1, x2, y2;
};

Corners corners(const BoundingBox& b) { return {b.left(), b.top(), b.right(), b.bottom()}; }

Corners corners(const PixelBox& b) {
  return {b.left, b.top, b.left + b.width, b.top + b.height};
}

double span_overlap(double lo_a, double hi_a, double lo_b, double hi_b) {
  return std::max(0.0, std::min(hi_a, hi_b) - std::max(lo_a, lo_b));
}

double corner_area(const Corners& c) { return (c.x2 - c.x1) * (c.y2 - c.y1); }

double corner_iou(const Corners& a, const Corners& b) {
  const double inter = span_overlap(a.x1, a.x2, b.x1, b.x2) * span_overlap(a.y1, a.y2, b.y1, b.y2);
  const double uni = corner_area(a) + corner_area(b) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

template <typename Fn>
double exact_preimage(double guess, double target, Fn&& f) {
  if (!std::isfinite(guess) || f(guess) == target) {
    return guess;
  }
  double up = guess, down = guess;
  for (int step = 0; step < 64; ++step) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    if (f(up) == target) return up;
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (f(down) == target) return down;
  }
  return guess;
}

// Every extent that divides back to `size`, nearest first.
std::vector<double> extent_candidates(double guess, double size, double scale) {
  std::vector<double> out;
  if (!std::isfinite(guess)) return {guess};
  if (guess / scale == size) out.push_back(guess);
  double up = guess, down = guess;
  for (int step = 0; step < 64; ++step) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (up / scale == size) out.push_back(up);
    if (down / scale == size) out.push_back(down);
  }
  if (out.empty()) out.push_back(guess);
  return out;
}

// Origin and extent that from_pixel maps back to (center, size). A single
// extent does not always leave a reachable center, so every extent that
// preserves the size is tried.
std::pair<double, double> exact_span(double origin, double extent, double center, double size,
                                     double scale) {
  const std::vector<double> extents = extent_candidates(extent, size, scale);
  const std::vector<double> sums = extent_candidates(center * scale, center, scale);
  for (double e : extents) {
    const auto center_of = [&](double x) { return (x + 0.5 * e) / scale; };
    const double o = exact_preimage(origin, center, center_of);
    if (center_of(o) == center) return {o, e};
    // Near-zero origins have ulps far finer than the center; step the sum.
    for (double sum : sums) {
      if (center_of(sum - 0.5 * e) == center) return {sum - 0.5 * e, e};
    }
  }
  const double e = extents.front();
  return {exact_preimage(origin, center, [&](double x) { return (x + 0.5 * e) / scale; }), e};
}

void check_image(const ImageSize& image) {
  if (!(image.width > 0.0) || !(image.height > 0.0)) {
    throw std::invalid_argument("image dimensions must be positive");
  }
}

}  // namespace

BoundingBox BoundingBox::from_corners(double x1, double y1, double x2, double y2) {
  return {0.5 * (x1 + x2), 0.5 * (y1 + y2), x2 - x1, y2 - y1};
}

bool is_valid(const BoundingBox& box) {
  return std::isfinite(box.cx) && std::isfinite(box.cy) && std::isfinite(box.w) &&
         std::isfinite(box.h) && box.w >= 0.0 && box.h >= 0.0;
}

bool is_valid(const PixelBox& box) {
  return std::isfinite(box.left) && std::isfinite(box.top) && std::isfinite(box.width) &&
         std::isfinite(box.height) && box.width >= 0.0 && box.height >= 0.0;
}

double iou(const BoundingBox& a, const BoundingBox& b) { return corner_iou(corners(a), corners(b)); }

double giou(const BoundingBox& a, const BoundingBox& b) {
  const Corners ca = corners(a);
  const Corners cb = corners(b);
  const double inter =
      span_overlap(ca.x1, ca.x2, cb.x1, cb.x2) * span_overlap(ca.y1, ca.y2, cb.y1, cb.y2);
  const double uni = corner_area(ca) + corner_area(cb) - inter;
  const double hull = (std::max(ca.x2, cb.x2) - std::min(ca.x1, cb.x1)) *
                      (std::max(ca.y2, cb.y2) - std::min(ca.y1, cb.y1));
  if (!(hull > 0.0)) {
    return 0.0;
  }
  const double overlap = uni > 0.0 ? inter / uni : 0.0;
  return overlap - (hull - uni) / hull;
}

double l1_distance(const BoundingBox& a, const BoundingBox& b) {
  return std::abs(a.cx - b.cx) + std::abs(a.cy - b.cy) + std::abs(a.w - b.w) +
         std::abs(a.h - b.h);
}

PixelBox to_pixel(const BoundingBox& box, const ImageSize& image) {
  check_image(image);
  // Pick, among the doubles next to the plain product, one that from_pixel
  // maps back to exactly the original coordinate. Not every value has one;
  // the box read back then differs in the last bit and is itself exact.
  const auto [left, width] = exact_span(box.left() * image.width, box.w * image.width, box.cx,
                                        box.w, image.width);
  const auto [top, height] = exact_span(box.top() * image.height, box.h * image.height, box.cy,
                                        box.h, image.height);
  return {left, top, width, height};
}

BoundingBox from_pixel(const PixelBox& box, const ImageSize& image) {
  check_image(image);
  return {(box.left + 0.5 * box.width) / image.width, (box.top + 0.5 * box.height) / image.height,
          box.width / image.width, box.height / image.height};
}

double pixel_iou(const PixelBox& a, const PixelBox& b) { return corner_iou(corners(a), corners(b)); }

}  // namespace comot
