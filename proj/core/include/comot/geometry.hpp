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

#include <array>

namespace comot {

/// Axis-aligned box in normalized center format (cx, cy, w, h).
///
/// Coordinates are fractions of the image size. They are not clamped to
/// [0, 1]; only w >= 0, h >= 0 and finiteness are required.
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

  double left() const { return cx - 0.5 * w; }
  double top() const { return cy - 0.5 * h; }
  double right() const { return cx + 0.5 * w; }
  double bottom() const { return cy + 0.5 * h; }
  double area() const { return w * h; }

  std::array<double, 4> as_array() const { return {cx, cy, w, h}; }

  static BoundingBox from_corners(double x1, double y1, double x2, double y2);
};

/// Top-left/size box in pixels (MOTChallenge convention).
struct PixelBox {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

struct ImageSize {
  double width = 1920.0;
  double height = 1080.0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

bool is_valid(const BoundingBox& box);
bool is_valid(const PixelBox& box);

// Zero-area boxes are legal and simply contribute zero area.
double iou(const BoundingBox& a, const BoundingBox& b);
double giou(const BoundingBox& a, const BoundingBox& b);
double l1_distance(const BoundingBox& a, const BoundingBox& b);

// Throws std::invalid_argument for non-positive image dimensions.
PixelBox to_pixel(const BoundingBox& box, const ImageSize& image);
BoundingBox from_pixel(const PixelBox& box, const ImageSize& image);

/// IoU computed on the pixel-space versions of both boxes.
double pixel_iou(const PixelBox& a, const PixelBox& b);

}  // namespace comot
