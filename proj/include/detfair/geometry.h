// Copyright 2026 The Detfair Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Axis-aligned boxes in pixel coordinates (image frame, y pointing down),
// intersection-over-union, and the anchor-relative offset encoding used by
// the box-regression loss.

#ifndef DETFAIR_GEOMETRY_H_
#define DETFAIR_GEOMETRY_H_

#include <array>

namespace detfair {

// Corner-form box with strictly positive width and height. Construction
// validates the invariant and throws ValidationError on degenerate or
// non-finite input, so every BBox value in the program is usable in log
// ratios.
class BBox {
 public:
  BBox(double x_min, double y_min, double x_max, double y_max);

  static BBox FromCenter(double center_x, double center_y, double width,
                         double height);
  // Accepts [x_min, y_min, x_max, y_max].
  static BBox FromArray(const std::array<double, 4>& corners);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }

  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double center_x() const { return x_min_ + 0.5 * width(); }
  double center_y() const { return y_min_ + 0.5 * height(); }

  std::array<double, 4> corners() const {
    return {x_min_, y_min_, x_max_, y_max_};
  }

  BBox Translated(double dx, double dy) const;

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  double x_min_;
  double y_min_;
  double x_max_;
  double y_max_;
};

// Regression targets relative to an anchor: center shifts normalized by the
// anchor size and log size ratios.
struct BoxOffsets {
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;

  std::array<double, 4> AsArray() const { return {tx, ty, tw, th}; }
  static BoxOffsets FromArray(const std::array<double, 4>& values);

  friend bool operator==(const BoxOffsets&, const BoxOffsets&) = default;
};

double Area(const BBox& box);

// Area of the overlap of two boxes, 0 when they are disjoint.
double IntersectionArea(const BBox& a, const BBox& b);

// |a ∩ b| / |a ∪ b|. Symmetric, in [0, 1], exactly 1 for identical boxes.
double Iou(const BBox& a, const BBox& b);

BoxOffsets EncodeOffsets(const BBox& gt, const BBox& anchor);
BBox DecodeOffsets(const BoxOffsets& offsets, const BBox& anchor);

}  // namespace detfair

#endif  // DETFAIR_GEOMETRY_H_
