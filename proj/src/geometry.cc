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

#include "detfair/geometry.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detfair/error.h"

namespace detfair {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kNumerical:
      return "numerical";
  }
  return "unknown";
}

BBox::BBox(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (!std::isfinite(x_min) || !std::isfinite(y_min) ||
      !std::isfinite(x_max) || !std::isfinite(y_max)) {
    throw ValidationError("box coordinates must be finite");
  }
  if (!(x_max > x_min) || !(y_max > y_min)) {
    std::ostringstream msg;
    msg << "degenerate box [" << x_min << ", " << y_min << ", " << x_max
        << ", " << y_max << "]: width and height must be positive";
    throw ValidationError(msg.str());
  }
}

BBox BBox::FromCenter(double center_x, double center_y, double width,
                      double height) {
  return BBox(center_x - 0.5 * width, center_y - 0.5 * height,
              center_x + 0.5 * width, center_y + 0.5 * height);
}

BBox BBox::FromArray(const std::array<double, 4>& corners) {
  return BBox(corners[0], corners[1], corners[2], corners[3]);
}

BBox BBox::Translated(double dx, double dy) const {
  return BBox(x_min_ + dx, y_min_ + dy, x_max_ + dx, y_max_ + dy);
}

BoxOffsets BoxOffsets::FromArray(const std::array<double, 4>& values) {
  return BoxOffsets{values[0], values[1], values[2], values[3]};
}

double Area(const BBox& box) { return box.width() * box.height(); }

double IntersectionArea(const BBox& a, const BBox& b) {
  const double w =
      std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double h =
      std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double Iou(const BBox& a, const BBox& b) {
  const double inter = IntersectionArea(a, b);
  if (inter == 0.0) return 0.0;
  const double uni = Area(a) + Area(b) - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

BoxOffsets EncodeOffsets(const BBox& gt, const BBox& anchor) {
  return BoxOffsets{
      (gt.center_x() - anchor.center_x()) / anchor.width(),
      (gt.center_y() - anchor.center_y()) / anchor.height(),
      std::log(gt.width() / anchor.width()),
      std::log(gt.height() / anchor.height()),
  };
}

BBox DecodeOffsets(const BoxOffsets& offsets, const BBox& anchor) {
  const double cx = anchor.center_x() + offsets.tx * anchor.width();
  const double cy = anchor.center_y() + offsets.ty * anchor.height();
  const double w = anchor.width() * std::exp(offsets.tw);
  const double h = anchor.height() * std::exp(offsets.th);
  return BBox::FromCenter(cx, cy, w, h);
}

}  // namespace detfair
