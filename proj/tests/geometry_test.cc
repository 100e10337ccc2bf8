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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "detfair/error.h"
#include "oracles.h"

namespace detfair {
namespace {

TEST(BBoxTest, RejectsDegenerateAndNonFinite) {
  EXPECT_THROW(BBox(0, 0, 0, 10), ValidationError);
  EXPECT_THROW(BBox(0, 0, 10, -1), ValidationError);
  EXPECT_THROW(BBox(0, 0, NAN, 1), ValidationError);
  EXPECT_THROW(BBox(0, 0, INFINITY, 1), ValidationError);
  EXPECT_NO_THROW(BBox(-5, -5, 1e-3, 1e-3));
}

TEST(BBoxTest, CenterRoundtrip) {
  const BBox box = BBox::FromCenter(10, 20, 4, 6);
  EXPECT_EQ(box, BBox(8, 17, 12, 23));
  EXPECT_DOUBLE_EQ(box.center_x(), 10);
  EXPECT_DOUBLE_EQ(box.center_y(), 20);
}

TEST(AreaTest, DirectProduct) {
  EXPECT_DOUBLE_EQ(Area(BBox(0, 0, 100, 100)), 10000);
  EXPECT_DOUBLE_EQ(Area(BBox(0, 0, 1, 1)), 1);
  EXPECT_DOUBLE_EQ(Area(BBox(2.5, 0, 5.0, 4.0)), 10.0);
}

TEST(IouTest, BasicCases) {
  const BBox a(0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(Iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(Iou(a, BBox(20, 20, 30, 30)), 0.0);
  EXPECT_DOUBLE_EQ(Iou(a, BBox(10, 0, 20, 10)), 0.0);  // touching edge
  EXPECT_DOUBLE_EQ(Iou(a, BBox(5, 0, 15, 10)), 1.0 / 3.0);
}

TEST(IouTest, HalfShiftMatchesPixelCount) {
  EXPECT_DOUBLE_EQ(testing::PixelIou(0, 0, 10, 10, 5, 0, 15, 10), 1.0 / 3.0);
  // Sub-pixel: scale the lattice by 2 to cover the half-pixel case.
  EXPECT_DOUBLE_EQ(Iou(BBox(0, 0, 1, 1), BBox(0.5, 0, 1.5, 1)),
                   testing::PixelIou(0, 0, 2, 2, 1, 0, 3, 2));
}

TEST(IouTest, MatchesPixelGridOnRandomLatticeBoxes) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pos(0, 30);
  std::uniform_int_distribution<int> len(1, 15);
  for (int trial = 0; trial < 500; ++trial) {
    const int ax = pos(rng), ay = pos(rng), aw = len(rng), ah = len(rng);
    const int bx = pos(rng), by = pos(rng), bw = len(rng), bh = len(rng);
    const double expected =
        testing::PixelIou(ax, ay, ax + aw, ay + ah, bx, by, bx + bw, by + bh);
    const BBox a(ax, ay, ax + aw, ay + ah);
    const BBox b(bx, by, bx + bw, by + bh);
    EXPECT_NEAR(Iou(a, b), expected, 1e-15);
    EXPECT_DOUBLE_EQ(Iou(a, b), Iou(b, a));
    EXPECT_GE(Iou(a, b), 0.0);
    EXPECT_LE(Iou(a, b), 1.0);
  }
}

TEST(OffsetsTest, EncodeExamples) {
  const BBox anchor(0, 0, 2, 2);
  EXPECT_EQ(EncodeOffsets(anchor, anchor), BoxOffsets{});

  const BoxOffsets wide = EncodeOffsets(BBox(-1, 0, 3, 2), anchor);
  EXPECT_DOUBLE_EQ(wide.tx, 0);
  EXPECT_DOUBLE_EQ(wide.ty, 0);
  EXPECT_DOUBLE_EQ(wide.tw, std::log(2.0));
  EXPECT_DOUBLE_EQ(wide.th, 0);

  const BoxOffsets t = EncodeOffsets(BBox(0, 0, 4, 4), anchor);
  EXPECT_DOUBLE_EQ(t.tx, 0.5);
  EXPECT_DOUBLE_EQ(t.ty, 0.5);
  EXPECT_DOUBLE_EQ(t.tw, std::log(2.0));
  EXPECT_DOUBLE_EQ(t.th, std::log(2.0));
}

TEST(OffsetsTest, DecodeExamples) {
  const BBox anchor(0, 0, 2, 2);
  EXPECT_EQ(DecodeOffsets(BoxOffsets{}, anchor), anchor);
  const BBox grown =
      DecodeOffsets(BoxOffsets{0, 0, std::log(2.0), std::log(2.0)}, anchor);
  EXPECT_NEAR(grown.x_min(), -1, 1e-12);
  EXPECT_NEAR(grown.y_min(), -1, 1e-12);
  EXPECT_NEAR(grown.x_max(), 3, 1e-12);
  EXPECT_NEAR(grown.y_max(), 3, 1e-12);
}

TEST(OffsetsTest, RoundtripOnRandomPairs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-500, 500);
  std::uniform_real_distribution<double> len(1, 300);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const BBox gt = BBox::FromCenter(pos(rng), pos(rng), len(rng), len(rng));
    const BBox anchor =
        BBox::FromCenter(pos(rng), pos(rng), len(rng), len(rng));
    const BBox back = DecodeOffsets(EncodeOffsets(gt, anchor), anchor);
    for (int i = 0; i < 4; ++i) {
      worst = std::max(worst, std::fabs(back.corners()[i] - gt.corners()[i]));
    }
  }
  EXPECT_LE(worst, 1e-9);
}

}  // namespace
}  // namespace detfair
