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


#include "detfair/matching_eval.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "detfair/error.h"
#include "oracles.h"

namespace detfair {
namespace {

using testing::OracleMatch;
using testing::Verdict;

GroundTruthInstance Gt(std::string id, BBox box, bool ignore = false,
                       std::optional<GroupLabel> group = std::nullopt,
                       std::string image = "img") {
  return GroundTruthInstance{.id = std::move(id),
                             .image_id = std::move(image),
                             .bbox = box,
                             .class_name = kPersonClass,
                             .group = group,
                             .ignore = ignore};
}

Detection Det(BBox box, double score, std::string image = "img") {
  return Detection{.image_id = std::move(image),
                   .bbox = box,
                   .class_name = kPersonClass,
                   .score = score};
}

MatchedDetection Ranked(std::size_t index, double score, MatchStatus s) {
  return MatchedDetection{.detection_index = index, .score = score, .status = s};
}

Verdict ToVerdict(MatchStatus s) {
  switch (s) {
    case MatchStatus::kTruePositive:
      return Verdict::kTp;
    case MatchStatus::kFalsePositive:
      return Verdict::kFp;
    case MatchStatus::kIgnored:
      return Verdict::kIgnored;
  }
  return Verdict::kFp;
}

TEST(IouThresholdTest, Range) {
  EXPECT_THROW(IouThreshold(0.0), ValidationError);
  EXPECT_THROW(IouThreshold(1.01), ValidationError);
  EXPECT_NO_THROW(IouThreshold(1.0));
  const std::vector<double> coco = CocoIouThresholds();
  ASSERT_EQ(coco.size(), 10u);
  EXPECT_DOUBLE_EQ(coco.front(), 0.5);
  EXPECT_DOUBLE_EQ(coco[5], 0.75);
  EXPECT_DOUBLE_EQ(coco.back(), 0.95);
}

TEST(MatchTest, SinglePair) {
  // IoU 0.8: 10x10 box vs the same box shrunk to 8x10.
  const std::vector<GroundTruthInstance> gt = {Gt("g", BBox(0, 0, 10, 10))};
  const std::vector<Detection> det = {Det(BBox(0, 0, 8, 10), 0.9)};
  const MatchOutcome out = Match(det, gt, IouThreshold(0.75));
  ASSERT_EQ(out.detections.size(), 1u);
  EXPECT_EQ(out.detections[0].status, MatchStatus::kTruePositive);
  EXPECT_EQ(out.detections[0].matched_instance_id, "g");
  EXPECT_EQ(out.num_positive_gt, 1u);
}

TEST(MatchTest, IgnoreRegionAbsorbsDetections) {
  const std::vector<GroundTruthInstance> gt = {
      Gt("g", BBox(0, 0, 10, 10), /*ignore=*/true)};
  const std::vector<Detection> det = {Det(BBox(0, 0, 9, 10), 0.9),
                                      Det(BBox(0, 0, 10, 9.5), 0.8)};
  const MatchOutcome out = Match(det, gt, IouThreshold(0.5));
  EXPECT_EQ(out.num_ignored, 2u);
  EXPECT_EQ(out.num_tp, 0u);
  EXPECT_EQ(out.num_fp, 0u);
  EXPECT_EQ(out.num_positive_gt, 0u);
}

TEST(MatchTest, SecondDetectionOnSameBoxIsFalsePositive) {
  const std::vector<GroundTruthInstance> gt = {Gt("g", BBox(0, 0, 10, 10))};
  const std::vector<Detection> det = {Det(BBox(0, 0, 10, 10), 0.5),
                                      Det(BBox(0, 0, 9, 10), 0.9)};
  const MatchOutcome out = Match(det, gt, IouThreshold(0.5));
  // The higher score claims the box even though it fits worse.
  EXPECT_EQ(out.detections[0].detection_index, 1u);
  EXPECT_EQ(out.detections[0].status, MatchStatus::kTruePositive);
  EXPECT_EQ(out.detections[1].status, MatchStatus::kFalsePositive);
}

TEST(MatchTest, RejectsMixedImages) {
  const std::vector<GroundTruthInstance> gt = {Gt("g", BBox(0, 0, 1, 1))};
  const std::vector<Detection> det = {Det(BBox(0, 0, 1, 1), 0.5, "other")};
  EXPECT_THROW(Match(det, gt, IouThreshold(0.5)), ValidationError);
}

// Enumerates every injective assignment of detections to free non-ignored
// boxes with IoU >= t and keeps the one that is lexicographically best in
// rank order, where each detection prefers a higher IoU, then a lower box
// index, then being matched at all.
std::vector<Verdict> ExhaustiveVerdicts(
    const std::vector<Detection>& dets,
    const std::vector<GroundTruthInstance>& gts, double t) {
  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  using Key = std::vector<std::pair<double, long>>;
  Key best_key;
  std::vector<long> best_assign;
  std::vector<long> assign(dets.size(), -1);
  std::vector<char> used(gts.size(), 0);
  std::function<void(std::size_t)> recurse = [&](std::size_t pos) {
    if (pos == order.size()) {
      Key key;
      for (std::size_t i : order) {
        const long g = assign[i];
        key.push_back(g < 0 ? std::make_pair(-1.0, 0L)
                            : std::make_pair(testing::BoxIou(dets[i].bbox,
                                                             gts[g].bbox),
                                             -g));
      }
      if (best_assign.empty() || key > best_key) {
        best_key = key;
        best_assign = assign;
      }
      return;
    }
    const std::size_t i = order[pos];
    assign[i] = -1;
    recurse(pos + 1);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || gts[g].ignore) continue;
      if (!(testing::BoxIou(dets[i].bbox, gts[g].bbox) >= t)) continue;
      used[g] = 1;
      assign[i] = static_cast<long>(g);
      recurse(pos + 1);
      used[g] = 0;
      assign[i] = -1;
    }
  };
  recurse(0);
  std::vector<Verdict> verdicts(dets.size(), Verdict::kFp);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (best_assign[i] >= 0) {
      verdicts[i] = Verdict::kTp;
      continue;
    }
    for (const auto& g : gts) {
      if (g.ignore && testing::BoxIou(dets[i].bbox, g.bbox) >= t) {
        verdicts[i] = Verdict::kIgnored;
      }
    }
  }
  return verdicts;
}

TEST(MatchTest, AgreesWithExhaustiveAssignment) {
  std::mt19937_64 rng(101);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    // Single image and small sizes keep enumeration cheap.
    for (auto& g : inst.gts) g.image_id = "img";
    for (auto& d : inst.dets) d.image_id = "img";
    if (inst.gts.size() > 4) {
      inst.gts.erase(inst.gts.begin() + 4, inst.gts.end());
    }
    if (inst.dets.size() > 5) {
      inst.dets.erase(inst.dets.begin() + 5, inst.dets.end());
    }
    for (double t : {0.3, 0.5, 0.75}) {
      const MatchOutcome out = Match(inst.dets, inst.gts, IouThreshold(t));
      const std::vector<Verdict> expected =
          ExhaustiveVerdicts(inst.dets, inst.gts, t);
      for (const MatchedDetection& m : out.detections) {
        EXPECT_EQ(ToVerdict(m.status), expected[m.detection_index])
            << "trial " << trial << " t " << t;
      }
      ++compared;
    }
  }
  EXPECT_EQ(compared, 1200);
}

TEST(AveragePrecisionTest, TrivialCases) {
  const std::vector<MatchedDetection> tp = {
      Ranked(0, 0.9, MatchStatus::kTruePositive)};
  EXPECT_DOUBLE_EQ(*AveragePrecision(tp, 1), 1.0);
  const std::vector<MatchedDetection> fp = {
      Ranked(0, 0.9, MatchStatus::kFalsePositive),
      Ranked(1, 0.8, MatchStatus::kFalsePositive)};
  EXPECT_DOUBLE_EQ(*AveragePrecision(fp, 1), 0.0);
  EXPECT_DOUBLE_EQ(*AveragePrecision({}, 3), 0.0);
  EXPECT_FALSE(AveragePrecision(fp, 0).has_value());
  EXPECT_THROW(AveragePrecision(tp, -1), ValidationError);
  const std::vector<MatchedDetection> two_tp = {
      Ranked(0, 0.9, MatchStatus::kTruePositive),
      Ranked(1, 0.8, MatchStatus::kTruePositive)};
  EXPECT_THROW(AveragePrecision(two_tp, 1), ValidationError);
}

TEST(AveragePrecisionTest, FixedPatternMatchesStaircase) {
  // 5 GT, 7 detections: T F T T F F T by descending score.
  const Verdict pattern[] = {Verdict::kTp, Verdict::kFp, Verdict::kTp,
                             Verdict::kTp, Verdict::kFp, Verdict::kFp,
                             Verdict::kTp};
  std::vector<MatchedDetection> matches;
  std::vector<OracleMatch> oracle;
  for (std::size_t i = 0; i < 7; ++i) {
    const double score = 0.95 - 0.1 * static_cast<double>(i);
    matches.push_back(Ranked(i, score,
                             pattern[i] == Verdict::kTp
                                 ? MatchStatus::kTruePositive
                                 : MatchStatus::kFalsePositive));
    oracle.push_back({i, score, pattern[i]});
  }
  EXPECT_NEAR(*AveragePrecision(matches, 5), *testing::OracleAp101(oracle, 5),
              1e-12);
  EXPECT_NEAR(*AveragePrecision(matches, 5, Interpolation::kAllPoints),
              *testing::OracleApAllPoints(oracle, 5), 1e-12);
  // Hand value for the all-points area: 0.2 * (1 + 0.75 + 0.75 + 4/7).
  EXPECT_NEAR(*AveragePrecision(matches, 5, Interpolation::kAllPoints),
              0.2 * (1 + 0.75 + 0.75 + 4.0 / 7.0), 1e-12);
}

TEST(AveragePrecisionTest, InputOrderDoesNotMatter) {
  std::vector<MatchedDetection> matches = {
      Ranked(2, 0.3, MatchStatus::kTruePositive),
      Ranked(0, 0.9, MatchStatus::kFalsePositive),
      Ranked(1, 0.6, MatchStatus::kTruePositive)};
  const double a = *AveragePrecision(matches, 3);
  std::reverse(matches.begin(), matches.end());
  EXPECT_EQ(*AveragePrecision(matches, 3), a);
}

TEST(EvaluateTest, PerfectDetector) {
  const std::vector<GroundTruthInstance> gt = {
      Gt("a", BBox(0, 0, 100, 200)), Gt("b", BBox(300, 0, 400, 200)),
      Gt("c", BBox(0, 0, 50, 50), false, std::nullopt, "img2")};
  std::vector<Detection> det;
  for (const auto& g : gt) det.push_back(Det(g.bbox, 1.0, g.image_id));
  const APReport r = Evaluate(det, gt);
  ASSERT_TRUE(r.defined());
  EXPECT_DOUBLE_EQ(*r.ap, 1.0);
  EXPECT_DOUBLE_EQ(*r.ap50, 1.0);
  EXPECT_DOUBLE_EQ(*r.ap75, 1.0);
  EXPECT_EQ(r.per_threshold.size(), 10u);
}

TEST(EvaluateTest, ThresholdStraddle) {
  // Each detection covers 60% of its box: IoU 0.6.
  const std::vector<GroundTruthInstance> gt = {Gt("a", BBox(0, 0, 10, 10)),
                                               Gt("b", BBox(50, 0, 60, 10))};
  const std::vector<Detection> det = {Det(BBox(0, 0, 6, 10), 0.9),
                                      Det(BBox(50, 0, 56, 10), 0.8)};
  const APReport r = Evaluate(det, gt);
  EXPECT_DOUBLE_EQ(*r.ap50, 1.0);
  EXPECT_DOUBLE_EQ(*r.ap75, 0.0);
  // 0.50, 0.55 and 0.60 pass (the comparison is >=); seven fail.
  EXPECT_DOUBLE_EQ(*r.ap, 0.3);
}

TEST(EvaluateTest, AbsentWithoutPositives) {
  const std::vector<GroundTruthInstance> gt = {
      Gt("a", BBox(0, 0, 10, 10), /*ignore=*/true)};
  const std::vector<Detection> det = {Det(BBox(0, 0, 10, 10), 0.9)};
  const APReport r = Evaluate(det, gt);
  EXPECT_FALSE(r.defined());
  EXPECT_FALSE(r.ap.has_value());
  EXPECT_TRUE(r.absent_reason.has_value());
}

TEST(EvaluateTest, OtherClassesAreSkipped) {
  std::vector<GroundTruthInstance> gt = {Gt("a", BBox(0, 0, 10, 10))};
  gt.push_back(gt[0]);
  gt[1].id = "car";
  gt[1].class_name = "car";
  std::vector<Detection> det = {Det(BBox(0, 0, 10, 10), 0.9)};
  det.push_back(det[0]);
  det[1].class_name = "car";
  det[1].score = 1.0;
  const APReport r = Evaluate(det, gt);
  EXPECT_DOUBLE_EQ(*r.ap, 1.0);
  EXPECT_EQ(r.per_threshold[0].num_gt, 1u);
}

TEST(EvaluateTest, MeanStaysWithinThresholdRange) {
  // Every threshold gives the same AP here; a plain mean of ten copies
  // rounds one ulp above them.
  const std::vector<GroundTruthInstance> gt = {
      Gt("g0", BBox(12, 24, 17, 37)), Gt("g1", BBox(36, 33, 55, 50)),
      Gt("g2", BBox(20, 17, 24, 21)), Gt("g3", BBox(30, 38, 45, 47), true)};
  const std::vector<Detection> det = {
      Det(BBox(11, 25, 21, 40), 0.140625), Det(BBox(36, 33, 56, 50), 0.53125),
      Det(BBox(17, 13, 22, 21), 0.71875),  Det(BBox(39, 4, 43, 16), 0.875),
      Det(BBox(22, 14, 26, 31), 0.71875),  Det(BBox(35, 29, 54, 53), 0.09375),
      Det(BBox(20, 17, 26, 19), 0.484375)};
  const APReport r = Evaluate(det, gt);
  for (const ThresholdResult& tr : r.per_threshold) {
    ASSERT_EQ(tr.ap, r.per_threshold[0].ap);
  }
  EXPECT_EQ(*r.ap, *r.ap50);
}

TEST(EvaluateTest, RandomInstancesMatchOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    const long num_gt = testing::CountPositives(inst.gts, kPersonClass);
    for (Interpolation interp :
         {Interpolation::kCoco101, Interpolation::kAllPoints}) {
      EvalConfig config;
      config.interpolation = interp;
      const APReport r = Evaluate(inst.dets, inst.gts, config);
      for (const ThresholdResult& tr : r.per_threshold) {
        const auto oracle = testing::OracleMatchAll(inst.dets, inst.gts,
                                                    kPersonClass,
                                                    tr.iou_threshold);
        const auto expected = interp == Interpolation::kCoco101
                                  ? testing::OracleAp101(oracle, num_gt)
                                  : testing::OracleApAllPoints(oracle, num_gt);
        ASSERT_EQ(tr.ap.has_value(), expected.has_value());
        if (expected) EXPECT_NEAR(*tr.ap, *expected, 1e-9) << trial;
      }
    }
  }
}

TEST(GroupEvaluateTest, SingleGroupEqualsPlainEvaluate) {
  const std::vector<GroundTruthInstance> gt = {
      Gt("a", BBox(0, 0, 10, 10), false, GroupLabel::kLS),
      Gt("b", BBox(20, 0, 30, 10), false, GroupLabel::kLS, "img2")};
  Dataset d;
  d.images = {{"img", 100, 100, TimeOfDay::kDay},
              {"img2", 100, 100, TimeOfDay::kDay}};
  d.instances = gt;
  const std::vector<Detection> det = {Det(BBox(0, 0, 9, 10), 0.7),
                                      Det(BBox(60, 0, 70, 10), 0.9),
                                      Det(BBox(20, 0, 30, 8), 0.4, "img2")};
  const APReport group = GroupEvaluate(det, d, GroupLabel::kLS);
  const APReport plain = Evaluate(det, gt);
  ASSERT_EQ(group.per_threshold.size(), plain.per_threshold.size());
  for (std::size_t i = 0; i < plain.per_threshold.size(); ++i) {
    EXPECT_EQ(group.per_threshold[i].ap, plain.per_threshold[i].ap);
  }
  EXPECT_FALSE(GroupEvaluate(det, d, GroupLabel::kDS).defined());
  EXPECT_THROW(GroupEvaluate(det, d, GroupLabel::kUnknown), ValidationError);
}

TEST(GroupEvaluateTest, CrossGroupHitIsIgnored) {
  Dataset d;
  d.images = {{"img", 100, 100, TimeOfDay::kDay}};
  d.instances = {Gt("ls", BBox(0, 0, 10, 10), false, GroupLabel::kLS),
                 Gt("ds", BBox(50, 0, 60, 10), false, GroupLabel::kDS)};
  const std::vector<Detection> det = {Det(BBox(50, 0, 60, 10), 0.9)};
  const APReport ls = GroupEvaluate(det, d, GroupLabel::kLS);
  EXPECT_EQ(ls.per_threshold[0].num_ignored, 1u);
  EXPECT_EQ(ls.per_threshold[0].num_fp, 0u);
  EXPECT_DOUBLE_EQ(*ls.ap, 0.0);

  GroupEvalOptions fp_mode;
  fp_mode.cross_group = CrossGroupMode::kFalsePositive;
  const APReport strict = GroupEvaluate(det, d, GroupLabel::kLS, fp_mode);
  EXPECT_EQ(strict.per_threshold[0].num_fp, 1u);
  EXPECT_EQ(strict.per_threshold[0].num_ignored, 0u);

  const APReport ds = GroupEvaluate(det, d, GroupLabel::kDS);
  EXPECT_DOUBLE_EQ(*ds.ap, 1.0);
}

TEST(GroupEvaluateTest, ImagesWithoutLabeledPersonsAreOutOfScope) {
  Dataset d;
  d.images = {{"img", 100, 100, TimeOfDay::kDay},
              {"empty", 100, 100, TimeOfDay::kDay}};
  d.instances = {Gt("ls", BBox(0, 0, 10, 10), false, GroupLabel::kLS),
                 Gt("u", BBox(0, 0, 10, 10), false, std::nullopt, "empty")};
  const std::vector<Detection> det = {Det(BBox(0, 0, 10, 10), 0.5),
                                      Det(BBox(50, 50, 60, 60), 0.9, "empty")};
  const GroupScope scope = BuildGroupScope(det, d, GroupLabel::kLS);
  EXPECT_EQ(scope.image_ids, std::vector<std::string>{"img"});
  EXPECT_EQ(scope.detections.size(), 1u);
  EXPECT_DOUBLE_EQ(*GroupEvaluate(det, d, GroupLabel::kLS).ap, 1.0);
}

// Recount for random two-group scenes: applies the scoping and ignore rules
// by hand, then tallies with the flat-list oracle.
TEST(GroupEvaluateTest, RandomScenesMatchRecount) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> label(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    Dataset d;
    d.images = {{"img0", 100, 100, TimeOfDay::kDay},
                {"img1", 100, 100, TimeOfDay::kNight}};
    for (auto& g : inst.gts) {
      const int l = label(rng);
      if (l < 3) g.group = static_cast<GroupLabel>(l);
      d.instances.push_back(g);
    }
    for (GroupLabel target : {GroupLabel::kLS, GroupLabel::kDS}) {
      for (CrossGroupMode mode :
           {CrossGroupMode::kIgnore, CrossGroupMode::kFalsePositive}) {
        std::vector<GroundTruthInstance> gts;
        std::vector<Detection> dets;
        for (const std::string image : {"img0", "img1"}) {
          bool labeled = false;
          for (const auto& g : d.instances) {
            labeled |= g.image_id == image && !g.ignore &&
                       (g.group == GroupLabel::kLS || g.group == GroupLabel::kDS);
          }
          if (!labeled) continue;
          for (auto g : d.instances) {
            if (g.image_id != image) continue;
            const bool other_group =
                !g.ignore && g.group.has_value() && *g.group != target &&
                *g.group != GroupLabel::kUnknown;
            if (other_group && mode == CrossGroupMode::kFalsePositive) continue;
            if (g.group != target) g.ignore = true;
            gts.push_back(g);
          }
          for (const auto& det : inst.dets) {
            if (det.image_id == image) dets.push_back(det);
          }
        }
        GroupEvalOptions options;
        options.cross_group = mode;
        const APReport r = GroupEvaluate(inst.dets, d, target, options);
        const long num_gt = testing::CountPositives(gts, kPersonClass);
        ASSERT_EQ(r.defined(), num_gt > 0);
        for (const ThresholdResult& tr : r.per_threshold) {
          const auto oracle = testing::OracleMatchAll(dets, gts, kPersonClass,
                                                      tr.iou_threshold);
          std::size_t tp = 0, fp = 0, ig = 0;
          for (const OracleMatch& m : oracle) {
            tp += m.verdict == Verdict::kTp;
            fp += m.verdict == Verdict::kFp;
            ig += m.verdict == Verdict::kIgnored;
          }
          EXPECT_EQ(tr.num_tp, tp);
          EXPECT_EQ(tr.num_fp, fp);
          EXPECT_EQ(tr.num_ignored, ig);
          EXPECT_EQ(tr.num_gt, static_cast<std::size_t>(num_gt));
        }
      }
    }
  }
}

TEST(InequityTest, Examples) {
  EXPECT_DOUBLE_EQ(PredictiveInequity(std::vector<double>{0.1},
                                      std::vector<double>{0.5}),
                   0.0);
  EXPECT_DOUBLE_EQ(PredictiveInequity(std::vector<double>{0.5},
                                      std::vector<double>{0.1}),
                   0.4);
  EXPECT_THROW(PredictiveInequity({}, std::vector<double>{0.1}),
               ValidationError);
  EXPECT_THROW(PredictiveInequity(std::vector<double>{NAN},
                                  std::vector<double>{0.1}),
               ValidationError);
}

TEST(InequityTest, MatchesDoubleLoop) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> ls(20), ds(20);
    for (double& v : ls) v = u(rng);
    for (double& v : ds) v = u(rng);
    double sum = 0;
    for (double a : ls) {
      for (double b : ds) sum += a > b ? a - b : 0.0;
    }
    EXPECT_NEAR(PredictiveInequity(ls, ds), sum / 400.0, 1e-12);
  }
}

TEST(InequityTest, Identities) {
  // Dyadic values and power-of-two sizes keep the arithmetic exact.
  const std::vector<double> high = {0.75, 0.5, 0.875, 0.625};
  const std::vector<double> low = {0.25, 0.125, 0.5, 0.375, 0.0, 0.25, 0.5,
                                   0.125};
  double mean_high = 0, mean_low = 0;
  for (double v : high) mean_high += v / 4;
  for (double v : low) mean_low += v / 8;
  EXPECT_EQ(PredictiveInequity(high, low), mean_high - mean_low);
  EXPECT_EQ(PredictiveInequity(low, high), 0.0);
}

TEST(PerInstanceLossesTest, BestIouAmongConfidentDetections) {
  Dataset d;
  d.images = {{"img", 100, 100, TimeOfDay::kDay}};
  d.instances = {Gt("ls", BBox(0, 0, 10, 10), false, GroupLabel::kLS),
                 Gt("ds", BBox(50, 0, 60, 10), false, GroupLabel::kDS),
                 Gt("ds2", BBox(80, 0, 90, 10), true, GroupLabel::kDS)};
  const std::vector<Detection> det = {
      Det(BBox(0, 0, 5, 10), 0.9),    // IoU 0.5 with ls
      Det(BBox(0, 0, 10, 10), 0.5),   // exact but below the cutoff
      Det(BBox(50, 0, 60, 10), 0.86)};
  EXPECT_EQ(PerInstanceLosses(det, d, GroupLabel::kLS),
            std::vector<double>{0.5});
  EXPECT_EQ(PerInstanceLosses(det, d, GroupLabel::kDS),
            std::vector<double>{0.0});
  EXPECT_EQ(PerInstanceLosses(det, d, GroupLabel::kLS, 0.5),
            std::vector<double>{0.0});

  const GroupGapReport gap = EvaluateGroupGap(det, d);
  EXPECT_DOUBLE_EQ(*gap.inequity, 0.5);
  EXPECT_DOUBLE_EQ(*gap.gap_ap50, *gap.ls.ap50 - *gap.ds.ap50);
}

}  // namespace
}  // namespace detfair
