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

// Greedy IoU matching, COCO-style average precision, per-group evaluation
// and the predictive-inequity gap metric.
//
// Matching follows the COCO protocol: detections are visited in descending
// score order (ties keep input order) and each one claims the unmatched,
// non-ignored ground truth with the highest IoU >= T. A detection whose only
// qualifying overlap is an ignore region is IGNORED and never enters the
// precision/recall sequence. Ignore regions may absorb any number of
// detections.

#ifndef DETFAIR_MATCHING_EVAL_H_
#define DETFAIR_MATCHING_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "detfair/dataset.h"

namespace detfair {

class IouThreshold {
 public:
  // Throws ValidationError unless 0 < value <= 1.
  explicit IouThreshold(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// {0.50, 0.55, ..., 0.95}.
std::vector<double> CocoIouThresholds();

enum class MatchStatus { kTruePositive, kFalsePositive, kIgnored };

const char* MatchStatusName(MatchStatus status);

struct MatchedDetection {
  // Index into the detection span handed to Match / Evaluate.
  std::size_t detection_index = 0;
  double score = 0.0;
  MatchStatus status = MatchStatus::kFalsePositive;
  std::optional<std::string> matched_instance_id;
};

struct MatchOutcome {
  // Sorted by descending score, ties by detection_index.
  std::vector<MatchedDetection> detections;
  std::size_t num_positive_gt = 0;
  std::size_t num_tp = 0;
  std::size_t num_fp = 0;
  std::size_t num_ignored = 0;
};

// Matches the detections and ground truth of a single image and class.
// Throws ValidationError if image ids or classes are mixed.
MatchOutcome Match(std::span<const Detection> detections,
                   std::span<const GroundTruthInstance> ground_truth,
                   IouThreshold threshold);

enum class Interpolation {
  kCoco101,    // max precision at recall >= r on r in {0, 0.01, ..., 1}
  kAllPoints,  // area under the monotone precision envelope
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

// Precision/recall after each non-ignored detection in ranked order.
std::vector<PrPoint> PrecisionRecallCurve(
    std::span<const MatchedDetection> matches, std::int64_t num_gt);

// Ranks `matches` by (score desc, detection_index asc), drops IGNORED
// entries and integrates the interpolated curve. Returns nullopt when
// num_gt == 0, since AP is undefined without positives. Throws
// ValidationError for negative num_gt or more true positives than
// ground truth.
std::optional<double> AveragePrecision(
    std::span<const MatchedDetection> matches, std::int64_t num_gt,
    Interpolation interpolation = Interpolation::kCoco101);

struct EvalConfig {
  std::vector<double> iou_thresholds = CocoIouThresholds();
  Interpolation interpolation = Interpolation::kCoco101;
  std::string class_name = kPersonClass;
};

struct ThresholdResult {
  double iou_threshold = 0.0;
  std::optional<double> ap;
  std::size_t num_gt = 0;
  std::size_t num_tp = 0;
  std::size_t num_fp = 0;
  std::size_t num_ignored = 0;
};

struct APReport {
  std::vector<ThresholdResult> per_threshold;
  // Mean over the configured thresholds.
  std::optional<double> ap;
  // Present when 0.5 / 0.75 are among the configured thresholds.
  std::optional<double> ap50;
  std::optional<double> ap75;
  // Set when the report is absent (no positives in scope).
  std::optional<std::string> absent_reason;

  bool defined() const { return !absent_reason.has_value(); }
  std::optional<double> AtThreshold(double iou) const;
};

// Per-threshold matching and AP over all images for config.class_name.
APReport Evaluate(std::span<const Detection> detections,
                  std::span<const GroundTruthInstance> ground_truth,
                  const EvalConfig& config = {});

// Matches at a single threshold across all images, returning every
// detection of config.class_name with its status.
std::vector<MatchedDetection> MatchAll(
    std::span<const Detection> detections,
    std::span<const GroundTruthInstance> ground_truth,
    const std::string& class_name, IouThreshold threshold);

// How persons of the non-target skin-tone group are treated in per-group
// evaluation.
enum class CrossGroupMode {
  kIgnore,         // ignore regions (default)
  kFalsePositive,  // removed from ground truth, so hits on them count as FP
};

struct GroupEvalOptions {
  EvalConfig eval;
  CrossGroupMode cross_group = CrossGroupMode::kIgnore;
};

// Restricted to images holding at least one non-ignored LS or DS person.
// Non-ignored persons of `group` are positives; every other person in scope
// (the other group, U/N/unlabeled, or already ignored) is an ignore region.
// Returns an absent report when the group has no positives in scope.
APReport GroupEvaluate(std::span<const Detection> detections,
                       const Dataset& dataset, GroupLabel group,
                       const GroupEvalOptions& options = {});

// The ground truth and detections GroupEvaluate scores, exposed for tests
// and reports.
struct GroupScope {
  std::vector<GroundTruthInstance> ground_truth;
  std::vector<Detection> detections;
  std::vector<std::string> image_ids;
};
GroupScope BuildGroupScope(std::span<const Detection> detections,
                           const Dataset& dataset, GroupLabel group,
                           const GroupEvalOptions& options = {});

inline constexpr double kDefaultInequityScoreCutoff = 0.85;

// Default per-instance loss for the inequity metric: 1 - best IoU between a
// non-ignored `group` person and any same-image person detection with
// score >= score_cutoff, clamped to [0, 1]. Order follows the dataset.
std::vector<double> PerInstanceLosses(std::span<const Detection> detections,
                                      const Dataset& dataset, GroupLabel group,
                                      double score_cutoff =
                                          kDefaultInequityScoreCutoff);

// Mean over all (LS, DS) pairs of max(loss_ls - loss_ds, 0). Throws
// ValidationError when either list is empty or holds non-finite values.
double PredictiveInequity(std::span<const double> losses_ls,
                          std::span<const double> losses_ds);

struct GroupGapReport {
  APReport ls;
  APReport ds;
  // value(LS) - value(DS); empty when either side is absent.
  std::optional<double> gap_ap;
  std::optional<double> gap_ap50;
  std::optional<double> gap_ap75;
  std::optional<double> inequity;
};

GroupGapReport MakeGroupGapReport(APReport ls, APReport ds,
                                  std::optional<double> inequity);

// GroupEvaluate for both groups plus the default-loss inequity.
GroupGapReport EvaluateGroupGap(std::span<const Detection> detections,
                                const Dataset& dataset,
                                const GroupEvalOptions& options = {},
                                double score_cutoff =
                                    kDefaultInequityScoreCutoff);

}  // namespace detfair

#endif  // DETFAIR_MATCHING_EVAL_H_
