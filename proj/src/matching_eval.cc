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
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

#include "detfair/error.h"

namespace detfair {
namespace {

constexpr double kThresholdMatchTolerance = 1e-9;

// Descending score; ties keep the original order.
std::vector<std::size_t> RankByScore(std::span<const Detection> detections) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });
  return order;
}

bool RankedBefore(const MatchedDetection& a, const MatchedDetection& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.detection_index < b.detection_index;
}

}  // namespace

IouThreshold::IouThreshold(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << "IoU threshold " << value << " outside (0, 1]";
    throw ValidationError(msg.str());
  }
}

std::vector<double> CocoIouThresholds() {
  std::vector<double> thresholds;
  for (int i = 0; i < 10; ++i) thresholds.push_back((50 + 5 * i) / 100.0);
  return thresholds;
}

const char* MatchStatusName(MatchStatus status) {
  switch (status) {
    case MatchStatus::kTruePositive:
      return "TP";
    case MatchStatus::kFalsePositive:
      return "FP";
    case MatchStatus::kIgnored:
      return "IGNORED";
  }
  return "?";
}

MatchOutcome Match(std::span<const Detection> detections,
                   std::span<const GroundTruthInstance> ground_truth,
                   IouThreshold threshold) {
  const std::string* image_id = nullptr;
  const std::string* class_name = nullptr;
  auto check = [&](const std::string& image, const std::string& cls) {
    if (image_id == nullptr) {
      image_id = &image;
      class_name = &cls;
      return;
    }
    if (image != *image_id) {
      throw ValidationError("Match: mixed image ids '" + *image_id +
                            "' and '" + image + "'");
    }
    if (cls != *class_name) {
      throw ValidationError("Match: mixed classes '" + *class_name +
                            "' and '" + cls + "'");
    }
  };
  for (const Detection& det : detections) check(det.image_id, det.class_name);
  for (const GroundTruthInstance& gt : ground_truth) {
    check(gt.image_id, gt.class_name);
  }

  MatchOutcome outcome;
  std::vector<bool> taken(ground_truth.size(), false);
  for (const GroundTruthInstance& gt : ground_truth) {
    if (!gt.ignore) ++outcome.num_positive_gt;
  }

  const double t = threshold.value();
  for (std::size_t index : RankByScore(detections)) {
    const Detection& det = detections[index];
    MatchedDetection matched{.detection_index = index, .score = det.score};

    std::optional<std::size_t> best;
    double best_iou = -1.0;
    bool overlaps_ignore = false;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      const GroundTruthInstance& gt = ground_truth[g];
      const double iou = Iou(det.bbox, gt.bbox);
      if (iou < t) continue;
      if (gt.ignore) {
        overlaps_ignore = true;
        continue;
      }
      if (taken[g]) continue;
      if (iou > best_iou) {
        best_iou = iou;
        best = g;
      }
    }

    if (best) {
      taken[*best] = true;
      matched.status = MatchStatus::kTruePositive;
      matched.matched_instance_id = ground_truth[*best].id;
      ++outcome.num_tp;
    } else if (overlaps_ignore) {
      matched.status = MatchStatus::kIgnored;
      ++outcome.num_ignored;
    } else {
      matched.status = MatchStatus::kFalsePositive;
      ++outcome.num_fp;
    }
    outcome.detections.push_back(std::move(matched));
  }
  return outcome;
}

std::vector<PrPoint> PrecisionRecallCurve(
    std::span<const MatchedDetection> matches, std::int64_t num_gt) {
  if (num_gt < 0) {
    throw ValidationError("ground-truth count must be non-negative");
  }
  std::vector<MatchedDetection> ranked(matches.begin(), matches.end());
  std::sort(ranked.begin(), ranked.end(), RankedBefore);

  std::vector<PrPoint> curve;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (const MatchedDetection& m : ranked) {
    if (m.status == MatchStatus::kIgnored) continue;
    if (m.status == MatchStatus::kTruePositive) {
      ++tp;
    } else {
      ++fp;
    }
    if (tp > num_gt) {
      throw ValidationError("more true positives than ground-truth boxes");
    }
    const double recall =
        num_gt > 0 ? static_cast<double>(tp) / static_cast<double>(num_gt)
                   : 0.0;
    curve.push_back(PrPoint{
        .recall = recall,
        .precision = static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return curve;
}

std::optional<double> AveragePrecision(
    std::span<const MatchedDetection> matches, std::int64_t num_gt,
    Interpolation interpolation) {
  std::vector<PrPoint> curve = PrecisionRecallCurve(matches, num_gt);
  if (num_gt == 0) return std::nullopt;

  // Monotone envelope: precision[i] = max precision at any later point.
  for (std::size_t i = curve.size(); i-- > 1;) {
    curve[i - 1].precision =
        std::max(curve[i - 1].precision, curve[i].precision);
  }

  if (interpolation == Interpolation::kAllPoints) {
    double area = 0.0;
    double previous_recall = 0.0;
    for (const PrPoint& point : curve) {
      area += (point.recall - previous_recall) * point.precision;
      previous_recall = point.recall;
    }
    return area;
  }

  double sum = 0.0;
  auto it = curve.begin();
  for (int r = 0; r <= 100; ++r) {
    const double level = r / 100.0;
    it = std::lower_bound(it, curve.end(), level,
                          [](const PrPoint& p, double v) { return p.recall < v; });
    if (it == curve.end()) break;
    sum += it->precision;
  }
  return sum / 101.0;
}

std::optional<double> APReport::AtThreshold(double iou) const {
  for (const ThresholdResult& result : per_threshold) {
    if (std::abs(result.iou_threshold - iou) <= kThresholdMatchTolerance) {
      return result.ap;
    }
  }
  return std::nullopt;
}

std::vector<MatchedDetection> MatchAll(
    std::span<const Detection> detections,
    std::span<const GroundTruthInstance> ground_truth,
    const std::string& class_name, IouThreshold threshold) {
  struct ImageBucket {
    std::vector<Detection> detections;
    std::vector<std::size_t> detection_indices;
    std::vector<GroundTruthInstance> ground_truth;
  };
  std::map<std::string, ImageBucket, std::less<>> buckets;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].class_name != class_name) continue;
    ImageBucket& bucket = buckets[detections[i].image_id];
    bucket.detections.push_back(detections[i]);
    bucket.detection_indices.push_back(i);
  }
  for (const GroundTruthInstance& gt : ground_truth) {
    if (gt.class_name != class_name) continue;
    buckets[gt.image_id].ground_truth.push_back(gt);
  }

  std::vector<MatchedDetection> all;
  for (auto& [image_id, bucket] : buckets) {
    MatchOutcome outcome =
        Match(bucket.detections, bucket.ground_truth, threshold);
    for (MatchedDetection& m : outcome.detections) {
      m.detection_index = bucket.detection_indices[m.detection_index];
      all.push_back(std::move(m));
    }
  }
  std::sort(all.begin(), all.end(), RankedBefore);
  return all;
}

APReport Evaluate(std::span<const Detection> detections,
                  std::span<const GroundTruthInstance> ground_truth,
                  const EvalConfig& config) {
  if (config.iou_thresholds.empty()) {
    throw ValidationError("at least one IoU threshold is required");
  }
  std::size_t num_gt = 0;
  for (const GroundTruthInstance& gt : ground_truth) {
    if (gt.class_name == config.class_name && !gt.ignore) ++num_gt;
  }

  APReport report;
  for (double t : config.iou_thresholds) {
    const IouThreshold threshold(t);
    const std::vector<MatchedDetection> matches =
        MatchAll(detections, ground_truth, config.class_name, threshold);
    ThresholdResult result{.iou_threshold = t, .num_gt = num_gt};
    for (const MatchedDetection& m : matches) {
      switch (m.status) {
        case MatchStatus::kTruePositive:
          ++result.num_tp;
          break;
        case MatchStatus::kFalsePositive:
          ++result.num_fp;
          break;
        case MatchStatus::kIgnored:
          ++result.num_ignored;
          break;
      }
    }
    result.ap = AveragePrecision(matches, static_cast<std::int64_t>(num_gt),
                                 config.interpolation);
    report.per_threshold.push_back(result);
  }

  if (num_gt == 0) {
    report.absent_reason = "no non-ignored '" + config.class_name +
                           "' ground truth in scope";
    return report;
  }
  double sum = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  for (const ThresholdResult& result : report.per_threshold) {
    sum += *result.ap;
    lo = std::min(lo, *result.ap);
    hi = std::max(hi, *result.ap);
  }
  // Rounding can push the mean an ulp past its terms.
  report.ap = std::clamp(
      sum / static_cast<double>(report.per_threshold.size()), lo, hi);
  report.ap50 = report.AtThreshold(0.50);
  report.ap75 = report.AtThreshold(0.75);
  return report;
}

GroupScope BuildGroupScope(std::span<const Detection> detections,
                           const Dataset& dataset, GroupLabel group,
                           const GroupEvalOptions& options) {
  if (group != GroupLabel::kLS && group != GroupLabel::kDS) {
    throw ValidationError("per-group evaluation targets LS or DS only");
  }
  const std::string& cls = options.eval.class_name;
  auto is_labeled = [](const GroundTruthInstance& gt) {
    return gt.is_person() && !gt.ignore &&
           (gt.group == GroupLabel::kLS || gt.group == GroupLabel::kDS);
  };

  std::set<std::string, std::less<>> in_scope;
  for (const GroundTruthInstance& gt : dataset.instances) {
    if (is_labeled(gt)) in_scope.insert(gt.image_id);
  }

  GroupScope scope;
  scope.image_ids.assign(in_scope.begin(), in_scope.end());
  for (const GroundTruthInstance& gt : dataset.instances) {
    if (gt.class_name != cls || !in_scope.contains(gt.image_id)) continue;
    GroundTruthInstance copy = gt;
    const bool positive = is_labeled(gt) && gt.group == group;
    if (!positive) {
      if (options.cross_group == CrossGroupMode::kFalsePositive &&
          is_labeled(gt)) {
        continue;
      }
      copy.ignore = true;
    }
    scope.ground_truth.push_back(std::move(copy));
  }
  for (const Detection& det : detections) {
    if (det.class_name == cls && in_scope.contains(det.image_id)) {
      scope.detections.push_back(det);
    }
  }
  return scope;
}

APReport GroupEvaluate(std::span<const Detection> detections,
                       const Dataset& dataset, GroupLabel group,
                       const GroupEvalOptions& options) {
  const GroupScope scope =
      BuildGroupScope(detections, dataset, group, options);
  APReport report = Evaluate(scope.detections, scope.ground_truth, options.eval);
  if (!report.defined()) {
    report.absent_reason = "group " + GroupLabelName(group) +
                           " has no non-ignored persons in scope";
  }
  return report;
}

std::vector<double> PerInstanceLosses(std::span<const Detection> detections,
                                      const Dataset& dataset, GroupLabel group,
                                      double score_cutoff) {
  std::map<std::string, std::vector<const Detection*>, std::less<>> by_image;
  for (const Detection& det : detections) {
    if (det.class_name == kPersonClass && det.score >= score_cutoff) {
      by_image[det.image_id].push_back(&det);
    }
  }
  std::vector<double> losses;
  for (const GroundTruthInstance& gt : dataset.instances) {
    if (!gt.is_person() || gt.ignore || gt.group != group) continue;
    double best = 0.0;
    if (auto it = by_image.find(gt.image_id); it != by_image.end()) {
      for (const Detection* det : it->second) {
        best = std::max(best, Iou(det->bbox, gt.bbox));
      }
    }
    losses.push_back(std::clamp(1.0 - best, 0.0, 1.0));
  }
  return losses;
}

double PredictiveInequity(std::span<const double> losses_ls,
                          std::span<const double> losses_ds) {
  if (losses_ls.empty() || losses_ds.empty()) {
    throw ValidationError("predictive inequity needs non-empty LS and DS "
                          "loss lists");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(losses_ls.begin(), losses_ls.end(), finite) ||
      !std::all_of(losses_ds.begin(), losses_ds.end(), finite)) {
    throw ValidationError("predictive inequity needs finite losses");
  }
  double sum = 0.0;
  for (double ls : losses_ls) {
    for (double ds : losses_ds) sum += std::max(ls - ds, 0.0);
  }
  return sum / (static_cast<double>(losses_ls.size()) *
                static_cast<double>(losses_ds.size()));
}

GroupGapReport MakeGroupGapReport(APReport ls, APReport ds,
                                  std::optional<double> inequity) {
  GroupGapReport report{.ls = std::move(ls), .ds = std::move(ds)};
  auto gap = [](const std::optional<double>& a,
                const std::optional<double>& b) -> std::optional<double> {
    if (!a || !b) return std::nullopt;
    return *a - *b;
  };
  report.gap_ap = gap(report.ls.ap, report.ds.ap);
  report.gap_ap50 = gap(report.ls.ap50, report.ds.ap50);
  report.gap_ap75 = gap(report.ls.ap75, report.ds.ap75);
  report.inequity = inequity;
  return report;
}

GroupGapReport EvaluateGroupGap(std::span<const Detection> detections,
                                const Dataset& dataset,
                                const GroupEvalOptions& options,
                                double score_cutoff) {
  APReport ls = GroupEvaluate(detections, dataset, GroupLabel::kLS, options);
  APReport ds = GroupEvaluate(detections, dataset, GroupLabel::kDS, options);
  const std::vector<double> losses_ls =
      PerInstanceLosses(detections, dataset, GroupLabel::kLS, score_cutoff);
  const std::vector<double> losses_ds =
      PerInstanceLosses(detections, dataset, GroupLabel::kDS, score_cutoff);
  std::optional<double> inequity;
  if (!losses_ls.empty() && !losses_ds.empty()) {
    inequity = PredictiveInequity(losses_ls, losses_ds);
  }
  return MakeGroupGapReport(std::move(ls), std::move(ds), inequity);
}

}  // namespace detfair
