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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "detfair/cli.h"
#include "detfair/consensus.h"
#include "detfair/dataset.h"
#include "detfair/error.h"
#include "detfair/geometry.h"
#include "detfair/matching_eval.h"
#include "detfair/report.h"
#include "detfair/stats.h"
#include "detfair/trainer.h"

namespace py = pybind11;

namespace detfair {
namespace {

BBox ToBox(const std::array<double, 4>& corners) {
  return BBox::FromArray(corners);
}

py::object Optional(const std::optional<double>& value) {
  return value ? py::object(py::float_(*value)) : py::object(py::none());
}

py::dict ApReportDict(const APReport& report) {
  py::list per_threshold;
  for (const ThresholdResult& r : report.per_threshold) {
    py::dict row;
    row["iou"] = r.iou_threshold;
    row["ap"] = Optional(r.ap);
    row["num_gt"] = r.num_gt;
    row["num_tp"] = r.num_tp;
    row["num_fp"] = r.num_fp;
    row["num_ignored"] = r.num_ignored;
    per_threshold.append(row);
  }
  py::dict out;
  out["ap"] = Optional(report.ap);
  out["ap50"] = Optional(report.ap50);
  out["ap75"] = Optional(report.ap75);
  out["per_threshold"] = per_threshold;
  out["absent_reason"] = report.absent_reason
                             ? py::object(py::str(*report.absent_reason))
                             : py::object(py::none());
  return out;
}

EvalConfig MakeEvalConfig(const std::optional<std::vector<double>>& ious,
                          const std::string& class_name,
                          const std::string& interpolation) {
  EvalConfig config;
  if (ious) config.iou_thresholds = *ious;
  config.class_name = class_name;
  if (interpolation == "all-points") {
    config.interpolation = Interpolation::kAllPoints;
  } else if (interpolation != "coco") {
    throw ValidationError("unknown interpolation '" + interpolation + "'");
  }
  return config;
}

py::dict EvaluateJson(const std::string& gt_json, const std::string& det_json,
                      const std::optional<std::vector<double>>& ious,
                      const std::string& class_name,
                      const std::string& interpolation,
                      double min_area) {
  const Dataset dataset =
      ApplyMinAreaFilter(ParseGroundTruth(gt_json), min_area);
  const std::vector<Detection> detections = ParseDetections(det_json);
  return ApReportDict(Evaluate(detections, dataset.instances,
                               MakeEvalConfig(ious, class_name, interpolation)));
}

py::dict GroupGapJson(const std::string& gt_json, const std::string& det_json,
                      const std::optional<std::string>& votes_json,
                      const std::string& cross_group, double min_area,
                      double score_cutoff) {
  Dataset dataset = ParseGroundTruth(gt_json);
  if (votes_json) {
    const std::vector<VoteRecord> votes = ParseVotes(*votes_json);
    dataset = ApplyDisparityLabels(std::move(dataset),
                                   DisparityLabels(AggregateAll(votes)));
  }
  dataset = ApplyMinAreaFilter(std::move(dataset), min_area);
  GroupEvalOptions options;
  if (cross_group == "fp") {
    options.cross_group = CrossGroupMode::kFalsePositive;
  } else if (cross_group != "ignore") {
    throw ValidationError("unknown cross-group mode '" + cross_group + "'");
  }
  const std::vector<Detection> detections = ParseDetections(det_json);
  const GroupGapReport report =
      EvaluateGroupGap(detections, dataset, options, score_cutoff);
  py::dict out;
  out["LS"] = ApReportDict(report.ls);
  out["DS"] = ApReportDict(report.ds);
  py::dict gap;
  gap["ap"] = Optional(report.gap_ap);
  gap["ap50"] = Optional(report.gap_ap50);
  gap["ap75"] = Optional(report.gap_ap75);
  out["gap"] = gap;
  out["inequity"] = Optional(report.inequity);
  return out;
}

py::dict ConsensusJson(const std::string& votes_json,
                       std::size_t votes_per_record) {
  ConsensusOptions options;
  options.votes_per_record = votes_per_record;
  const std::vector<VoteRecord> records = ParseVotes(votes_json, options);
  const std::vector<ConsensusResult> results = AggregateAll(records, options);
  py::dict labels;
  for (const ConsensusResult& r : results) {
    labels[py::str(r.instance_id)] =
        r.label ? py::object(py::str(GroupLabelName(*r.label)))
                : py::object(py::none());
  }
  const auto disparity = DisparityLabels(results);
  py::dict out;
  out["labels"] = labels;
  out["histogram"] = VoteHistogram(records);
  out["ds_rate"] =
      disparity.empty() ? py::object(py::none())
                        : py::object(py::float_(GroupRate(disparity)));
  return out;
}

std::string Sweep(const std::vector<double>& alphas, std::size_t repeats,
                  std::uint64_t seed, const std::string& scheme,
                  std::size_t ds_count, std::size_t iterations,
                  std::size_t threads, const std::string& format) {
  SweepConfig config;
  config.alphas = alphas;
  config.repeats = repeats;
  config.seed = seed;
  config.scheme = ParseWeightingScheme(scheme);
  config.data.ds_count = ds_count;
  config.train.iterations = iterations;
  config.threads = threads;
  const OutputFormat out_format = ParseOutputFormat(format);
  std::vector<SweepRow> rows;
  {
    py::gil_scoped_release release;
    rows = AlphaSweep(config);
  }
  return RenderSweep(rows, out_format);
}

py::tuple RunCliCapture(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = RunCli(args, out, err);
  return py::make_tuple(status, out.str(), err.str());
}

}  // namespace
}  // namespace detfair

PYBIND11_MODULE(_detfair, m) {
  using namespace detfair;
  m.doc() = "Skin-tone group detection fairness tools.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError",
                                          base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def(
      "iou",
      [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return Iou(ToBox(a), ToBox(b));
      },
      py::arg("a"), py::arg("b"),
      "IoU of two [x_min, y_min, x_max, y_max] boxes.");
  m.def(
      "encode_offsets",
      [](const std::array<double, 4>& gt, const std::array<double, 4>& anchor) {
        const BoxOffsets o = EncodeOffsets(ToBox(gt), ToBox(anchor));
        return std::array<double, 4>{o.tx, o.ty, o.tw, o.th};
      },
      py::arg("gt"), py::arg("anchor"));
  m.def(
      "decode_offsets",
      [](const std::array<double, 4>& offsets,
         const std::array<double, 4>& anchor) {
        const BoxOffsets o{offsets[0], offsets[1], offsets[2], offsets[3]};
        return DecodeOffsets(o, ToBox(anchor)).corners();
      },
      py::arg("offsets"), py::arg("anchor"));

  m.def("evaluate", &EvaluateJson, py::arg("gt_json"), py::arg("det_json"),
        py::arg("iou_thresholds") = py::none(),
        py::arg("class_name") = std::string(kPersonClass),
        py::arg("interpolation") = "coco", py::arg("min_area") = 10000.0,
        "COCO-style AP for one class; inputs are JSON text.");
  m.def("group_evaluate", &GroupGapJson, py::arg("gt_json"),
        py::arg("det_json"), py::arg("votes_json") = py::none(),
        py::arg("cross_group") = "ignore", py::arg("min_area") = 10000.0,
        py::arg("score_cutoff") = kDefaultInequityScoreCutoff,
        "LS and DS AP, their gaps and the predictive inequity.");
  m.def("consensus", &ConsensusJson, py::arg("votes_json"),
        py::arg("votes_per_record") = 3);

  m.def(
      "confidence_width",
      [](std::int64_t n, std::int64_t k, double delta) {
        return ConfidenceWidth({.n = n, .k = k, .delta = delta});
      },
      py::arg("n"), py::arg("k") = 1, py::arg("delta") = 0.05);
  m.def("gap_resolvable", &GapResolvable, py::arg("n_a"), py::arg("n_b"),
        py::arg("k") = 1, py::arg("delta") = 0.05, py::arg("gap"));
  m.def(
      "min_samples",
      [](double ratio, std::int64_t k, double delta, double gap) {
        const SamplePair p = MinSamples(ratio, k, delta, gap);
        return py::make_tuple(p.n_a, p.n_b);
      },
      py::arg("ratio"), py::arg("k") = 1, py::arg("delta") = 0.05,
      py::arg("gap"));
  m.def(
      "aggregate_runs",
      [](const std::vector<double>& values) {
        const RunAggregate a = AggregateRuns(values);
        return py::make_tuple(a.mean, a.std);
      },
      py::arg("values"), "(mean, sample std) of per-run values.");

  m.def("alpha_sweep", &Sweep, py::arg("alphas"), py::arg("repeats") = 10,
        py::arg("seed") = 0, py::arg("scheme") = "augmented",
        py::arg("ds_count") = 200, py::arg("iterations") = 600,
        py::arg("threads") = 0, py::arg("format") = "json",
        "Runs the toy alpha sweep and returns the rendered table.");
  m.def("run_cli", &RunCliCapture, py::arg("args"),
        "Runs the command line in-process; returns (status, stdout, stderr).");
}
