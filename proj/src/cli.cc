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

#include "detfair/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detfair/consensus.h"
#include "detfair/dataset.h"
#include "detfair/error.h"
#include "detfair/matching_eval.h"
#include "detfair/report.h"
#include "detfair/stats.h"
#include "detfair/trainer.h"
#include "json.hpp"
#include "json_util.h"

namespace detfair {
namespace {

using nlohmann::json;

struct Options {
  std::string gt_path;
  std::string det_path;
  std::string votes_path;
  std::string out_path;
  std::string hist_out_path;
  std::string format;
  double min_area = kDefaultMinArea;
  std::vector<double> ious;
  std::vector<double> alphas;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  double delta = 0.05;
  std::int64_t k = 1;
  std::vector<std::int64_t> n;
  std::optional<double> gap;
  double ratio = 3.5;
  std::string class_name = kPersonClass;
  std::string interpolation = "coco";
  std::string cross_group = "ignore";
  std::vector<std::string> slices;
  double score_cutoff = kDefaultInequityScoreCutoff;
  std::string scheme = "augmented";
  std::optional<std::size_t> iterations;
  std::optional<double> learning_rate;
  std::optional<std::size_t> ds_count;
  std::size_t threads = 0;
  std::size_t ap_every = 50;
  std::size_t votes_per_record = 3;
};

OutputFormat FormatOr(const Options& options, OutputFormat fallback) {
  return options.format.empty() ? fallback : ParseOutputFormat(options.format);
}

void Emit(const Options& options, const std::string& text, std::ostream& out) {
  if (options.out_path.empty()) {
    out << text;
  } else {
    WriteTextFile(options.out_path, text);
  }
}

EvalConfig MakeEvalConfig(const Options& options) {
  EvalConfig config;
  if (!options.ious.empty()) {
    for (double v : options.ious) IouThreshold{v};
    config.iou_thresholds = options.ious;
  }
  if (options.interpolation == "coco") {
    config.interpolation = Interpolation::kCoco101;
  } else if (options.interpolation == "all-points") {
    config.interpolation = Interpolation::kAllPoints;
  } else {
    throw ValidationError("unknown interpolation '" + options.interpolation +
                          "' (expected coco or all-points)");
  }
  config.class_name = options.class_name;
  return config;
}

Dataset LoadFilteredTruth(const Options& options) {
  Dataset dataset = LoadGroundTruth(options.gt_path);
  if (!options.votes_path.empty()) {
    ConsensusOptions consensus{.votes_per_record = options.votes_per_record};
    const std::vector<VoteRecord> votes =
        LoadVotes(options.votes_path, consensus);
    dataset = ApplyDisparityLabels(std::move(dataset),
                                   DisparityLabels(AggregateAll(votes, consensus)));
  }
  for (const std::string& slice : options.slices) {
    const std::size_t eq = slice.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("--slice expects attribute=value, got '" + slice +
                            "'");
    }
    dataset = Slice(std::move(dataset), slice.substr(0, eq),
                    slice.substr(eq + 1));
  }
  return ApplyMinAreaFilter(std::move(dataset), options.min_area);
}

void RunEval(const Options& options, std::ostream& out) {
  const Dataset truth = LoadFilteredTruth(options);
  const std::vector<Detection> detections = LoadDetections(options.det_path);
  const APReport report =
      Evaluate(detections, truth.instances, MakeEvalConfig(options));
  Emit(options, RenderApReport(report, FormatOr(options, OutputFormat::kJson)),
       out);
}

void RunGroupEval(const Options& options, std::ostream& out) {
  const Dataset truth = LoadFilteredTruth(options);
  const std::vector<Detection> detections = LoadDetections(options.det_path);
  GroupEvalOptions group_options{.eval = MakeEvalConfig(options)};
  if (options.cross_group == "ignore") {
    group_options.cross_group = CrossGroupMode::kIgnore;
  } else if (options.cross_group == "fp") {
    group_options.cross_group = CrossGroupMode::kFalsePositive;
  } else {
    throw ValidationError("unknown cross-group mode '" + options.cross_group +
                          "' (expected ignore or fp)");
  }
  const GroupGapReport report = EvaluateGroupGap(
      detections, truth, group_options, options.score_cutoff);
  Emit(options, RenderGroupGap(report, FormatOr(options, OutputFormat::kJson)),
       out);
}

void RunConsensus(const Options& options, std::ostream& out) {
  ConsensusOptions consensus{.votes_per_record = options.votes_per_record};
  const std::vector<VoteRecord> votes = LoadVotes(options.votes_path, consensus);
  const std::vector<ConsensusResult> results = AggregateAll(votes, consensus);
  const std::string histogram = HistogramToCsv(VoteHistogram(votes));
  const OutputFormat format = FormatOr(options, OutputFormat::kJson);
  if (format == OutputFormat::kMarkdown) {
    throw ValidationError("consensus output is json or csv");
  }
  std::string hist_path = options.hist_out_path;
  if (hist_path.empty() && !options.out_path.empty() &&
      format == OutputFormat::kJson) {
    std::filesystem::path p(options.out_path);
    p.replace_extension();
    hist_path = p.string() + "_histogram.csv";
  }
  if (format == OutputFormat::kCsv) {
    Emit(options, histogram, out);
  } else {
    Emit(options, ConsensusToJson(results) + "\n", out);
  }
  if (!hist_path.empty()) WriteTextFile(hist_path, histogram);
}

void RunStats(const std::string& mode, const Options& options,
              std::ostream& out) {
  if (FormatOr(options, OutputFormat::kJson) != OutputFormat::kJson) {
    throw ValidationError("stats output is json only");
  }
  json doc = {{"width", nullptr}, {"resolvable", nullptr}, {"n_pair", nullptr}};
  auto width = [&](std::int64_t n) {
    return ConfidenceWidth({.n = n, .k = options.k, .delta = options.delta});
  };
  auto require_gap = [&] {
    if (!options.gap) throw ValidationError("--gap is required");
    return *options.gap;
  };
  if (mode == "width") {
    if (options.n.size() != 1) {
      throw ValidationError("stats width takes exactly one --n");
    }
    doc["width"] = width(options.n[0]);
  } else if (mode == "resolvable") {
    if (options.n.size() != 2) {
      throw ValidationError("stats resolvable takes two --n values (n_a n_b)");
    }
    const double gap = require_gap();
    doc["width"] = {width(options.n[0]), width(options.n[1])};
    doc["resolvable"] = GapResolvable(options.n[0], options.n[1], options.k,
                                      options.delta, gap);
    doc["n_pair"] = {options.n[0], options.n[1]};
  } else {
    const SamplePair pair =
        MinSamples(options.ratio, options.k, options.delta, require_gap());
    doc["width"] = {width(pair.n_a), width(pair.n_b)};
    doc["resolvable"] = true;
    doc["n_pair"] = {pair.n_a, pair.n_b};
  }
  Emit(options, doc.dump(2) + "\n", out);
}

SweepConfig MakeSweepConfig(const Options& options) {
  SweepConfig config;
  if (!options.alphas.empty()) config.alphas = options.alphas;
  config.repeats = options.repeats;
  config.seed = options.seed;
  config.scheme = ParseWeightingScheme(options.scheme);
  config.data.ls_to_ds_ratio = options.ratio;
  if (options.ds_count) config.data.ds_count = *options.ds_count;
  if (options.iterations) config.train.iterations = *options.iterations;
  if (options.learning_rate) config.train.learning_rate = *options.learning_rate;
  config.threads = options.threads;
  return config;
}

void RunSweep(const Options& options, std::ostream& out) {
  const std::vector<SweepRow> rows = AlphaSweep(MakeSweepConfig(options));
  Emit(options, RenderSweep(rows, FormatOr(options, OutputFormat::kMarkdown)),
       out);
}

void RunTrainCurves(const Options& options, std::ostream& out) {
  if (options.alphas.size() > 1) {
    throw ValidationError("train-curves takes at most one --alpha");
  }
  SweepConfig config = MakeSweepConfig(options);
  config.alphas = {options.alphas.empty() ? 1.0 : options.alphas[0]};
  config.repeats = 1;
  config.Validate();
  const SyntheticData data =
      GenerateSynthetic(DeriveSeed(options.seed, 1, 0), config.data);
  TrainConfig train = config.train;
  train.seed = DeriveSeed(options.seed, 2, 0);
  train.ap_every = options.ap_every;
  const TrainResult result =
      Train(data.train, &data.heldout, config.loss,
            DsWeighting(config.scheme, config.alphas[0]), train);
  Emit(options,
       RenderCurves(result.curve, FormatOr(options, OutputFormat::kCsv)), out);
}

void AddFormatAndOut(CLI::App* command, Options& o) {
  command->add_option("--format", o.format, "json, csv or md");
  command->add_option("--out", o.out_path, "write the report here");
}

void AddTruthOptions(CLI::App* command, Options& o) {
  command->add_option("--gt", o.gt_path, "ground-truth JSON")->required();
  command->add_option("--det", o.det_path, "detections JSON")->required();
  command->add_option("--min-area", o.min_area,
                      "ground truth below this area (px^2) becomes ignore");
  command->add_option("--iou", o.ious, "IoU threshold (repeatable)");
  command->add_option("--class", o.class_name, "class to evaluate");
  command->add_option("--interp", o.interpolation, "coco or all-points");
  command->add_option("--slice", o.slices, "attribute=value (repeatable)");
  command->add_option("--votes", o.votes_path,
                      "annotator votes; consensus labels replace gt groups");
  command->add_option("--votes-per-record", o.votes_per_record);
}

void AddTrainOptions(CLI::App* command, Options& o) {
  command->add_option("--alpha", o.alphas, "alpha_DS (repeatable)");
  command->add_option("--seed", o.seed);
  command->add_option("--scheme", o.scheme, "augmented or group");
  command->add_option("--ratio", o.ratio, "LS persons per DS person");
  command->add_option("--ds-count", o.ds_count, "DS persons in training");
  command->add_option("--iterations", o.iterations);
  command->add_option("--lr", o.learning_rate);
}

void WriteError(std::ostream& err, const char* code, const std::string& what) {
  err << json{{"error", {{"code", code}, {"message", what}}}}.dump() << '\n';
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Options o;
  CLI::App app("Detection fairness evaluation toolkit", "detfair");
  app.require_subcommand(1);

  CLI::App* eval = app.add_subcommand("eval", "COCO-style person AP");
  AddTruthOptions(eval, o);
  AddFormatAndOut(eval, o);

  CLI::App* group_eval =
      app.add_subcommand("group-eval", "per-group AP, gap and inequity");
  AddTruthOptions(group_eval, o);
  AddFormatAndOut(group_eval, o);
  group_eval->add_option("--cross-group", o.cross_group, "ignore or fp");
  group_eval->add_option("--score-cutoff", o.score_cutoff);

  CLI::App* consensus =
      app.add_subcommand("consensus", "majority vote over annotator labels");
  consensus->add_option("--votes", o.votes_path, "votes JSON")->required();
  consensus->add_option("--hist-out", o.hist_out_path, "histogram CSV path");
  consensus->add_option("--votes-per-record", o.votes_per_record);
  AddFormatAndOut(consensus, o);

  CLI::App* stats = app.add_subcommand("stats", "holdout confidence bounds");
  stats->require_subcommand(1);
  std::string stats_mode;
  for (const char* mode : {"width", "resolvable", "min-samples"}) {
    CLI::App* sub = stats->add_subcommand(mode);
    sub->add_option("--n", o.n, "holdout size (repeatable)");
    sub->add_option("--k", o.k, "models compared");
    sub->add_option("--delta", o.delta, "failure probability");
    sub->add_option("--gap", o.gap, "AP gap to resolve");
    sub->add_option("--ratio", o.ratio, "n_a / n_b");
    AddFormatAndOut(sub, o);
    sub->callback([&stats_mode, mode] { stats_mode = mode; });
  }

  CLI::App* sweep = app.add_subcommand("sweep", "alpha_DS sweep on toy data");
  AddTrainOptions(sweep, o);
  AddFormatAndOut(sweep, o);
  sweep->add_option("--repeats", o.repeats);
  sweep->add_option("--threads", o.threads, "0 = hardware concurrency");

  CLI::App* curves =
      app.add_subcommand("train-curves", "held-out loss per iteration");
  AddTrainOptions(curves, o);
  AddFormatAndOut(curves, o);
  curves->add_option("--ap-every", o.ap_every, "toy AP50 cadence; 0 = never");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    WriteError(err, ErrorCodeName(ErrorCode::kValidation), e.what());
    return static_cast<int>(ErrorCode::kValidation);
  }

  try {
    if (eval->parsed()) {
      RunEval(o, out);
    } else if (group_eval->parsed()) {
      RunGroupEval(o, out);
    } else if (consensus->parsed()) {
      RunConsensus(o, out);
    } else if (stats->parsed()) {
      RunStats(stats_mode, o, out);
    } else if (sweep->parsed()) {
      RunSweep(o, out);
    } else if (curves->parsed()) {
      RunTrainCurves(o, out);
    }
  } catch (const Error& e) {
    WriteError(err, ErrorCodeName(e.code()), e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    WriteError(err, "internal", e.what());
    return static_cast<int>(ErrorCode::kNumerical);
  }
  return 0;
}

}  // namespace detfair
