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

#include "detfair/report.h"

#include <cstdio>
#include <sstream>

#include "detfair/error.h"
#include "json.hpp"

namespace detfair {
namespace {

using nlohmann::json;

std::string Fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

std::string OptionalFixed(const std::optional<double>& value, int decimals) {
  return value ? Fixed(*value, decimals) : std::string();
}

json OptionalJson(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

std::string Bold(const std::string& cell) { return "**" + cell + "**"; }

// LS/DS cells with the larger value bolded (both on a tie).
std::pair<std::string, std::string> PairCells(double ls, double ds,
                                              std::string ls_text,
                                              std::string ds_text) {
  if (ls >= ds) ls_text = Bold(ls_text);
  if (ds >= ls) ds_text = Bold(ds_text);
  return {ls_text, ds_text};
}

json ApReportJson(const APReport& report) {
  json per_threshold = json::array();
  for (const ThresholdResult& r : report.per_threshold) {
    per_threshold.push_back({{"iou", r.iou_threshold},
                             {"ap", OptionalJson(r.ap)},
                             {"num_gt", r.num_gt},
                             {"num_tp", r.num_tp},
                             {"num_fp", r.num_fp},
                             {"num_ignored", r.num_ignored}});
  }
  json out = {{"ap", OptionalJson(report.ap)},
              {"ap50", OptionalJson(report.ap50)},
              {"ap75", OptionalJson(report.ap75)},
              {"per_threshold", per_threshold}};
  out["absent_reason"] =
      report.absent_reason ? json(*report.absent_reason) : json(nullptr);
  return out;
}

json AggregateJson(const RunAggregate& a) {
  return {{"mean", a.mean}, {"std", a.std}, {"runs", a.run_count}};
}

json SweepMetricJson(const SweepMetric& m) {
  return {{"ls", AggregateJson(m.ls)},
          {"ds", AggregateJson(m.ds)},
          {"gap", m.gap}};
}

constexpr const char* kMetricNames[] = {"AP", "AP50", "AP75"};

}  // namespace

OutputFormat ParseOutputFormat(std::string_view text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "md" || text == "markdown") return OutputFormat::kMarkdown;
  throw ValidationError("unknown output format '" + std::string(text) +
                        "' (expected json, csv or md)");
}

std::string FormatPercent(double fraction) { return Fixed(100.0 * fraction, 1); }

std::string FormatPercentMeanStd(double mean, double std) {
  return FormatPercent(mean) + " ± " + FormatPercent(std);
}

std::string RenderApReport(const APReport& report, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::kJson:
      return ApReportJson(report).dump(2) + "\n";
    case OutputFormat::kCsv:
      out << "iou,ap,num_gt,num_tp,num_fp,num_ignored\n";
      for (const ThresholdResult& r : report.per_threshold) {
        out << Fixed(r.iou_threshold, 2) << ',' << OptionalFixed(r.ap, 6)
            << ',' << r.num_gt << ',' << r.num_tp << ',' << r.num_fp << ','
            << r.num_ignored << '\n';
      }
      return out.str();
    case OutputFormat::kMarkdown: {
      out << "| Metric | Value (%) |\n|---|---:|\n";
      const std::optional<double> values[] = {report.ap, report.ap50,
                                              report.ap75};
      for (int i = 0; i < 3; ++i) {
        out << "| " << kMetricNames[i] << " | "
            << (values[i] ? FormatPercent(*values[i]) : std::string("n/a"))
            << " |\n";
      }
      if (report.absent_reason) {
        out << "\n_absent: " << *report.absent_reason << "_\n";
      }
      return out.str();
    }
  }
  return {};
}

std::string RenderGroupGap(const GroupGapReport& report, OutputFormat format) {
  std::ostringstream out;
  const std::optional<double> ls[] = {report.ls.ap, report.ls.ap50,
                                      report.ls.ap75};
  const std::optional<double> ds[] = {report.ds.ap, report.ds.ap50,
                                      report.ds.ap75};
  const std::optional<double> gaps[] = {report.gap_ap, report.gap_ap50,
                                        report.gap_ap75};
  switch (format) {
    case OutputFormat::kJson: {
      json doc = {{"LS", ApReportJson(report.ls)},
                  {"DS", ApReportJson(report.ds)},
                  {"gap",
                   {{"ap", OptionalJson(report.gap_ap)},
                    {"ap50", OptionalJson(report.gap_ap50)},
                    {"ap75", OptionalJson(report.gap_ap75)}}},
                  {"inequity", OptionalJson(report.inequity)}};
      return doc.dump(2) + "\n";
    }
    case OutputFormat::kCsv:
      out << "metric,ls,ds,gap\n";
      for (int i = 0; i < 3; ++i) {
        out << kMetricNames[i] << ',' << OptionalFixed(ls[i], 6) << ','
            << OptionalFixed(ds[i], 6) << ',' << OptionalFixed(gaps[i], 6)
            << '\n';
      }
      out << "inequity,,," << OptionalFixed(report.inequity, 6) << '\n';
      return out.str();
    case OutputFormat::kMarkdown: {
      out << "| | AP (%) LS | AP (%) DS | AP50 (%) LS | AP50 (%) DS "
             "| AP75 (%) LS | AP75 (%) DS |\n"
          << "|---|---:|---:|---:|---:|---:|---:|\n"
          << "| all";
      for (int i = 0; i < 3; ++i) {
        if (ls[i] && ds[i]) {
          auto [a, b] = PairCells(*ls[i], *ds[i], FormatPercent(*ls[i]),
                                  FormatPercent(*ds[i]));
          out << " | " << a << " | " << b;
        } else {
          out << " | " << (ls[i] ? FormatPercent(*ls[i]) : "n/a") << " | "
              << (ds[i] ? FormatPercent(*ds[i]) : "n/a");
        }
      }
      out << " |\n";
      if (report.inequity) {
        out << "\nPredictive inequity: " << Fixed(*report.inequity, 4) << "\n";
      }
      for (const APReport* side : {&report.ls, &report.ds}) {
        if (side->absent_reason) {
          out << "\n_absent: " << *side->absent_reason << "_\n";
        }
      }
      return out.str();
    }
  }
  return {};
}

std::string RenderSweep(std::span<const SweepRow> rows, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::kJson: {
      json doc = json::array();
      for (const SweepRow& row : rows) {
        doc.push_back({{"alpha_ds", row.alpha_ds},
                       {"ap", SweepMetricJson(row.ap)},
                       {"ap50", SweepMetricJson(row.ap50)},
                       {"ap75", SweepMetricJson(row.ap75)},
                       {"heldout_loss", SweepMetricJson(row.heldout_loss)}});
      }
      return json{{"rows", doc}}.dump(2) + "\n";
    }
    case OutputFormat::kCsv:
      out << "alpha_ds,metric,ls_mean,ls_std,ds_mean,ds_std,gap\n";
      for (const SweepRow& row : rows) {
        const std::pair<const char*, const SweepMetric*> metrics[] = {
            {"ap", &row.ap},
            {"ap50", &row.ap50},
            {"ap75", &row.ap75},
            {"heldout_loss", &row.heldout_loss}};
        for (const auto& [name, m] : metrics) {
          out << Fixed(row.alpha_ds, 2) << ',' << name << ','
              << Fixed(m->ls.mean, 6) << ',' << Fixed(m->ls.std, 6) << ','
              << Fixed(m->ds.mean, 6) << ',' << Fixed(m->ds.std, 6) << ','
              << Fixed(m->gap, 6) << '\n';
        }
      }
      return out.str();
    case OutputFormat::kMarkdown:
      out << "| α_DS | AP (%) LS | AP (%) DS | AP50 (%) LS | AP50 (%) DS "
             "| AP75 (%) LS | AP75 (%) DS | Loss LS | Loss DS |\n"
          << "|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
      for (const SweepRow& row : rows) {
        char alpha[32];
        std::snprintf(alpha, sizeof(alpha), "%g", row.alpha_ds);
        out << "| " << alpha;
        for (const SweepMetric* m : {&row.ap, &row.ap50, &row.ap75}) {
          auto [a, b] = PairCells(m->ls.mean, m->ds.mean,
                                  FormatPercentMeanStd(m->ls.mean, m->ls.std),
                                  FormatPercentMeanStd(m->ds.mean, m->ds.std));
          out << " | " << a << " | " << b;
        }
        const SweepMetric& loss = row.heldout_loss;
        out << " | " << Fixed(loss.ls.mean, 4) << " ± " << Fixed(loss.ls.std, 4)
            << " | " << Fixed(loss.ds.mean, 4) << " ± "
            << Fixed(loss.ds.std, 4) << " |\n";
      }
      return out.str();
  }
  return {};
}

std::string RenderCurves(std::span<const CurvePoint> curve,
                         OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json doc = json::array();
    for (const CurvePoint& p : curve) {
      doc.push_back({{"iteration", p.iteration},
                     {"loss",
                      {{"LS", p.loss.ls},
                       {"DS", p.loss.ds},
                       {"other", p.loss.other}}},
                     {"ap50_toy",
                      {{"LS", OptionalJson(p.ap50_ls)},
                       {"DS", OptionalJson(p.ap50_ds)}}}});
    }
    return doc.dump(2) + "\n";
  }
  if (format == OutputFormat::kMarkdown) {
    throw ValidationError("training curves render as csv or json only");
  }
  std::ostringstream out;
  out << "iteration,group,loss,ap50_toy\n";
  for (const CurvePoint& p : curve) {
    out << p.iteration << ",LS," << Fixed(p.loss.ls, 6) << ','
        << OptionalFixed(p.ap50_ls, 6) << '\n';
    out << p.iteration << ",DS," << Fixed(p.loss.ds, 6) << ','
        << OptionalFixed(p.ap50_ds, 6) << '\n';
    out << p.iteration << ",other," << Fixed(p.loss.other, 6) << ",\n";
  }
  return out.str();
}

}  // namespace detfair
