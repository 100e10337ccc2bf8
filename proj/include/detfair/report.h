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

// JSON / CSV / Markdown renderings of evaluation and sweep results.
//
// Markdown tables pair LS and DS columns per metric (AP, AP50, AP75) and
// bold the larger value of each pair. Percentages carry one decimal and,
// for multi-run results, a "±" sample standard deviation. Every renderer is
// a pure function of its input, so output is byte-stable.

#ifndef DETFAIR_REPORT_H_
#define DETFAIR_REPORT_H_

#include <span>
#include <string>
#include <string_view>

#include "detfair/matching_eval.h"
#include "detfair/trainer.h"

namespace detfair {

enum class OutputFormat { kJson, kCsv, kMarkdown };

OutputFormat ParseOutputFormat(std::string_view text);

// "59.8" for 0.598.
std::string FormatPercent(double fraction);
// "59.8 ± 1.0".
std::string FormatPercentMeanStd(double mean, double std);

std::string RenderApReport(const APReport& report, OutputFormat format);

std::string RenderGroupGap(const GroupGapReport& report, OutputFormat format);

// An empty span renders a header-only table.
std::string RenderSweep(std::span<const SweepRow> rows, OutputFormat format);

// Long-format curve: iteration, group, loss, ap50_toy (blank when not
// evaluated at that iteration).
std::string RenderCurves(std::span<const CurvePoint> curve,
                         OutputFormat format);

}  // namespace detfair

#endif  // DETFAIR_REPORT_H_
