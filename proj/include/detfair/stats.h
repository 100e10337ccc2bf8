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

// Holdout confidence widths and run aggregation.

#ifndef DETFAIR_STATS_H_
#define DETFAIR_STATS_H_

#include <cstdint>
#include <span>
#include <utility>

namespace detfair {

struct ConfidenceSpec {
  std::int64_t n = 1;      // holdout size
  std::int64_t k = 1;      // number of models compared
  double delta = 0.05;     // failure probability

  // Throws ValidationError unless n >= 1, k >= 1, 0 < delta < 1.
  void Validate() const;
};

// Half-width sqrt(ln(k / delta) / n) of the holdout confidence interval.
double ConfidenceWidth(const ConfidenceSpec& spec);

// True iff width(n_a) + width(n_b) <= gap, i.e. a true gap of `gap` cannot
// be explained by holdout noise on either side.
bool GapResolvable(std::int64_t n_a, std::int64_t n_b, std::int64_t k,
                   double delta, double gap);

struct SamplePair {
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
};

// Smallest n_b (with n_a = ceil(ratio * n_b)) for which GapResolvable holds.
// Requires ratio >= 1 and gap > 0.
SamplePair MinSamples(double ratio, std::int64_t k, double delta, double gap);

struct RunAggregate {
  double mean = 0.0;
  // Sample standard deviation (n - 1 denominator); 0 for a single run.
  double std = 0.0;
  std::int64_t run_count = 0;
};

// Throws ValidationError on an empty list.
RunAggregate AggregateRuns(std::span<const double> values);

}  // namespace detfair

#endif  // DETFAIR_STATS_H_
