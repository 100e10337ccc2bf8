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

#include "detfair/stats.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "detfair/error.h"

namespace detfair {

void ConfidenceSpec::Validate() const {
  std::ostringstream msg;
  if (n < 1) {
    msg << "n must be >= 1 (got " << n << ")";
  } else if (k < 1) {
    msg << "k must be >= 1 (got " << k << ")";
  } else if (!(delta > 0.0 && delta < 1.0)) {
    msg << "delta must lie in (0, 1) (got " << delta << ")";
  } else {
    return;
  }
  throw ValidationError(msg.str());
}

double ConfidenceWidth(const ConfidenceSpec& spec) {
  spec.Validate();
  return std::sqrt(std::log(static_cast<double>(spec.k) / spec.delta) /
                   static_cast<double>(spec.n));
}

bool GapResolvable(std::int64_t n_a, std::int64_t n_b, std::int64_t k,
                   double delta, double gap) {
  if (!(gap > 0.0)) throw ValidationError("gap must be positive");
  return ConfidenceWidth({.n = n_a, .k = k, .delta = delta}) +
             ConfidenceWidth({.n = n_b, .k = k, .delta = delta}) <=
         gap;
}

SamplePair MinSamples(double ratio, std::int64_t k, double delta, double gap) {
  if (!(ratio >= 1.0) || !std::isfinite(ratio)) {
    throw ValidationError("ratio must be a finite value >= 1");
  }
  if (!(gap > 0.0)) throw ValidationError("gap must be positive");
  ConfidenceSpec{.n = 1, .k = k, .delta = delta}.Validate();

  auto pair_for = [ratio](std::int64_t n_b) {
    return SamplePair{
        .n_a = static_cast<std::int64_t>(std::ceil(ratio * static_cast<double>(n_b))),
        .n_b = n_b};
  };
  auto ok = [&](std::int64_t n_b) {
    const SamplePair p = pair_for(n_b);
    return GapResolvable(p.n_a, p.n_b, k, delta, gap);
  };

  // Resolvability is monotone in n_b: bracket, then bisect.
  std::int64_t hi = 1;
  while (!ok(hi)) {
    if (hi > std::numeric_limits<std::int64_t>::max() / 4) {
      throw NumericalError("MinSamples: required sample size overflows");
    }
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // ok(lo) is false unless lo == 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return pair_for(hi);
}

RunAggregate AggregateRuns(std::span<const double> values) {
  if (values.empty()) {
    throw ValidationError("cannot aggregate an empty list of runs");
  }
  // Welford's update.
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t count = 0;
  for (double v : values) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  RunAggregate out{.mean = mean, .std = 0.0, .run_count = count};
  if (count > 1) out.std = std::sqrt(m2 / static_cast<double>(count - 1));
  return out;
}

}  // namespace detfair
