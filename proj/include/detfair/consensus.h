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

// Majority-vote aggregation of annotator group labels.

#ifndef DETFAIR_CONSENSUS_H_
#define DETFAIR_CONSENSUS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detfair/dataset.h"

namespace detfair {

struct VoteRecord {
  std::string instance_id;
  std::vector<GroupLabel> votes;
};

struct ConsensusOptions {
  // Records must carry exactly this many votes. A label wins when strictly
  // more than half of the votes agree on it (2 of 3 by default).
  std::size_t votes_per_record = 3;
};

struct ConsensusResult {
  std::string instance_id;
  // Empty when no label reached a majority (the record is discarded).
  std::optional<GroupLabel> label;
  // Number of votes for `label`; 0 when discarded.
  int agreement = 0;

  bool discarded() const { return !label.has_value(); }
};

ConsensusResult Aggregate(const VoteRecord& record,
                          const ConsensusOptions& options = {});

// Aggregates every record; rejects duplicate instance ids.
std::vector<ConsensusResult> AggregateAll(std::span<const VoteRecord> records,
                                          const ConsensusOptions& options = {});

// Keeps LS/DS consensus only; U, N and discarded records drop out.
std::map<std::string, GroupLabel> DisparityLabels(
    std::span<const ConsensusResult> results);

// Order-free vote pattern, letters sorted L < D < U < N ("LLD").
std::string VotePattern(std::span<const GroupLabel> votes);

std::map<std::string, std::size_t> VoteHistogram(
    std::span<const VoteRecord> records);

// Fraction of DS labels. Throws ValidationError on an empty map.
double GroupRate(const std::map<std::string, GroupLabel>& labels);

std::vector<VoteRecord> ParseVotes(std::string_view json_text,
                                   const ConsensusOptions& options = {});
std::vector<VoteRecord> LoadVotes(const std::string& path,
                                  const ConsensusOptions& options = {});

std::string ConsensusToJson(std::span<const ConsensusResult> results);
// "pattern,count" rows in pattern order, with a header line.
std::string HistogramToCsv(const std::map<std::string, std::size_t>& histogram);

// Writes LS/DS consensus onto matching person instances of `dataset`.
Dataset ApplyDisparityLabels(Dataset dataset,
                             const std::map<std::string, GroupLabel>& labels);

}  // namespace detfair

#endif  // DETFAIR_CONSENSUS_H_
