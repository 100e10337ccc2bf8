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

#include "detfair/consensus.h"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_set>

#include "detfair/error.h"
#include "json.hpp"
#include "json_util.h"

namespace detfair {
namespace {

using nlohmann::json;

constexpr std::array<GroupLabel, 4> kCanonicalOrder = {
    GroupLabel::kLS, GroupLabel::kDS, GroupLabel::kUnknown,
    GroupLabel::kNotPerson};

std::size_t CanonicalIndex(GroupLabel label) {
  return static_cast<std::size_t>(
      std::find(kCanonicalOrder.begin(), kCanonicalOrder.end(), label) -
      kCanonicalOrder.begin());
}

void CheckVoteCount(const VoteRecord& record, const ConsensusOptions& options) {
  if (options.votes_per_record == 0) {
    throw ValidationError("votes_per_record must be positive");
  }
  if (record.votes.size() != options.votes_per_record) {
    std::ostringstream msg;
    msg << "record '" << record.instance_id << "' has " << record.votes.size()
        << " votes, expected " << options.votes_per_record;
    throw ValidationError(msg.str());
  }
}

}  // namespace

ConsensusResult Aggregate(const VoteRecord& record,
                          const ConsensusOptions& options) {
  CheckVoteCount(record, options);
  std::array<int, 4> tally{};
  for (GroupLabel vote : record.votes) ++tally[CanonicalIndex(vote)];

  ConsensusResult result{.instance_id = record.instance_id};
  const std::size_t k = record.votes.size();
  for (std::size_t i = 0; i < tally.size(); ++i) {
    // Strict majority: 2 * count > k.
    if (2 * static_cast<std::size_t>(tally[i]) > k) {
      result.label = kCanonicalOrder[i];
      result.agreement = tally[i];
      break;
    }
  }
  return result;
}

std::vector<ConsensusResult> AggregateAll(std::span<const VoteRecord> records,
                                          const ConsensusOptions& options) {
  std::unordered_set<std::string> seen;
  std::vector<ConsensusResult> results;
  results.reserve(records.size());
  for (const VoteRecord& record : records) {
    if (!seen.insert(record.instance_id).second) {
      throw ValidationError("duplicate vote record for instance '" +
                            record.instance_id + "'");
    }
    results.push_back(Aggregate(record, options));
  }
  return results;
}

std::map<std::string, GroupLabel> DisparityLabels(
    std::span<const ConsensusResult> results) {
  std::map<std::string, GroupLabel> labels;
  for (const ConsensusResult& result : results) {
    if (result.label == GroupLabel::kLS || result.label == GroupLabel::kDS) {
      labels.emplace(result.instance_id, *result.label);
    }
  }
  return labels;
}

std::string VotePattern(std::span<const GroupLabel> votes) {
  std::vector<GroupLabel> sorted(votes.begin(), votes.end());
  std::sort(sorted.begin(), sorted.end(), [](GroupLabel a, GroupLabel b) {
    return CanonicalIndex(a) < CanonicalIndex(b);
  });
  std::string pattern;
  for (GroupLabel vote : sorted) pattern.push_back(GroupLabelCode(vote));
  return pattern;
}

std::map<std::string, std::size_t> VoteHistogram(
    std::span<const VoteRecord> records) {
  std::map<std::string, std::size_t> histogram;
  for (const VoteRecord& record : records) ++histogram[VotePattern(record.votes)];
  return histogram;
}

double GroupRate(const std::map<std::string, GroupLabel>& labels) {
  if (labels.empty()) {
    throw ValidationError("group rate is undefined for an empty label set");
  }
  std::size_t ds = 0;
  for (const auto& [id, label] : labels) {
    if (label == GroupLabel::kDS) ++ds;
  }
  return static_cast<double>(ds) / static_cast<double>(labels.size());
}

std::vector<VoteRecord> ParseVotes(std::string_view json_text,
                                   const ConsensusOptions& options) {
  const json root = ParseJsonText(json_text, "votes");
  if (!root.is_array()) {
    throw ValidationError("votes: top level must be an array");
  }
  std::vector<VoteRecord> records;
  std::unordered_set<std::string> seen;
  for (const json& item : root) {
    VoteRecord record;
    record.instance_id = RequireString(item, "instance_id", "vote record");
    const std::string context = "vote record '" + record.instance_id + "'";
    for (const json& vote : RequireArray(item, "votes", context)) {
      if (!vote.is_string()) {
        throw ValidationError(context + ": votes must be strings");
      }
      record.votes.push_back(ParseGroupLabel(vote.get<std::string>()));
    }
    CheckVoteCount(record, options);
    if (!seen.insert(record.instance_id).second) {
      throw ValidationError("duplicate vote record for instance '" +
                            record.instance_id + "'");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<VoteRecord> LoadVotes(const std::string& path,
                                  const ConsensusOptions& options) {
  return ParseVotes(ReadTextFile(path), options);
}

std::string ConsensusToJson(std::span<const ConsensusResult> results) {
  json out = json::array();
  for (const ConsensusResult& result : results) {
    json item = {{"instance_id", result.instance_id}};
    if (result.label) {
      item["label"] = GroupLabelName(*result.label);
      item["agreement"] = result.agreement;
    } else {
      item["label"] = "discarded";
    }
    out.push_back(std::move(item));
  }
  return out.dump(2);
}

std::string HistogramToCsv(
    const std::map<std::string, std::size_t>& histogram) {
  std::ostringstream out;
  out << "pattern,count\n";
  for (const auto& [pattern, count] : histogram) {
    out << pattern << ',' << count << '\n';
  }
  return out.str();
}

Dataset ApplyDisparityLabels(Dataset dataset,
                             const std::map<std::string, GroupLabel>& labels) {
  for (GroundTruthInstance& instance : dataset.instances) {
    if (!instance.is_person()) continue;
    if (auto it = labels.find(instance.id); it != labels.end()) {
      instance.group = it->second;
    }
  }
  return dataset;
}

}  // namespace detfair
