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


// Fixtures shaped like the published dataset tables.

#ifndef DETFAIR_TESTS_FIXTURES_H_
#define DETFAIR_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "detfair/consensus.h"
#include "detfair/dataset.h"

namespace detfair::testing {

// Three-annotator vote records whose majorities give `ls` LS and `ds` DS
// persons. Agreement patterns rotate through unanimous and 2-of-3 votes,
// and `noise` extra records resolve to U or are discarded outright.
inline std::vector<VoteRecord> ConsensusVotes(const std::string& prefix,
                                              int ls, int ds, int noise) {
  using G = GroupLabel;
  const std::vector<std::vector<G>> ls_patterns = {
      {G::kLS, G::kLS, G::kLS}, {G::kLS, G::kDS, G::kLS},
      {G::kUnknown, G::kLS, G::kLS}, {G::kLS, G::kLS, G::kNotPerson}};
  const std::vector<std::vector<G>> ds_patterns = {
      {G::kDS, G::kDS, G::kDS}, {G::kDS, G::kLS, G::kDS},
      {G::kDS, G::kDS, G::kUnknown}};
  const std::vector<std::vector<G>> noise_patterns = {
      {G::kLS, G::kDS, G::kUnknown}, {G::kUnknown, G::kUnknown, G::kLS},
      {G::kNotPerson, G::kNotPerson, G::kNotPerson},
      {G::kDS, G::kUnknown, G::kNotPerson}};
  std::vector<VoteRecord> records;
  int serial = 0;
  auto add = [&](const std::vector<G>& votes) {
    records.push_back({prefix + std::to_string(serial++), votes});
  };
  for (int i = 0; i < ls; ++i) add(ls_patterns[i % ls_patterns.size()]);
  for (int i = 0; i < ds; ++i) add(ds_patterns[i % ds_patterns.size()]);
  for (int i = 0; i < noise; ++i) add(noise_patterns[i % noise_patterns.size()]);
  return records;
}

inline std::vector<VoteRecord> TrainSplitVotes() {
  return ConsensusVotes("train-", 2724, 789, 211);
}

inline std::vector<VoteRecord> ValidationSplitVotes() {
  return ConsensusVotes("val-", 387, 100, 29);
}

// One image per record, each holding a single unlabeled person whose id
// matches the vote record.
inline Dataset PersonsFor(const std::vector<VoteRecord>& votes) {
  Dataset d;
  for (const VoteRecord& v : votes) {
    d.images.push_back({v.instance_id + ".jpg", 1280, 720, TimeOfDay::kDay});
    d.instances.push_back(GroundTruthInstance{.id = v.instance_id,
                                              .image_id = v.instance_id + ".jpg",
                                              .bbox = BBox(0, 0, 100, 200),
                                              .class_name = kPersonClass});
  }
  return d;
}

}  // namespace detfair::testing

#endif  // DETFAIR_TESTS_FIXTURES_H_
