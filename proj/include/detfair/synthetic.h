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

// Seeded synthetic anchor scenes for the toy detector head.
//
// Every scene holds one person anchor and a few background anchors. The two
// skin-tone groups draw their features from overlapping but shifted
// Gaussians, and each group maps features to box offsets through its own
// linear map, so a single linear head has to trade one group off against
// the other. The DS group sits closer to the background cluster.

#ifndef DETFAIR_SYNTHETIC_H_
#define DETFAIR_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "detfair/dataset.h"
#include "detfair/geometry.h"
#include "detfair/weighted_loss.h"

namespace detfair {

struct SyntheticConfig {
  std::size_t ds_count = 200;
  // LS persons per DS person.
  double ls_to_ds_ratio = 3.5;
  std::size_t heldout_ds_count = 200;
  // Persons whose skin tone is undetermined.
  std::size_t unknown_count = 0;
  std::size_t background_per_scene = 2;
  std::size_t feature_dim = 4;
  // Distance between the LS and DS feature means.
  double group_shift = 1.5;
  double feature_noise = 0.7;
  double offset_noise = 0.05;
  double image_size = 1000.0;

  void Validate() const;
  std::size_t ls_count() const;
  std::size_t heldout_ls_count() const;
};

struct ToyAnchorInfo {
  BBox anchor;
  std::optional<BBox> gt_box;
  std::size_t scene = 0;
};

struct ToyBatch {
  std::vector<AnchorSample> samples;
  // Parallel to `samples`.
  std::vector<ToyAnchorInfo> info;
  std::size_t num_scenes = 0;

  std::size_t CountAttribute(Attribute attribute) const;
};

struct SyntheticData {
  ToyBatch train;
  ToyBatch heldout;
};

// Deterministic in (seed, config).
SyntheticData GenerateSynthetic(std::uint64_t seed,
                                const SyntheticConfig& config = {});

inline constexpr std::size_t kToyNumClasses = 2;  // background, person

// One image per scene; the person box carries its group label.
Dataset ToyGroundTruth(const ToyBatch& batch);

// One "person" detection per anchor: the decoded predicted box scored by the
// model's person probability.
std::vector<Detection> ToyDetections(const ToyModel& model,
                                     const ToyBatch& batch);

}  // namespace detfair

#endif  // DETFAIR_SYNTHETIC_H_
