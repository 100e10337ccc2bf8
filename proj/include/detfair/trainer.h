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

// Full-batch gradient descent on the toy detector head and the alpha sweep
// built on top of it.

#ifndef DETFAIR_TRAINER_H_
#define DETFAIR_TRAINER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "detfair/matching_eval.h"
#include "detfair/stats.h"
#include "detfair/synthetic.h"
#include "detfair/weighted_loss.h"

namespace detfair {

// No weighting (the plain detection loss), per-attribute W, or per-group
// alphas with group-mean normalization.
using Weighting = std::variant<std::monostate, WeightVector, GroupAlphas>;

enum class WeightingScheme { kAugmented, kGroupNormalized };

const char* WeightingSchemeName(WeightingScheme scheme);
WeightingScheme ParseWeightingScheme(std::string_view text);

// alpha_DS applied with alpha_LS = alpha_O = 1 under `scheme`.
Weighting DsWeighting(WeightingScheme scheme, double alpha_ds);

struct TrainConfig {
  double learning_rate = 0.5;
  std::size_t iterations = 600;
  std::uint64_t seed = 0;
  double init_scale = 0.01;
  // Toy AP50 on the held-out batch every `ap_every` iterations (and at the
  // last one); 0 disables it.
  std::size_t ap_every = 0;

  void Validate() const;
};

// Held-out per-group means of the per-anchor joint loss.
struct GroupLosses {
  double ls = 0.0;
  double ds = 0.0;
  double other = 0.0;
};

struct CurvePoint {
  std::size_t iteration = 0;
  GroupLosses loss;
  std::optional<double> ap50_ls;
  std::optional<double> ap50_ds;
};

struct TrainResult {
  ToyModel model;
  // Entry i is the state after i updates; empty without a held-out batch.
  std::vector<CurvePoint> curve;
};

GroupLosses HeldoutGroupLosses(const ToyModel& model, const ToyBatch& heldout,
                               const LossConfig& config);

// Bit-deterministic in (inputs, config). Throws NumericalError naming the
// iteration if the loss or parameters stop being finite.
TrainResult Train(const ToyBatch& train, const ToyBatch* heldout,
                  const LossConfig& loss, const Weighting& weighting,
                  const TrainConfig& config);

struct ToyMetrics {
  GroupLosses heldout_loss;
  APReport ap_ls;
  APReport ap_ds;
};

ToyMetrics EvaluateToyModel(const ToyModel& model, const ToyBatch& heldout,
                            const LossConfig& loss);

struct SweepConfig {
  std::vector<double> alphas = {1.0, 2.0, 3.0, 5.0, 10.0};
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  WeightingScheme scheme = WeightingScheme::kAugmented;
  SyntheticConfig data;
  LossConfig loss;
  TrainConfig train;
  // Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  void Validate() const;
};

struct SweepMetric {
  RunAggregate ls;
  RunAggregate ds;
  // ls.mean - ds.mean
  double gap = 0.0;
};

struct SweepRow {
  double alpha_ds = 1.0;
  SweepMetric ap;
  SweepMetric ap50;
  SweepMetric ap75;
  SweepMetric heldout_loss;
};

// Seeds for repeat r are shared across alphas, so rows are paired.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream,
                         std::uint64_t index);

std::vector<SweepRow> AlphaSweep(const SweepConfig& config);

}  // namespace detfair

#endif  // DETFAIR_TRAINER_H_
