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

#include "detfair/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "detfair/error.h"

namespace detfair {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double LossAndGradient(std::span<const AnchorSample> batch,
                       const ToyModel& model, const LossConfig& loss,
                       const Weighting& weighting, ModelGradient& gradient) {
  if (const auto* w = std::get_if<WeightVector>(&weighting)) {
    return WeightedLossAndGradient(batch, model, loss, *w, gradient);
  }
  if (const auto* a = std::get_if<GroupAlphas>(&weighting)) {
    return GroupLossAndGradient(batch, model, loss, *a, gradient);
  }
  return WeightedLossAndGradient(batch, model, loss, WeightVector::Unit(),
                                 gradient);
}

std::optional<double> ToyAp50(const ToyModel& model, const ToyBatch& heldout,
                              GroupLabel group) {
  const Dataset truth = ToyGroundTruth(heldout);
  const std::vector<Detection> detections = ToyDetections(model, heldout);
  GroupEvalOptions options;
  options.eval.iou_thresholds = {0.5};
  return GroupEvaluate(detections, truth, group, options).ap50;
}

}  // namespace

const char* WeightingSchemeName(WeightingScheme scheme) {
  switch (scheme) {
    case WeightingScheme::kAugmented:
      return "augmented";
    case WeightingScheme::kGroupNormalized:
      return "group";
  }
  return "?";
}

WeightingScheme ParseWeightingScheme(std::string_view text) {
  if (text == "augmented") return WeightingScheme::kAugmented;
  if (text == "group") return WeightingScheme::kGroupNormalized;
  throw ValidationError("unknown weighting scheme '" + std::string(text) +
                        "' (expected augmented or group)");
}

Weighting DsWeighting(WeightingScheme scheme, double alpha_ds) {
  if (scheme == WeightingScheme::kGroupNormalized) {
    GroupAlphas alphas{.ls = 1.0, .ds = alpha_ds, .other = 1.0};
    alphas.Validate();
    return alphas;
  }
  return WeightVector({1.0, alpha_ds, 1.0, 1.0});
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning rate must be a finite positive value");
  }
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    throw ValidationError("init_scale must be a finite value >= 0");
  }
}

GroupLosses HeldoutGroupLosses(const ToyModel& model, const ToyBatch& heldout,
                               const LossConfig& config) {
  const std::vector<double> losses =
      PerAnchorLosses(heldout.samples, model, config);
  std::array<double, 3> sums{};
  std::array<double, 3> counts{};
  for (std::size_t i = 0; i < losses.size(); ++i) {
    std::size_t g = 2;
    if (heldout.samples[i].attribute == Attribute::kLS) g = 0;
    if (heldout.samples[i].attribute == Attribute::kDS) g = 1;
    sums[g] += losses[i];
    counts[g] += 1.0;
  }
  auto mean = [&](std::size_t g) {
    return counts[g] > 0.0 ? sums[g] / counts[g] : 0.0;
  };
  return GroupLosses{.ls = mean(0), .ds = mean(1), .other = mean(2)};
}

TrainResult Train(const ToyBatch& train, const ToyBatch* heldout,
                  const LossConfig& loss, const Weighting& weighting,
                  const TrainConfig& config) {
  config.Validate();
  loss.Validate();
  if (train.samples.empty()) {
    throw ValidationError("training batch is empty");
  }
  const std::size_t dim =
      static_cast<std::size_t>(train.samples.front().features.size());
  TrainResult result{
      .model = ToyModel::Random(dim, loss.num_classes, config.seed,
                                config.init_scale),
      .curve = {}};

  auto record = [&](std::size_t iteration) {
    if (heldout == nullptr) return;
    CurvePoint point{.iteration = iteration,
                     .loss = HeldoutGroupLosses(result.model, *heldout, loss)};
    const bool ap_due =
        config.ap_every > 0 &&
        (iteration % config.ap_every == 0 || iteration == config.iterations);
    if (ap_due) {
      point.ap50_ls = ToyAp50(result.model, *heldout, GroupLabel::kLS);
      point.ap50_ds = ToyAp50(result.model, *heldout, GroupLabel::kDS);
    }
    result.curve.push_back(point);
  };

  record(0);
  ModelGradient gradient;
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    const double value =
        LossAndGradient(train.samples, result.model, loss, weighting, gradient);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "training diverged: non-finite loss at iteration " << it;
      throw NumericalError(msg.str());
    }
    result.model.cls_weights -= config.learning_rate * gradient.cls_weights;
    result.model.cls_bias -= config.learning_rate * gradient.cls_bias;
    result.model.reg_weights -= config.learning_rate * gradient.reg_weights;
    result.model.reg_bias -= config.learning_rate * gradient.reg_bias;
    if (!result.model.AllFinite()) {
      std::ostringstream msg;
      msg << "training diverged: non-finite parameters at iteration " << it;
      throw NumericalError(msg.str());
    }
    record(it);
  }
  return result;
}

ToyMetrics EvaluateToyModel(const ToyModel& model, const ToyBatch& heldout,
                            const LossConfig& loss) {
  const Dataset truth = ToyGroundTruth(heldout);
  const std::vector<Detection> detections = ToyDetections(model, heldout);
  return ToyMetrics{
      .heldout_loss = HeldoutGroupLosses(model, heldout, loss),
      .ap_ls = GroupEvaluate(detections, truth, GroupLabel::kLS),
      .ap_ds = GroupEvaluate(detections, truth, GroupLabel::kDS),
  };
}

void SweepConfig::Validate() const {
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  for (double alpha : alphas) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
      throw ValidationError("alpha values must be finite and >= 0");
    }
  }
  data.Validate();
  loss.Validate();
  train.Validate();
  if (loss.num_classes != kToyNumClasses) {
    throw ValidationError("the synthetic scenes use exactly two classes");
  }
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream,
                         std::uint64_t index) {
  return SplitMix64(SplitMix64(SplitMix64(base) ^ stream) ^ index);
}

std::vector<SweepRow> AlphaSweep(const SweepConfig& config) {
  config.Validate();
  const std::size_t num_alphas = config.alphas.size();
  const std::size_t repeats = config.repeats;

  std::vector<ToyMetrics> runs(num_alphas * repeats);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t job = next++; job < runs.size(); job = next++) {
      const std::size_t a = job / repeats;
      const std::size_t r = job % repeats;
      try {
        const SyntheticData data = GenerateSynthetic(
            DeriveSeed(config.seed, /*stream=*/1, r), config.data);
        TrainConfig train = config.train;
        train.seed = DeriveSeed(config.seed, /*stream=*/2, r);
        train.ap_every = 0;
        const TrainResult trained =
            Train(data.train, nullptr, config.loss,
                  DsWeighting(config.scheme, config.alphas[a]), train);
        runs[job] = EvaluateToyModel(trained.model, data.heldout, config.loss);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::size_t threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(runs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  for (std::size_t a = 0; a < num_alphas; ++a) {
    std::array<std::vector<double>, 4> ls_values;
    std::array<std::vector<double>, 4> ds_values;
    for (std::size_t r = 0; r < repeats; ++r) {
      const ToyMetrics& m = runs[a * repeats + r];
      if (!m.ap_ls.defined() || !m.ap_ds.defined()) {
        throw NumericalError("toy evaluation produced an absent AP report");
      }
      ls_values[0].push_back(*m.ap_ls.ap);
      ds_values[0].push_back(*m.ap_ds.ap);
      ls_values[1].push_back(*m.ap_ls.ap50);
      ds_values[1].push_back(*m.ap_ds.ap50);
      ls_values[2].push_back(*m.ap_ls.ap75);
      ds_values[2].push_back(*m.ap_ds.ap75);
      ls_values[3].push_back(m.heldout_loss.ls);
      ds_values[3].push_back(m.heldout_loss.ds);
    }
    auto metric = [&](std::size_t i) {
      SweepMetric out{.ls = AggregateRuns(ls_values[i]),
                      .ds = AggregateRuns(ds_values[i])};
      out.gap = out.ls.mean - out.ds.mean;
      return out;
    };
    rows.push_back(SweepRow{.alpha_ds = config.alphas[a],
                            .ap = metric(0),
                            .ap50 = metric(1),
                            .ap75 = metric(2),
                            .heldout_loss = metric(3)});
  }
  return rows;
}

}  // namespace detfair
