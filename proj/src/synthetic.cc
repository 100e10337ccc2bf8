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

#include "detfair/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "detfair/error.h"

namespace detfair {
namespace {

// Decoded boxes are clipped to exp(+-kMaxLogScale) times the anchor size.
constexpr double kMaxLogScale = 4.0;

struct GroupModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd offset_map;  // 4 x d
};

Eigen::MatrixXd OffsetMap(std::size_t dim, double phase) {
  Eigen::MatrixXd map(4, static_cast<Eigen::Index>(dim));
  for (Eigen::Index j = 0; j < 4; ++j) {
    for (Eigen::Index m = 0; m < map.cols(); ++m) {
      map(j, m) = 0.12 * std::cos(1.3 * j + 0.7 * m + phase);
    }
  }
  return map;
}

struct Generator {
  const SyntheticConfig& config;
  std::mt19937_64 engine;
  GroupModel ls;
  GroupModel ds;
  GroupModel unknown;
  Eigen::VectorXd background_mean;

  Generator(std::uint64_t seed, const SyntheticConfig& cfg)
      : config(cfg), engine(seed) {
    const auto d = static_cast<Eigen::Index>(cfg.feature_dim);
    ls.mean = Eigen::VectorXd::Zero(d);
    ls.mean[0] = 1.5;
    ds.mean = ls.mean;
    ds.mean[0] -= 0.6 * cfg.group_shift;
    ds.mean[1] += 0.8 * cfg.group_shift;
    unknown.mean = 0.5 * (ls.mean + ds.mean);
    background_mean = Eigen::VectorXd::Zero(d);
    background_mean[0] = -1.5;
    ls.offset_map = OffsetMap(cfg.feature_dim, 0.4);
    ds.offset_map = OffsetMap(cfg.feature_dim, 2.4);
    unknown.offset_map = 0.5 * (ls.offset_map + ds.offset_map);
  }

  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }

  Eigen::VectorXd Features(const Eigen::VectorXd& mean) {
    std::normal_distribution<double> noise(0.0, config.feature_noise);
    Eigen::VectorXd x = mean;
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += noise(engine);
    return x;
  }

  BBox Anchor(double x_lo, double x_hi) {
    const double w = Uniform(80.0, 160.0);
    return BBox::FromCenter(Uniform(x_lo, x_hi), Uniform(300.0, 700.0), w,
                            2.0 * w);
  }

  void AddScene(ToyBatch& batch, Attribute attribute) {
    const GroupModel& group = attribute == Attribute::kLS   ? ls
                              : attribute == Attribute::kDS ? ds
                                                            : unknown;
    const std::size_t scene = batch.num_scenes++;

    AnchorSample person;
    person.features = Features(group.mean);
    person.true_class = 1;
    person.attribute = attribute;
    Eigen::Vector4d t = group.offset_map * person.features;
    std::normal_distribution<double> noise(0.0, config.offset_noise);
    for (int j = 0; j < 4; ++j) {
      const double limit = j < 2 ? 0.5 : 0.7;
      t[j] = std::clamp(t[j] + noise(engine), -limit, limit);
    }
    const BBox anchor = Anchor(150.0, 350.0);
    const BBox gt = DecodeOffsets(BoxOffsets{t[0], t[1], t[2], t[3]}, anchor);
    person.t_star = EncodeOffsets(gt, anchor);
    batch.samples.push_back(std::move(person));
    batch.info.push_back(ToyAnchorInfo{anchor, gt, scene});

    for (std::size_t b = 0; b < config.background_per_scene; ++b) {
      AnchorSample background;
      background.features = Features(background_mean);
      background.true_class = 0;
      background.attribute = Attribute::kNotPerson;
      batch.samples.push_back(std::move(background));
      batch.info.push_back(ToyAnchorInfo{Anchor(700.0, 900.0), std::nullopt,
                                         scene});
    }
  }

  ToyBatch Batch(std::size_t ls_count, std::size_t ds_count,
                 std::size_t unknown_count) {
    std::vector<Attribute> scenes;
    scenes.insert(scenes.end(), ls_count, Attribute::kLS);
    scenes.insert(scenes.end(), ds_count, Attribute::kDS);
    scenes.insert(scenes.end(), unknown_count, Attribute::kPersonUnknown);
    std::shuffle(scenes.begin(), scenes.end(), engine);
    ToyBatch batch;
    for (Attribute attribute : scenes) AddScene(batch, attribute);
    return batch;
  }
};

std::string SceneId(std::size_t scene) {
  return "scene-" + std::to_string(scene);
}

}  // namespace

void SyntheticConfig::Validate() const {
  if (ds_count < 1 || heldout_ds_count < 1) {
    throw ValidationError("synthetic data needs at least one DS person per "
                          "split");
  }
  if (!(ls_to_ds_ratio > 0.0) || !std::isfinite(ls_to_ds_ratio) ||
      ls_count() < 1 || heldout_ls_count() < 1) {
    throw ValidationError("synthetic data needs a positive LS:DS ratio and at "
                          "least one LS person per split");
  }
  if (feature_dim < 2) throw ValidationError("feature_dim must be >= 2");
  if (!(feature_noise > 0.0) || !(offset_noise >= 0.0)) {
    throw ValidationError("noise levels must be non-negative (features > 0)");
  }
  if (!(image_size >= 1000.0)) {
    throw ValidationError("image_size must be at least 1000 pixels");
  }
}

std::size_t SyntheticConfig::ls_count() const {
  return static_cast<std::size_t>(
      std::llround(ls_to_ds_ratio * static_cast<double>(ds_count)));
}

std::size_t SyntheticConfig::heldout_ls_count() const {
  return static_cast<std::size_t>(
      std::llround(ls_to_ds_ratio * static_cast<double>(heldout_ds_count)));
}

std::size_t ToyBatch::CountAttribute(Attribute attribute) const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(),
      [&](const AnchorSample& s) { return s.attribute == attribute; }));
}

SyntheticData GenerateSynthetic(std::uint64_t seed,
                                const SyntheticConfig& config) {
  config.Validate();
  Generator generator(seed, config);
  SyntheticData data;
  data.train = generator.Batch(config.ls_count(), config.ds_count,
                               config.unknown_count);
  data.heldout = generator.Batch(config.heldout_ls_count(),
                                 config.heldout_ds_count, config.unknown_count);
  return data;
}

Dataset ToyGroundTruth(const ToyBatch& batch) {
  Dataset dataset;
  for (std::size_t scene = 0; scene < batch.num_scenes; ++scene) {
    dataset.images.push_back(ImageRecord{.id = SceneId(scene),
                                         .width = 1000.0,
                                         .height = 1000.0,
                                         .time_of_day = TimeOfDay::kOther});
  }
  for (std::size_t i = 0; i < batch.samples.size(); ++i) {
    const ToyAnchorInfo& info = batch.info[i];
    if (!info.gt_box) continue;
    std::optional<GroupLabel> group;
    switch (batch.samples[i].attribute) {
      case Attribute::kLS:
        group = GroupLabel::kLS;
        break;
      case Attribute::kDS:
        group = GroupLabel::kDS;
        break;
      default:
        group = GroupLabel::kUnknown;
        break;
    }
    dataset.instances.push_back(GroundTruthInstance{
        .id = SceneId(info.scene) + "/person",
        .image_id = SceneId(info.scene),
        .bbox = *info.gt_box,
        .class_name = kPersonClass,
        .group = group,
    });
  }
  return dataset;
}

std::vector<Detection> ToyDetections(const ToyModel& model,
                                     const ToyBatch& batch) {
  std::vector<Detection> detections;
  detections.reserve(batch.samples.size());
  for (std::size_t i = 0; i < batch.samples.size(); ++i) {
    const AnchorSample& sample = batch.samples[i];
    BoxOffsets t = model.Offsets(sample.features);
    t.tw = std::clamp(t.tw, -kMaxLogScale, kMaxLogScale);
    t.th = std::clamp(t.th, -kMaxLogScale, kMaxLogScale);
    const double score =
        std::clamp(model.Probabilities(sample.features)[1], 0.0, 1.0);
    detections.push_back(Detection{
        .image_id = SceneId(batch.info[i].scene),
        .bbox = DecodeOffsets(t, batch.info[i].anchor),
        .class_name = kPersonClass,
        .score = score,
    });
  }
  return detections;
}

}  // namespace detfair
