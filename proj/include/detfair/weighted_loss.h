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

// Detection-head loss with per-attribute reweighting.
//
// The unweighted loss over a batch of sampled anchors is
//
//   L = (1/N_cls) sum_i L_cls(p_i, p*_i) + (lambda/N_reg) sum_i p*_i L_reg(t_i, t*_i)
//
// with L_cls the log loss, L_reg the smooth-L1 distance summed over the four
// box offsets, and p*_i the foreground gate. The augmented form multiplies
// both per-anchor terms by W[a_i], where a_i indexes {LS, DS, NotPerson,
// PersonUnknown}. The group form instead normalizes each group separately:
//
//   L = sum_g (alpha_g / N_g) sum_{i in g} (L_cls + lambda p*_i L_reg)_i
//
// with groups LS, DS and other (everything else).
//
// A ToyModel (linear softmax classifier + linear box regressor over anchor
// features) stands in for the detector head.

#ifndef DETFAIR_WEIGHTED_LOSS_H_
#define DETFAIR_WEIGHTED_LOSS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "detfair/geometry.h"

namespace detfair {

enum class Attribute : std::size_t {
  kLS = 0,
  kDS = 1,
  kNotPerson = 2,
  kPersonUnknown = 3,
};
inline constexpr std::size_t kNumAttributes = 4;

const char* AttributeName(Attribute attribute);

struct AnchorSample {
  Eigen::VectorXd features;
  // Index of the 1 in the one-hot target. Class 0 is background.
  std::size_t true_class = 0;
  // Regression target; present exactly for foreground anchors.
  std::optional<BoxOffsets> t_star;
  Attribute attribute = Attribute::kNotPerson;

  bool is_positive() const { return t_star.has_value(); }
  Eigen::VectorXd p_star(std::size_t num_classes) const;
};

struct LossConfig {
  double lambda = 1.0;
  // Normalizers; batch size when unset.
  std::optional<double> n_cls;
  std::optional<double> n_reg;
  std::size_t num_classes = 2;
  // Floor for the true-class probability inside the log.
  double prob_epsilon = 1e-12;

  void Validate() const;
};

// Per-attribute weights, indexed by Attribute.
class WeightVector {
 public:
  // Throws ValidationError on negative, non-finite or all-zero weights.
  explicit WeightVector(const std::array<double, kNumAttributes>& weights);

  static WeightVector Unit() { return WeightVector({1.0, 1.0, 1.0, 1.0}); }

  double operator[](Attribute attribute) const {
    return weights_[static_cast<std::size_t>(attribute)];
  }
  const std::array<double, kNumAttributes>& values() const { return weights_; }
  WeightVector Scaled(double factor) const;

 private:
  std::array<double, kNumAttributes> weights_;
};

struct GroupAlphas {
  double ls = 1.0;
  double ds = 1.0;
  double other = 1.0;

  void Validate() const;
};

struct ToyModel {
  Eigen::MatrixXd cls_weights;  // num_classes x num_features
  Eigen::VectorXd cls_bias;     // num_classes
  Eigen::MatrixXd reg_weights;  // 4 x num_features
  Eigen::Vector4d reg_bias;

  static ToyModel Zeros(std::size_t num_features, std::size_t num_classes);
  // Parameters drawn i.i.d. N(0, scale^2) from a seeded engine.
  static ToyModel Random(std::size_t num_features, std::size_t num_classes,
                         std::uint64_t seed, double scale);

  std::size_t num_features() const {
    return static_cast<std::size_t>(cls_weights.cols());
  }
  std::size_t num_classes() const {
    return static_cast<std::size_t>(cls_weights.rows());
  }
  std::size_t num_parameters() const;

  // Flat view in a fixed order: cls_weights (column-major), cls_bias,
  // reg_weights (column-major), reg_bias.
  Eigen::VectorXd Flatten() const;
  void Unflatten(const Eigen::VectorXd& parameters);

  Eigen::VectorXd Probabilities(const Eigen::VectorXd& features) const;
  BoxOffsets Offsets(const Eigen::VectorXd& features) const;

  bool AllFinite() const;
};

// A gradient has the shape of the model it differentiates.
using ModelGradient = ToyModel;

// -sum_k p*_k log p_k. `p` must be a distribution (entries in [0, 1],
// sum 1 within 1e-9) and `p_star` one-hot. A true-class probability below
// `epsilon` is clamped, with a one-time warning on std::clog.
double LogLoss(std::span<const double> p, std::span<const double> p_star,
               double epsilon = 1e-12);

// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
double SmoothL1(double x);
// x for |x| < 1, sign(x) otherwise.
double SmoothL1Derivative(double x);

double RegLoss(const BoxOffsets& t, const BoxOffsets& t_star);

double DetectionLoss(std::span<const AnchorSample> batch,
                     const ToyModel& model, const LossConfig& config);

double WeightedDetectionLoss(std::span<const AnchorSample> batch,
                             const ToyModel& model, const LossConfig& config,
                             const WeightVector& weights);

// Exact gradient of WeightedDetectionLoss.
ModelGradient LossGradient(std::span<const AnchorSample> batch,
                           const ToyModel& model, const LossConfig& config,
                           const WeightVector& weights);

// Per-anchor joint loss L_cls + lambda * p* * L_reg (no normalization).
std::vector<double> PerAnchorLosses(std::span<const AnchorSample> batch,
                                    const ToyModel& model,
                                    const LossConfig& config);

// sum_g (alpha_g / N_g) * sum(losses_g); empty groups contribute 0.
double GroupTotalLoss(std::span<const double> losses_ls,
                      std::span<const double> losses_ds,
                      std::span<const double> losses_other,
                      const GroupAlphas& alphas);

// GroupTotalLoss over PerAnchorLosses, with LS/DS anchors in their groups
// and NotPerson/PersonUnknown anchors in "other".
double GroupWeightedLoss(std::span<const AnchorSample> batch,
                         const ToyModel& model, const LossConfig& config,
                         const GroupAlphas& alphas);

ModelGradient GroupLossGradient(std::span<const AnchorSample> batch,
                                const ToyModel& model,
                                const LossConfig& config,
                                const GroupAlphas& alphas);

// Loss and gradient from a single pass; used by the trainer.
double WeightedLossAndGradient(std::span<const AnchorSample> batch,
                               const ToyModel& model, const LossConfig& config,
                               const WeightVector& weights,
                               ModelGradient& gradient);
double GroupLossAndGradient(std::span<const AnchorSample> batch,
                            const ToyModel& model, const LossConfig& config,
                            const GroupAlphas& alphas, ModelGradient& gradient);

}  // namespace detfair

#endif  // DETFAIR_WEIGHTED_LOSS_H_
