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

#include "detfair/weighted_loss.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "detfair/error.h"

namespace detfair {
namespace {

std::atomic<bool> clamp_warning_issued{false};

void WarnClamped(double probability, double epsilon) {
  if (!clamp_warning_issued.exchange(true)) {
    std::clog << "detfair: warning: true-class probability " << probability
              << " clamped to " << epsilon << " in log loss\n";
  }
}

// Per-anchor multipliers and normalizers shared by both weighting schemes.
struct Scaling {
  std::vector<double> anchor_weights;
  double cls_norm = 1.0;
  double reg_norm = 1.0;
};

void ValidateBatch(std::span<const AnchorSample> batch, const ToyModel& model,
                   const LossConfig& config) {
  config.Validate();
  if (batch.empty()) throw ValidationError("loss requires a non-empty batch");
  if (model.num_classes() != config.num_classes) {
    throw ValidationError("model class count does not match the loss config");
  }
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const AnchorSample& s = batch[i];
    std::ostringstream where;
    where << "anchor #" << i;
    if (static_cast<std::size_t>(s.features.size()) != model.num_features()) {
      throw ValidationError(where.str() + ": feature size does not match the "
                                          "model");
    }
    if (s.true_class >= config.num_classes) {
      throw ValidationError(where.str() + ": true class out of range");
    }
    if (s.is_positive() != (s.true_class != 0)) {
      throw ValidationError(where.str() + ": regression target must be "
                                          "present exactly for foreground "
                                          "anchors");
    }
  }
}

double AnchorCount(std::span<const AnchorSample> batch) {
  return static_cast<double>(batch.size());
}

Scaling AugmentedScaling(std::span<const AnchorSample> batch,
                         const LossConfig& config,
                         const WeightVector& weights) {
  Scaling scaling;
  scaling.anchor_weights.reserve(batch.size());
  for (const AnchorSample& s : batch) {
    scaling.anchor_weights.push_back(weights[s.attribute]);
  }
  scaling.cls_norm = config.n_cls.value_or(AnchorCount(batch));
  scaling.reg_norm = config.n_reg.value_or(AnchorCount(batch));
  return scaling;
}

enum class LossGroup { kLS, kDS, kOther };

LossGroup GroupOf(Attribute attribute) {
  switch (attribute) {
    case Attribute::kLS:
      return LossGroup::kLS;
    case Attribute::kDS:
      return LossGroup::kDS;
    default:
      return LossGroup::kOther;
  }
}

Scaling GroupScaling(std::span<const AnchorSample> batch,
                     const GroupAlphas& alphas) {
  alphas.Validate();
  std::array<double, 3> counts{};
  for (const AnchorSample& s : batch) {
    counts[static_cast<std::size_t>(GroupOf(s.attribute))] += 1.0;
  }
  const std::array<double, 3> alpha = {alphas.ls, alphas.ds, alphas.other};
  Scaling scaling;
  scaling.anchor_weights.reserve(batch.size());
  for (const AnchorSample& s : batch) {
    const auto g = static_cast<std::size_t>(GroupOf(s.attribute));
    scaling.anchor_weights.push_back(alpha[g] / counts[g]);
  }
  return scaling;
}

// Row-stacked features and per-anchor terms of one forward pass.
struct ForwardPass {
  Eigen::MatrixXd features;  // N x d
  Eigen::MatrixXd logits;    // N x k
  Eigen::MatrixXd offsets;   // N x 4
};

ForwardPass Forward(std::span<const AnchorSample> batch,
                    const ToyModel& model) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  ForwardPass pass;
  pass.features.resize(n, static_cast<Eigen::Index>(model.num_features()));
  for (Eigen::Index i = 0; i < n; ++i) {
    pass.features.row(i) = batch[static_cast<std::size_t>(i)].features;
  }
  pass.logits = pass.features * model.cls_weights.transpose();
  pass.logits.rowwise() += model.cls_bias.transpose();
  pass.offsets = pass.features * model.reg_weights.transpose();
  pass.offsets.rowwise() += model.reg_bias.transpose();
  return pass;
}

// log p[true_class] for row i, plus the softmax when `softmax` is non-null.
double LogProbability(const ForwardPass& pass, Eigen::Index i,
                      std::size_t true_class, Eigen::VectorXd* softmax) {
  const auto row = pass.logits.row(i);
  const double max_logit = row.maxCoeff();
  const double lse =
      max_logit + std::log((row.array() - max_logit).exp().sum());
  if (softmax != nullptr) {
    *softmax = (row.array() - lse).exp().matrix().transpose();
  }
  return row[static_cast<Eigen::Index>(true_class)] - lse;
}

// Per-anchor log loss with the epsilon floor; sets `clamped`.
double ClsTerm(double log_p, double log_eps, bool& clamped) {
  clamped = log_p < log_eps;
  if (clamped) {
    WarnClamped(std::exp(log_p), std::exp(log_eps));
    return -log_eps;
  }
  return -log_p;
}

double RegTerm(const ForwardPass& pass, Eigen::Index i, const BoxOffsets& t_star,
               Eigen::Vector4d* slope) {
  const std::array<double, 4> target = t_star.AsArray();
  double reg = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double diff = pass.offsets(i, j) - target[j];
    reg += SmoothL1(diff);
    if (slope != nullptr) (*slope)[j] = SmoothL1Derivative(diff);
  }
  return reg;
}

// Loss under `scaling`; fills `gradient` when non-null.
double EvaluateScaled(std::span<const AnchorSample> batch,
                      const ToyModel& model, const LossConfig& config,
                      const Scaling& scaling, ModelGradient* gradient) {
  const double log_eps = std::log(config.prob_epsilon);
  const ForwardPass pass = Forward(batch, model);
  const auto n = static_cast<Eigen::Index>(batch.size());
  const auto k = static_cast<Eigen::Index>(config.num_classes);

  // Derivatives of the loss with respect to logits and offsets, row per
  // anchor.
  Eigen::MatrixXd d_logits;
  Eigen::MatrixXd d_offsets;
  if (gradient != nullptr) {
    d_logits = Eigen::MatrixXd::Zero(n, k);
    d_offsets = Eigen::MatrixXd::Zero(n, 4);
  }

  double cls_sum = 0.0;
  double reg_sum = 0.0;
  Eigen::VectorXd softmax;
  Eigen::Vector4d slope;
  for (Eigen::Index i = 0; i < n; ++i) {
    const AnchorSample& s = batch[static_cast<std::size_t>(i)];
    const double w = scaling.anchor_weights[static_cast<std::size_t>(i)];
    const bool want_grad = gradient != nullptr && w != 0.0;

    const double log_p = LogProbability(pass, i, s.true_class,
                                        want_grad ? &softmax : nullptr);
    bool clamped = false;
    cls_sum += w * ClsTerm(log_p, log_eps, clamped);
    if (want_grad && !clamped) {
      softmax[static_cast<Eigen::Index>(s.true_class)] -= 1.0;
      d_logits.row(i) = (w / scaling.cls_norm) * softmax.transpose();
    }

    if (!s.is_positive()) continue;
    reg_sum += w * RegTerm(pass, i, *s.t_star, want_grad ? &slope : nullptr);
    if (want_grad) {
      d_offsets.row(i) =
          (w * config.lambda / scaling.reg_norm) * slope.transpose();
    }
  }

  if (gradient != nullptr) {
    gradient->cls_weights = d_logits.transpose() * pass.features;
    gradient->cls_bias = d_logits.colwise().sum().transpose();
    gradient->reg_weights = d_offsets.transpose() * pass.features;
    gradient->reg_bias = d_offsets.colwise().sum().transpose();
  }
  return cls_sum / scaling.cls_norm + config.lambda / scaling.reg_norm * reg_sum;
}

}  // namespace

const char* AttributeName(Attribute attribute) {
  switch (attribute) {
    case Attribute::kLS:
      return "LS";
    case Attribute::kDS:
      return "DS";
    case Attribute::kNotPerson:
      return "NotPerson";
    case Attribute::kPersonUnknown:
      return "PersonUnknown";
  }
  return "?";
}

Eigen::VectorXd AnchorSample::p_star(std::size_t num_classes) const {
  Eigen::VectorXd one_hot = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(num_classes));
  one_hot[static_cast<Eigen::Index>(true_class)] = 1.0;
  return one_hot;
}

void LossConfig::Validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("lambda must be a finite positive value");
  }
  if (n_cls && !(*n_cls > 0.0)) throw ValidationError("n_cls must be positive");
  if (n_reg && !(*n_reg > 0.0)) throw ValidationError("n_reg must be positive");
  if (num_classes < 2) throw ValidationError("need at least two classes");
  if (!(prob_epsilon > 0.0 && prob_epsilon < 1.0)) {
    throw ValidationError("prob_epsilon must lie in (0, 1)");
  }
}

WeightVector::WeightVector(const std::array<double, kNumAttributes>& weights)
    : weights_(weights) {
  bool any_positive = false;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("attribute weights must be finite and >= 0");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) {
    throw ValidationError("at least one attribute weight must be positive");
  }
}

WeightVector WeightVector::Scaled(double factor) const {
  std::array<double, kNumAttributes> scaled = weights_;
  for (double& w : scaled) w *= factor;
  return WeightVector(scaled);
}

void GroupAlphas::Validate() const {
  for (double a : {ls, ds, other}) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw ValidationError("group alphas must be finite and >= 0");
    }
  }
  if (ls == 0.0 && ds == 0.0 && other == 0.0) {
    throw ValidationError("at least one group alpha must be positive");
  }
}

ToyModel ToyModel::Zeros(std::size_t num_features, std::size_t num_classes) {
  const auto d = static_cast<Eigen::Index>(num_features);
  const auto k = static_cast<Eigen::Index>(num_classes);
  return ToyModel{
      .cls_weights = Eigen::MatrixXd::Zero(k, d),
      .cls_bias = Eigen::VectorXd::Zero(k),
      .reg_weights = Eigen::MatrixXd::Zero(4, d),
      .reg_bias = Eigen::Vector4d::Zero(),
  };
}

ToyModel ToyModel::Random(std::size_t num_features, std::size_t num_classes,
                          std::uint64_t seed, double scale) {
  ToyModel model = Zeros(num_features, num_classes);
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd params(static_cast<Eigen::Index>(model.num_parameters()));
  for (Eigen::Index i = 0; i < params.size(); ++i) params[i] = normal(engine);
  model.Unflatten(params);
  return model;
}

std::size_t ToyModel::num_parameters() const {
  return static_cast<std::size_t>(cls_weights.size() + cls_bias.size() +
                                  reg_weights.size() + reg_bias.size());
}

Eigen::VectorXd ToyModel::Flatten() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(num_parameters()));
  Eigen::Index at = 0;
  auto put = [&](const auto& block) {
    for (Eigen::Index i = 0; i < block.size(); ++i) out[at++] = block.data()[i];
  };
  put(cls_weights);
  put(cls_bias);
  put(reg_weights);
  put(reg_bias);
  return out;
}

void ToyModel::Unflatten(const Eigen::VectorXd& parameters) {
  if (static_cast<std::size_t>(parameters.size()) != num_parameters()) {
    throw ValidationError("parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  auto take = [&](auto& block) {
    for (Eigen::Index i = 0; i < block.size(); ++i) {
      block.data()[i] = parameters[at++];
    }
  };
  take(cls_weights);
  take(cls_bias);
  take(reg_weights);
  take(reg_bias);
}

Eigen::VectorXd ToyModel::Probabilities(const Eigen::VectorXd& features) const {
  const Eigen::VectorXd logits = cls_weights * features + cls_bias;
  const Eigen::ArrayXd e = (logits.array() - logits.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

BoxOffsets ToyModel::Offsets(const Eigen::VectorXd& features) const {
  const Eigen::Vector4d t = reg_weights * features + reg_bias;
  return BoxOffsets{t[0], t[1], t[2], t[3]};
}

bool ToyModel::AllFinite() const {
  return cls_weights.allFinite() && cls_bias.allFinite() &&
         reg_weights.allFinite() && reg_bias.allFinite();
}

double LogLoss(std::span<const double> p, std::span<const double> p_star,
               double epsilon) {
  if (p.size() != p_star.size() || p.empty()) {
    throw ValidationError("log loss: p and p_star must have the same "
                          "non-zero length");
  }
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("log loss: probabilities must lie in [0, 1]");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("log loss: probabilities must sum to 1");
  }
  std::optional<std::size_t> hot;
  for (std::size_t i = 0; i < p_star.size(); ++i) {
    if (p_star[i] == 1.0 && !hot) {
      hot = i;
    } else if (p_star[i] != 0.0) {
      throw ValidationError("log loss: p_star must be one-hot");
    }
  }
  if (!hot) throw ValidationError("log loss: p_star must be one-hot");
  double prob = p[*hot];
  if (prob < epsilon) {
    WarnClamped(prob, epsilon);
    prob = epsilon;
  }
  return -std::log(prob);
}

double SmoothL1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double SmoothL1Derivative(double x) {
  if (std::abs(x) < 1.0) return x;
  return x > 0.0 ? 1.0 : -1.0;
}

double RegLoss(const BoxOffsets& t, const BoxOffsets& t_star) {
  return SmoothL1(t.tx - t_star.tx) + SmoothL1(t.ty - t_star.ty) +
         SmoothL1(t.tw - t_star.tw) + SmoothL1(t.th - t_star.th);
}

double DetectionLoss(std::span<const AnchorSample> batch,
                     const ToyModel& model, const LossConfig& config) {
  return WeightedDetectionLoss(batch, model, config, WeightVector::Unit());
}

double WeightedDetectionLoss(std::span<const AnchorSample> batch,
                             const ToyModel& model, const LossConfig& config,
                             const WeightVector& weights) {
  ValidateBatch(batch, model, config);
  return EvaluateScaled(batch, model, config,
                        AugmentedScaling(batch, config, weights), nullptr);
}

double WeightedLossAndGradient(std::span<const AnchorSample> batch,
                               const ToyModel& model, const LossConfig& config,
                               const WeightVector& weights,
                               ModelGradient& gradient) {
  ValidateBatch(batch, model, config);
  return EvaluateScaled(batch, model, config,
                        AugmentedScaling(batch, config, weights), &gradient);
}

double GroupLossAndGradient(std::span<const AnchorSample> batch,
                            const ToyModel& model, const LossConfig& config,
                            const GroupAlphas& alphas,
                            ModelGradient& gradient) {
  ValidateBatch(batch, model, config);
  return EvaluateScaled(batch, model, config, GroupScaling(batch, alphas),
                        &gradient);
}

ModelGradient LossGradient(std::span<const AnchorSample> batch,
                           const ToyModel& model, const LossConfig& config,
                           const WeightVector& weights) {
  ValidateBatch(batch, model, config);
  ModelGradient gradient;
  EvaluateScaled(batch, model, config, AugmentedScaling(batch, config, weights),
                 &gradient);
  return gradient;
}

std::vector<double> PerAnchorLosses(std::span<const AnchorSample> batch,
                                    const ToyModel& model,
                                    const LossConfig& config) {
  ValidateBatch(batch, model, config);
  const double log_eps = std::log(config.prob_epsilon);
  const ForwardPass pass = Forward(batch, model);
  std::vector<double> losses;
  losses.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const AnchorSample& s = batch[i];
    const auto row = static_cast<Eigen::Index>(i);
    bool clamped = false;
    double loss = ClsTerm(LogProbability(pass, row, s.true_class, nullptr),
                          log_eps, clamped);
    if (s.is_positive()) {
      loss += config.lambda * RegTerm(pass, row, *s.t_star, nullptr);
    }
    losses.push_back(loss);
  }
  return losses;
}

double GroupTotalLoss(std::span<const double> losses_ls,
                      std::span<const double> losses_ds,
                      std::span<const double> losses_other,
                      const GroupAlphas& alphas) {
  alphas.Validate();
  auto term = [](double alpha, std::span<const double> losses) {
    if (losses.empty()) return 0.0;
    double sum = 0.0;
    for (double v : losses) sum += v;
    return alpha / static_cast<double>(losses.size()) * sum;
  };
  return term(alphas.ls, losses_ls) + term(alphas.ds, losses_ds) +
         term(alphas.other, losses_other);
}

double GroupWeightedLoss(std::span<const AnchorSample> batch,
                         const ToyModel& model, const LossConfig& config,
                         const GroupAlphas& alphas) {
  ValidateBatch(batch, model, config);
  return EvaluateScaled(batch, model, config, GroupScaling(batch, alphas),
                        nullptr);
}

ModelGradient GroupLossGradient(std::span<const AnchorSample> batch,
                                const ToyModel& model,
                                const LossConfig& config,
                                const GroupAlphas& alphas) {
  ValidateBatch(batch, model, config);
  ModelGradient gradient;
  EvaluateScaled(batch, model, config, GroupScaling(batch, alphas), &gradient);
  return gradient;
}

}  // namespace detfair
