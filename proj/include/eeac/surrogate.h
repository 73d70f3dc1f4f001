/*
 * Copyright 2026 The EEAC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EEAC_SURROGATE_H_
#define EEAC_SURROGATE_H_

#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "eeac/coalition.h"

namespace eeac {

// Probability vector over classes. Valid instances are non-negative and sum to
// one within kDistributionTolerance.
struct ClassDistribution {
  Eigen::VectorXd probs;

  int n_classes() const { return static_cast<int>(probs.size()); }
  // Throws SchemaError mentioning `context` when invalid.
  void Validate(std::string_view context = "distribution") const;

  friend bool operator==(const ClassDistribution& a,
                         const ClassDistribution& b) {
    return a.probs.size() == b.probs.size() && a.probs == b.probs;
  }
};

inline constexpr double kDistributionTolerance = 1e-9;
inline constexpr double kLogClamp = 1e-12;

// Max-subtracted softmax.
ClassDistribution Softmax(const Eigen::VectorXd& logits);

// -sum_c target_c * log(max(pred_c, 1e-12)).
double CrossEntropy(const ClassDistribution& pred,
                    const ClassDistribution& target);
// KL(target || pred), with the same clamp on pred.
double KlDivergence(const ClassDistribution& pred,
                    const ClassDistribution& target);
double Entropy(const ClassDistribution& p);

enum class Activation { kIdentity, kTanh, kSigmoid, kRelu };

std::string_view ActivationName(Activation a);
Activation ParseActivation(std::string_view name);

// The classifier's final fully connected layer. Never trained here.
struct FrozenHead {
  Eigen::MatrixXd weight;  // n_classes x d
  Eigen::VectorXd bias;    // n_classes

  int n_classes() const { return static_cast<int>(weight.rows()); }
  int feature_dim() const { return static_cast<int>(weight.cols()); }
  void Validate() const;

  friend bool operator==(const FrozenHead& a, const FrozenHead& b) {
    return a.weight.rows() == b.weight.rows() &&
           a.weight.cols() == b.weight.cols() && a.weight == b.weight &&
           a.bias.size() == b.bias.size() && a.bias == b.bias;
  }
};

enum class SurrogateKind { kLinear, kNonlinear };

// Which h to train: the single linear layer, or FC -> activation -> FC.
struct SurrogateVariant {
  SurrogateKind kind = SurrogateKind::kLinear;
  Activation activation = Activation::kIdentity;  // nonlinear only

  static SurrogateVariant Linear() { return {}; }
  static SurrogateVariant Nonlinear(Activation a) {
    return {SurrogateKind::kNonlinear, a};
  }
  // "linear", or an activation name ("tanh", "sigmoid", "relu", "identity").
  static SurrogateVariant Parse(std::string_view name);
  std::string Name() const;

  friend bool operator==(const SurrogateVariant&,
                         const SurrogateVariant&) = default;
};

// Trainable part h of the PIE model f'(b) = head(h(b)).
//   linear:     h(b) = w1 * b + b1                     (w1: d x n)
//   nonlinear:  h(b) = w2 * act(w1 * b + b1) + b2      (w1: m x n, w2: d x m)
struct SurrogateWeights {
  SurrogateVariant variant;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // empty for linear
  Eigen::VectorXd b2;  // empty for linear

  int n_concepts() const { return static_cast<int>(w1.cols()); }
  int feature_dim() const;
  int hidden_width() const;  // 0 for linear

  // Dimension consistency and finiteness. Throws NumericalError on non-finite
  // values (naming the field) and std::invalid_argument on shape errors.
  void Validate() const;

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per layer.
  static SurrogateWeights Initialize(SurrogateVariant variant, int n_concepts,
                                     int feature_dim, int hidden_width,
                                     Rng& rng);

  friend bool operator==(const SurrogateWeights& a, const SurrogateWeights& b);
};

struct ForwardResult {
  Eigen::VectorXd logits;
  ClassDistribution dist;
};

ForwardResult Forward(const SurrogateWeights& w, const FrozenHead& head,
                      const Coalition& b);

// Same as Forward but skips validation; for inner loops over weights that
// were already validated.
ForwardResult ForwardUnchecked(const SurrogateWeights& w,
                               const FrozenHead& head, const Coalition& b);

struct TrainingPair {
  Coalition coalition;
  ClassDistribution target;
};

// Same shapes as the trainable fields of SurrogateWeights.
struct SurrogateGradients {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
  double mean_loss = 0.0;
};

// Analytic gradient of the batch-mean cross entropy with respect to every
// trainable field. The head only participates through its transpose.
SurrogateGradients Gradients(const SurrogateWeights& w, const FrozenHead& head,
                             std::span<const TrainingPair> batch);

}  // namespace eeac

#endif  // EEAC_SURROGATE_H_
