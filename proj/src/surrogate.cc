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

#include "eeac/surrogate.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eeac/errors.h"

namespace eeac {
namespace {

Eigen::VectorXd BitsVector(const Coalition& b) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.n());
  for (int i = 0; i < b.n(); ++i) {
    if ((b.bits() >> i) & 1U) x[i] = 1.0;
  }
  return x;
}

Eigen::VectorXd Apply(Activation a, const Eigen::VectorXd& pre) {
  switch (a) {
    case Activation::kIdentity:
      return pre;
    case Activation::kTanh:
      return pre.array().tanh().matrix();
    case Activation::kSigmoid:
      return (1.0 / (1.0 + (-pre.array()).exp())).matrix();
    case Activation::kRelu:
      return pre.cwiseMax(0.0);
  }
  return pre;
}

// d act / d pre, expressed through pre and the activation output.
Eigen::VectorXd Derivative(Activation a, const Eigen::VectorXd& pre,
                           const Eigen::VectorXd& out) {
  switch (a) {
    case Activation::kIdentity:
      return Eigen::VectorXd::Ones(pre.size());
    case Activation::kTanh:
      return (1.0 - out.array().square()).matrix();
    case Activation::kSigmoid:
      return (out.array() * (1.0 - out.array())).matrix();
    case Activation::kRelu:
      return (pre.array() > 0.0).cast<double>().matrix();
  }
  return Eigen::VectorXd::Ones(pre.size());
}

template <typename Derived>
void RequireFinite(const Eigen::DenseBase<Derived>& m, const std::string& name) {
  if (!m.allFinite()) throw NumericalError("non-finite values in " + name);
}

std::string Shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void ClassDistribution::Validate(std::string_view context) const {
  if (probs.size() == 0) {
    throw SchemaError(std::string(context) + ": empty distribution");
  }
  double sum = 0.0;
  for (Eigen::Index c = 0; c < probs.size(); ++c) {
    const double p = probs[c];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw SchemaError(std::string(context) + ": probability " +
                        std::to_string(p) + " at class " + std::to_string(c) +
                        " outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance) {
    throw SchemaError(std::string(context) + ": probabilities sum to " +
                      std::to_string(sum) + ", expected 1");
  }
}

ClassDistribution Softmax(const Eigen::VectorXd& logits) {
  Eigen::ArrayXd e = (logits.array() - logits.maxCoeff()).exp();
  return {(e / e.sum()).matrix()};
}

double CrossEntropy(const ClassDistribution& pred,
                    const ClassDistribution& target) {
  if (pred.probs.size() != target.probs.size()) {
    throw std::invalid_argument("cross entropy over mismatched class counts");
  }
  double loss = 0.0;
  for (Eigen::Index c = 0; c < pred.probs.size(); ++c) {
    if (target.probs[c] == 0.0) continue;
    loss -= target.probs[c] * std::log(std::max(pred.probs[c], kLogClamp));
  }
  return loss;
}

double Entropy(const ClassDistribution& p) {
  double h = 0.0;
  for (Eigen::Index c = 0; c < p.probs.size(); ++c) {
    if (p.probs[c] > 0.0) h -= p.probs[c] * std::log(p.probs[c]);
  }
  return h;
}

double KlDivergence(const ClassDistribution& pred,
                    const ClassDistribution& target) {
  return std::max(0.0, CrossEntropy(pred, target) - Entropy(target));
}

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kRelu:
      return "relu";
  }
  return "identity";
}

Activation ParseActivation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "relu") return Activation::kRelu;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

SurrogateVariant SurrogateVariant::Parse(std::string_view name) {
  if (name == "linear") return Linear();
  return Nonlinear(ParseActivation(name));
}

std::string SurrogateVariant::Name() const {
  if (kind == SurrogateKind::kLinear) return "linear";
  return std::string(ActivationName(activation));
}

void FrozenHead::Validate() const {
  if (weight.rows() < 1 || weight.cols() < 1) {
    throw std::invalid_argument("frozen head must be non-empty");
  }
  if (bias.size() != weight.rows()) {
    throw std::invalid_argument("frozen head bias has " +
                                std::to_string(bias.size()) + " entries for " +
                                std::to_string(weight.rows()) + " classes");
  }
  RequireFinite(weight, "head.weight");
  RequireFinite(bias, "head.bias");
}

int SurrogateWeights::feature_dim() const {
  return static_cast<int>(variant.kind == SurrogateKind::kLinear ? w1.rows()
                                                                 : w2.rows());
}

int SurrogateWeights::hidden_width() const {
  return variant.kind == SurrogateKind::kLinear ? 0
                                                : static_cast<int>(w1.rows());
}

void SurrogateWeights::Validate() const {
  if (w1.rows() < 1 || w1.cols() < 1) {
    throw std::invalid_argument("surrogate w1 must be non-empty");
  }
  if (b1.size() != w1.rows()) {
    throw std::invalid_argument("surrogate b1 size " +
                                std::to_string(b1.size()) +
                                " does not match w1 " + Shape(w1));
  }
  if (variant.kind == SurrogateKind::kNonlinear) {
    if (w2.cols() != w1.rows() || w2.rows() < 1) {
      throw std::invalid_argument("surrogate w2 " + Shape(w2) +
                                  " does not follow w1 " + Shape(w1));
    }
    if (b2.size() != w2.rows()) {
      throw std::invalid_argument("surrogate b2 size " +
                                  std::to_string(b2.size()) +
                                  " does not match w2 " + Shape(w2));
    }
  } else if (w2.size() != 0 || b2.size() != 0) {
    throw std::invalid_argument("linear surrogate carries second-layer weights");
  }
  RequireFinite(w1, "w1");
  RequireFinite(b1, "b1");
  RequireFinite(w2, "w2");
  RequireFinite(b2, "b2");
}

SurrogateWeights SurrogateWeights::Initialize(SurrogateVariant variant,
                                              int n_concepts, int feature_dim,
                                              int hidden_width, Rng& rng) {
  if (n_concepts < 1 || feature_dim < 1) {
    throw std::invalid_argument("surrogate dimensions must be positive");
  }
  auto uniform = [&rng](Eigen::Index rows, Eigen::Index cols, int fan_in) {
    std::uniform_real_distribution<double> dist(-1.0 / std::sqrt(fan_in),
                                                1.0 / std::sqrt(fan_in));
    Eigen::MatrixXd m(rows, cols);
    // Row-major fill keeps the draw order independent of Eigen's storage.
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
    }
    return m;
  };
  SurrogateWeights w;
  w.variant = variant;
  if (variant.kind == SurrogateKind::kLinear) {
    w.w1 = uniform(feature_dim, n_concepts, n_concepts);
    w.b1 = uniform(feature_dim, 1, n_concepts).col(0);
    return w;
  }
  if (hidden_width < 1) throw std::invalid_argument("hidden width must be >= 1");
  w.w1 = uniform(hidden_width, n_concepts, n_concepts);
  w.b1 = uniform(hidden_width, 1, n_concepts).col(0);
  w.w2 = uniform(feature_dim, hidden_width, hidden_width);
  w.b2 = uniform(feature_dim, 1, hidden_width).col(0);
  return w;
}

bool operator==(const SurrogateWeights& a, const SurrogateWeights& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return a.variant == b.variant && same(a.w1, b.w1) && same(a.b1, b.b1) &&
         same(a.w2, b.w2) && same(a.b2, b.b2);
}

ForwardResult ForwardUnchecked(const SurrogateWeights& w,
                               const FrozenHead& head, const Coalition& b) {
  const Eigen::VectorXd x = BitsVector(b);
  Eigen::VectorXd features;
  if (w.variant.kind == SurrogateKind::kLinear) {
    features = w.w1 * x + w.b1;
  } else {
    features = w.w2 * Apply(w.variant.activation, w.w1 * x + w.b1) + w.b2;
  }
  ForwardResult out;
  out.logits = head.weight * features + head.bias;
  out.dist = Softmax(out.logits);
  return out;
}

ForwardResult Forward(const SurrogateWeights& w, const FrozenHead& head,
                      const Coalition& b) {
  w.Validate();
  head.Validate();
  if (b.n() != w.n_concepts()) {
    throw std::invalid_argument("coalition width " + std::to_string(b.n()) +
                                " does not match surrogate input " +
                                std::to_string(w.n_concepts()));
  }
  if (head.feature_dim() != w.feature_dim()) {
    throw std::invalid_argument(
        "surrogate output width " + std::to_string(w.feature_dim()) +
        " does not match head input " + std::to_string(head.feature_dim()));
  }
  return ForwardUnchecked(w, head, b);
}

SurrogateGradients Gradients(const SurrogateWeights& w, const FrozenHead& head,
                             std::span<const TrainingPair> batch) {
  if (batch.empty()) throw std::invalid_argument("empty gradient batch");
  const bool linear = w.variant.kind == SurrogateKind::kLinear;
  SurrogateGradients g;
  g.w1 = Eigen::MatrixXd::Zero(w.w1.rows(), w.w1.cols());
  g.b1 = Eigen::VectorXd::Zero(w.b1.size());
  g.w2 = Eigen::MatrixXd::Zero(w.w2.rows(), w.w2.cols());
  g.b2 = Eigen::VectorXd::Zero(w.b2.size());

  for (const TrainingPair& pair : batch) {
    if (pair.target.probs.size() != head.n_classes()) {
      throw std::invalid_argument("training target has wrong class count");
    }
    const Eigen::VectorXd x = BitsVector(pair.coalition);
    Eigen::VectorXd pre, hidden, features;
    if (linear) {
      features = w.w1 * x + w.b1;
    } else {
      pre = w.w1 * x + w.b1;
      hidden = Apply(w.variant.activation, pre);
      features = w.w2 * hidden + w.b2;
    }
    const Eigen::VectorXd logits = head.weight * features + head.bias;
    RequireFinite(logits, "logits");
    const ClassDistribution pred = Softmax(logits);
    g.mean_loss += CrossEntropy(pred, pair.target);

    const Eigen::VectorXd d_logits = pred.probs - pair.target.probs;
    const Eigen::VectorXd d_features = head.weight.transpose() * d_logits;
    if (linear) {
      g.w1.noalias() += d_features * x.transpose();
      g.b1 += d_features;
    } else {
      g.w2.noalias() += d_features * hidden.transpose();
      g.b2 += d_features;
      const Eigen::VectorXd d_pre =
          (w.w2.transpose() * d_features)
              .cwiseProduct(Derivative(w.variant.activation, pre, hidden));
      g.w1.noalias() += d_pre * x.transpose();
      g.b1 += d_pre;
    }
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  g.w1 *= scale;
  g.b1 *= scale;
  g.w2 *= scale;
  g.b2 *= scale;
  g.mean_loss *= scale;
  RequireFinite(g.w1, "gradient of w1");
  RequireFinite(g.b1, "gradient of b1");
  RequireFinite(g.w2, "gradient of w2");
  RequireFinite(g.b2, "gradient of b2");
  return g;
}

}  // namespace eeac
