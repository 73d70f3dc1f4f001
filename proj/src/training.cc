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

#include "eeac/training.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "eeac/errors.h"

namespace eeac {
namespace {

constexpr int kDefaultSampleCap = 1024;

// First and second moment estimates for every trainable block.
struct AdamState {
  SurrogateGradients m;
  SurrogateGradients v;
  long step = 0;
};

template <typename T>
void AdamUpdate(T& param, const T& grad, T& m, T& v, const TrainConfig& cfg,
                double bias1, double bias2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  param.array() -= cfg.learning_rate * (m.array() / bias1) /
                   ((v.array() / bias2).sqrt() + cfg.epsilon);
}

std::vector<Coalition> SampleDistinct(int n, int total, Rng& rng) {
  const Coalition empty = Coalition::Empty(n);
  const Coalition full = Coalition::Full(n);
  std::vector<Coalition> out{empty};
  if (full != empty) out.push_back(full);
  std::unordered_set<Coalition> seen(out.begin(), out.end());

  const bool everything = n < 63 && (std::uint64_t{1} << n) == std::uint64_t(total);
  if (everything) {
    std::vector<Coalition> rest;
    for (const Coalition& s : EnumerateCoalitions(n)) {
      if (!seen.contains(s)) rest.push_back(s);
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  std::uniform_int_distribution<int> size_dist(0, n);
  while (static_cast<int>(out.size()) < total) {
    const Coalition s = SampleCoalition(rng, n, size_dist(rng));
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (n_train_samples < 0 || n_holdout_samples < 0 || hidden_width < 0) {
    throw std::invalid_argument("sample counts and widths must be >= 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 &&
        epsilon > 0.0)) {
    throw std::invalid_argument("invalid Adam hyperparameters");
  }
}

TrainingSet BuildTrainingSet(const OracleCase& c, const TrainConfig& cfg) {
  cfg.Validate();
  const int n = c.n_concepts;
  Rng rng(DeriveSeed(cfg.seed, 0xDA7A));

  // Requested split before capping at the coalition space. Pairs cases are
  // sampled the same way, so the set depends on the seed alone and any
  // coalition the case lacks ends up in a request.
  const double space = std::ldexp(1.0, n);
  const int default_total =
      static_cast<int>(std::min<double>(space, kDefaultSampleCap));
  int holdout = cfg.n_holdout_samples > 0 ? cfg.n_holdout_samples
                                          : default_total / 4;
  int n_train = cfg.n_train_samples > 0 ? cfg.n_train_samples
                                        : default_total - default_total / 4;
  const int total =
      static_cast<int>(std::min<double>(space, double(n_train) + holdout));
  holdout = std::min(holdout, std::max(0, total - 2));
  n_train = total - holdout;

  const std::vector<Coalition> coalitions = SampleDistinct(n, total, rng);
  if (n_train < 1) throw std::invalid_argument("training set would be empty");

  TrainingSet set;
  std::vector<Coalition> missing;
  for (std::size_t j = 0; j < coalitions.size(); ++j) {
    ClassDistribution target;
    try {
      target = Query(c, coalitions[j]);
    } catch (const MissingEntryError&) {
      missing.push_back(coalitions[j]);
      continue;
    }
    auto& dst = static_cast<int>(j) < n_train ? set.train : set.holdout;
    dst.push_back({coalitions[j], std::move(target)});
  }
  if (!missing.empty()) throw MissingEntryError(c.case_id, std::move(missing));
  return set;
}

double MeanCrossEntropy(const SurrogateWeights& w, const FrozenHead& head,
                        const std::vector<TrainingPair>& pairs) {
  double total = 0.0;
  for (const TrainingPair& p : pairs) {
    total += CrossEntropy(ForwardUnchecked(w, head, p.coalition).dist, p.target);
  }
  return pairs.empty() ? 0.0 : total / static_cast<double>(pairs.size());
}

double MeanKl(const SurrogateWeights& w, const FrozenHead& head,
              const std::vector<TrainingPair>& pairs) {
  double total = 0.0;
  for (const TrainingPair& p : pairs) {
    total += KlDivergence(ForwardUnchecked(w, head, p.coalition).dist, p.target);
  }
  return pairs.empty() ? 0.0 : total / static_cast<double>(pairs.size());
}

TrainedSurrogate TrainOnSet(const FrozenHead& head, const TrainingSet& data,
                            SurrogateVariant variant, const TrainConfig& cfg) {
  cfg.Validate();
  head.Validate();
  if (data.train.empty()) throw std::invalid_argument("empty training set");
  const int n = data.train.front().coalition.n();
  const int d = head.feature_dim();
  const int m = cfg.hidden_width > 0 ? cfg.hidden_width : d;

  Rng init_rng(DeriveSeed(cfg.seed, 0x1417));
  Rng shuffle_rng(DeriveSeed(cfg.seed, 0x5487));
  TrainedSurrogate result{SurrogateWeights::Initialize(variant, n, d, m, init_rng),
                          {}};
  SurrogateWeights& w = result.weights;

  AdamState adam;
  auto zeros_like = [](const SurrogateWeights& x) {
    SurrogateGradients z;
    z.w1 = Eigen::MatrixXd::Zero(x.w1.rows(), x.w1.cols());
    z.b1 = Eigen::VectorXd::Zero(x.b1.size());
    z.w2 = Eigen::MatrixXd::Zero(x.w2.rows(), x.w2.cols());
    z.b2 = Eigen::VectorXd::Zero(x.b2.size());
    return z;
  };
  adam.m = zeros_like(w);
  adam.v = zeros_like(w);

  std::vector<TrainingPair> order = data.train;
  const auto start = std::chrono::steady_clock::now();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t first = 0; first < order.size();
         first += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t count =
          std::min(order.size() - first, static_cast<std::size_t>(cfg.batch_size));
      SurrogateGradients g;
      try {
        g = Gradients(w, head, std::span(order).subspan(first, count));
      } catch (const NumericalError& e) {
        throw NumericalError("training diverged at epoch " +
                             std::to_string(epoch) + ": " + e.what());
      }
      ++adam.step;
      const double bias1 = 1.0 - std::pow(cfg.beta1, double(adam.step));
      const double bias2 = 1.0 - std::pow(cfg.beta2, double(adam.step));
      AdamUpdate(w.w1, g.w1, adam.m.w1, adam.v.w1, cfg, bias1, bias2);
      AdamUpdate(w.b1, g.b1, adam.m.b1, adam.v.b1, cfg, bias1, bias2);
      if (variant.kind == SurrogateKind::kNonlinear) {
        AdamUpdate(w.w2, g.w2, adam.m.w2, adam.v.w2, cfg, bias1, bias2);
        AdamUpdate(w.b2, g.b2, adam.m.b2, adam.v.b2, cfg, bias1, bias2);
      }
    }
    const double loss = MeanCrossEntropy(w, head, data.train);
    if (!std::isfinite(loss)) {
      throw NumericalError("training diverged at epoch " + std::to_string(epoch) +
                           ": non-finite loss");
    }
    result.report.loss_curve.push_back(loss);
  }
  const auto stop = std::chrono::steady_clock::now();

  TrainReport& report = result.report;
  report.pie_time_seconds = std::chrono::duration<double>(stop - start).count();
  report.final_train_ce = report.loss_curve.back();
  report.n_train = static_cast<int>(data.train.size());
  report.n_holdout = static_cast<int>(data.holdout.size());
  if (!data.holdout.empty()) {
    report.final_holdout_kl = MeanKl(w, head, data.holdout);
  }
  return result;
}

TrainedSurrogate Train(const OracleCase& c, SurrogateVariant variant,
                       const TrainConfig& cfg) {
  return TrainOnSet(c.head, BuildTrainingSet(c, cfg), variant, cfg);
}

}  // namespace eeac
