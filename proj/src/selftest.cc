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

#include "eeac/selftest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "eeac/games.h"
#include "eeac/oracle.h"
#include "eeac/records.h"
#include "eeac/shapley.h"
#include "eeac/explanation.h"
#include "eeac/training.h"

namespace eeac {
namespace {

double BatchLoss(const SurrogateWeights& w, const FrozenHead& head,
                 const std::vector<TrainingPair>& batch) {
  double total = 0.0;
  for (const TrainingPair& p : batch) {
    total += CrossEntropy(ForwardUnchecked(w, head, p.coalition).dist, p.target);
  }
  return total / static_cast<double>(batch.size());
}

CheckResult Check(std::string name, const std::function<std::string()>& body) {
  CheckResult r{std::move(name), false, ""};
  try {
    r.detail = body();
    r.passed = r.detail.empty();
    if (r.passed) r.detail = "ok";
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

std::string Fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

ClassDistribution RandomDistribution(int classes, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  Eigen::VectorXd p(classes);
  for (int c = 0; c < classes; ++c) p[c] = unit(rng);
  return {p / p.sum()};
}

}  // namespace

double MaxGradientError(const SurrogateWeights& w, const FrozenHead& head,
                        const std::vector<TrainingPair>& batch, double step,
                        double floor) {
  const SurrogateGradients g = Gradients(w, head, batch);
  double worst = 0.0;
  auto probe = [&](auto member_w, const auto& analytic) {
    SurrogateWeights plus = w;
    SurrogateWeights minus = w;
    auto& pw = plus.*member_w;
    auto& mw = minus.*member_w;
    for (Eigen::Index k = 0; k < pw.size(); ++k) {
      const double original = pw.data()[k];
      pw.data()[k] = original + step;
      mw.data()[k] = original - step;
      const double numeric =
          (BatchLoss(plus, head, batch) - BatchLoss(minus, head, batch)) / (2 * step);
      pw.data()[k] = original;
      mw.data()[k] = original;
      const double a = analytic.data()[k];
      const double err =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      worst = std::max(worst, err);
    }
  };
  probe(&SurrogateWeights::w1, g.w1);
  probe(&SurrogateWeights::b1, g.b1);
  if (w.variant.kind == SurrogateKind::kNonlinear) {
    probe(&SurrogateWeights::w2, g.w2);
    probe(&SurrogateWeights::b2, g.b2);
  }
  return worst;
}

double KinkDistance(const SurrogateWeights& w,
                    const std::vector<TrainingPair>& batch) {
  double nearest = std::numeric_limits<double>::infinity();
  if (w.variant != SurrogateVariant::Nonlinear(Activation::kRelu)) return nearest;
  for (const TrainingPair& p : batch) {
    Eigen::VectorXd pre = w.b1;
    for (int i = 0; i < w.n_concepts(); ++i) {
      if (p.coalition.Contains(i)) pre += w.w1.col(i);
    }
    nearest = std::min(nearest, pre.cwiseAbs().minCoeff());
  }
  return nearest;
}

std::vector<CheckResult> RunSelftest(const SelftestInputs& inputs) {
  std::vector<CheckResult> results;

  results.push_back(Check("shapley_axioms", []() -> std::string {
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + t % 7;
      const GameView game = TableGame(
          n, RandomGameTable(n, DeriveSeed(11, t), 0, std::pair{1, n - 1}));
      const ShapleyEstimate est = ExactShapley(game);
      double sum = 0.0;
      for (double v : est.values) sum += v;
      const double gap = game(Coalition::Full(n)) - game(Coalition::Empty(n));
      if (std::abs(sum - gap) >= 1e-10) return "efficiency violated at game " + std::to_string(t);
      if (est.values[0] != 0.0) return "dummy concept nonzero at game " + std::to_string(t);
      if (n > 2 && std::abs(est.values[1] - est.values[static_cast<std::size_t>(n - 1)]) > 1e-12) {
        return "symmetry violated at game " + std::to_string(t);
      }
    }
    return std::string();
  }));

  results.push_back(Check("monte_carlo_vs_exact", []() -> std::string {
    const GameView game = TableGame(10, RandomGameTable(10, 2024));
    const ShapleyEstimate exact = ExactShapley(game);
    const ShapleyEstimate mc = MonteCarloShapley(game, 20000, 0);
    for (int i = 0; i < 10; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double err = std::abs(mc.values[k] - exact.values[k]);
      if (err > 0.01 || err > 4 * mc.std_errors[k]) {
        return "concept " + std::to_string(i) + " error " + Fmt(err);
      }
    }
    return std::string();
  }));

  results.push_back(Check("gradient_check", []() -> std::string {
    const SurrogateVariant variants[] = {
        SurrogateVariant::Linear(), SurrogateVariant::Nonlinear(Activation::kTanh),
        SurrogateVariant::Nonlinear(Activation::kSigmoid),
        SurrogateVariant::Nonlinear(Activation::kRelu),
        SurrogateVariant::Nonlinear(Activation::kIdentity)};
    for (int t = 0; t < 5; ++t) {
      Rng rng(DeriveSeed(77, t));
      FrozenHead head;
      head.weight = Eigen::MatrixXd::Random(3, 4);
      head.bias = Eigen::VectorXd::Random(3);
      std::vector<TrainingPair> batch;
      std::uniform_int_distribution<int> size(0, 5);
      for (int b = 0; b < 6; ++b) {
        batch.push_back({SampleCoalition(rng, 5, size(rng)), RandomDistribution(3, rng)});
      }
      for (const SurrogateVariant& v : variants) {
        SurrogateWeights w = SurrogateWeights::Initialize(v, 5, 4, 6, rng);
        while (KinkDistance(w, batch) < 1e-3) {
          w = SurrogateWeights::Initialize(v, 5, 4, 6, rng);
        }
        const double err = MaxGradientError(w, head, batch);
        if (err >= 1e-5) return v.Name() + " gradient error " + Fmt(err);
      }
    }
    return std::string();
  }));

  results.push_back(Check("linear_reduction", []() -> std::string {
    Rng rng(5);
    const int n = 8;
    const int d = 4;
    FrozenHead head{Eigen::MatrixXd::Random(3, d), Eigen::VectorXd::Random(3)};
    SurrogateWeights nl = SurrogateWeights::Initialize(
        SurrogateVariant::Nonlinear(Activation::kIdentity), n, d, d, rng);
    nl.w2 = Eigen::MatrixXd::Identity(d, d);
    nl.b2 = Eigen::VectorXd::Zero(d);
    SurrogateWeights lin;
    lin.w1 = nl.w1;
    lin.b1 = nl.b1;
    for (const Coalition& s : EnumerateCoalitions(n)) {
      const double diff = (Forward(nl, head, s).dist.probs -
                           Forward(lin, head, s).dist.probs).cwiseAbs().maxCoeff();
      if (diff > 1e-12) return "mismatch at " + s.ToText();
    }
    return std::string();
  }));

  results.push_back(Check("auc_cases", []() -> std::string {
    const std::vector<double> x = {0.0, 0.5, 1.0};
    if (std::abs(Auc(x, std::vector<double>{0.1, 0.4, 0.9}) - 0.45) > 1e-12) return "three-point case";
    if (Auc(x, std::vector<double>{0.3, 0.3, 0.3}) != 0.3) return "constant curve";
    if (Auc(x, std::vector<double>{0.0, 0.5, 1.0}) != 0.5) return "ramp";
    return std::string();
  }));

  results.push_back(Check("serialization_round_trip", []() -> std::string {
    SyntheticOracleSpec spec;
    spec.n_concepts = 6;
    spec.feature_dim = 5;
    spec.n_classes = 4;
    const OracleCase c = SynthCase(spec, 3);
    if (!(CaseFromJson(Json::parse(DumpCanonical(CaseToJson(c)))) == c)) return "case file";
    TrainConfig cfg;
    cfg.epochs = 1;
    const TrainedSurrogate t = Train(c, SurrogateVariant::Nonlinear(Activation::kTanh), cfg);
    if (!(SurrogateFromJson(Json::parse(DumpCanonical(SurrogateToJson(t.weights, cfg)))) ==
          t.weights)) {
      return "surrogate file";
    }
    return std::string();
  }));

  for (const auto& path : inputs.surrogate_files) {
    results.push_back(Check("surrogate_file_valid:" + path.string(), [&]() -> std::string {
      LoadSurrogate(path).Validate();
      return std::string();
    }));
  }
  for (const auto& path : inputs.case_files) {
    results.push_back(Check("case_file_valid:" + path.string(), [&]() -> std::string {
      LoadCase(path).Validate();
      return std::string();
    }));
  }
  return results;
}

}  // namespace eeac
