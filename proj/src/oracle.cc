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

#include "eeac/oracle.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "eeac/errors.h"

namespace eeac {
namespace {

Eigen::MatrixXd Gaussian(Eigen::Index rows, Eigen::Index cols, double stddev,
                         Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
  }
  return m;
}

std::string EntryLabel(const Coalition& s) { return "entry '" + s.ToText() + "'"; }

}  // namespace

std::string_view OracleKindName(OracleKind kind) {
  switch (kind) {
    case OracleKind::kTable:
      return "table";
    case OracleKind::kPairs:
      return "pairs";
    case OracleKind::kSynthetic:
      return "synthetic";
  }
  return "table";
}

OracleKind ParseOracleKind(std::string_view name) {
  if (name == "table") return OracleKind::kTable;
  if (name == "pairs") return OracleKind::kPairs;
  if (name == "synthetic") return OracleKind::kSynthetic;
  throw SchemaError("unknown oracle_kind '" + std::string(name) + "'");
}

void SyntheticOracleSpec::Validate() const {
  if (n_concepts < 1 || n_concepts > kMaxConcepts) {
    throw std::invalid_argument("synthetic spec: n_concepts must be in [1, 64]");
  }
  if (n_classes < 2) {
    throw std::invalid_argument("synthetic spec: n_classes must be >= 2");
  }
  if (feature_dim < 1) {
    throw std::invalid_argument("synthetic spec: feature_dim must be >= 1");
  }
  if (hidden_width < 0) {
    throw std::invalid_argument("synthetic spec: hidden_width must be >= 0");
  }
  if (!(nonlinearity >= 0.0) || !std::isfinite(nonlinearity)) {
    throw std::invalid_argument("synthetic spec: nonlinearity must be >= 0");
  }
  for (double scale : {input_scale, feature_scale, head_scale}) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw std::invalid_argument("synthetic spec: scales must be positive");
    }
  }
}

int ArgMax(const ClassDistribution& d) {
  int best = 0;
  for (int c = 1; c < d.n_classes(); ++c) {
    if (d.probs[c] > d.probs[best]) best = c;
  }
  return best;
}

void OracleCase::Validate() const {
  if (case_id.empty()) throw SchemaError("case_id: must be non-empty");
  if (n_concepts < 1 || n_concepts > kMaxConcepts) {
    throw SchemaError("n_concepts: must be in [1, 64], got " +
                      std::to_string(n_concepts));
  }
  if (n_classes < 1) throw SchemaError("n_classes: must be >= 1");
  if (feature_dim < 1) throw SchemaError("feature_dim: must be >= 1");
  if (head.weight.rows() != n_classes || head.weight.cols() != feature_dim) {
    throw SchemaError("head.weight: expected " + std::to_string(n_classes) +
                      "x" + std::to_string(feature_dim));
  }
  if (head.bias.size() != n_classes) {
    throw SchemaError("head.bias: expected " + std::to_string(n_classes) +
                      " entries");
  }
  if (!head.weight.allFinite() || !head.bias.allFinite()) {
    throw SchemaError("head: non-finite weights");
  }
  if (concepts.n != n_concepts) {
    throw SchemaError("concepts: count does not match n_concepts");
  }
  concepts.Validate();
  if (kind == OracleKind::kTable) {
    if (n_concepts > kMaxTableConcepts) {
      throw SchemaError("entries: table kind is limited to n <= " +
                        std::to_string(kMaxTableConcepts));
    }
    if (entries.size() != (std::size_t{1} << n_concepts)) {
      throw SchemaError("entries: table kind needs " +
                        std::to_string(std::size_t{1} << n_concepts) +
                        " entries, found " + std::to_string(entries.size()));
    }
  }
  for (const auto& [coalition, dist] : entries) {
    if (coalition.n() != n_concepts) {
      throw SchemaError(EntryLabel(coalition) + ": wrong coalition width");
    }
    if (dist.n_classes() != n_classes) {
      throw SchemaError(EntryLabel(coalition) + ": expected " +
                        std::to_string(n_classes) + " probabilities");
    }
    dist.Validate(EntryLabel(coalition));
  }
  const auto full = entries.find(Coalition::Full(n_concepts));
  if (full == entries.end()) {
    throw SchemaError("entries: full coalition is missing");
  }
  if (predicted_class < 0 || predicted_class >= n_classes ||
      predicted_class != ArgMax(full->second)) {
    throw SchemaError("predicted_class: " + std::to_string(predicted_class) +
                      " is not the argmax of the full-coalition entry");
  }
  if (kind == OracleKind::kSynthetic && !generator) {
    throw SchemaError("generator: required for synthetic kind");
  }
  if (generator) {
    const SurrogateWeights& net = generator->network;
    try {
      net.Validate();
    } catch (const std::exception& e) {
      throw SchemaError(std::string("generator.network: ") + e.what());
    }
    if (net.n_concepts() != n_concepts || net.feature_dim() != feature_dim) {
      throw SchemaError("generator.network: dimensions do not match the case");
    }
  }
}

ClassDistribution Query(const OracleCase& c, const Coalition& s) {
  if (s.n() != c.n_concepts) {
    throw std::invalid_argument("coalition width " + std::to_string(s.n()) +
                                " does not match case n_concepts " +
                                std::to_string(c.n_concepts));
  }
  if (c.kind == OracleKind::kSynthetic) {
    return ForwardUnchecked(c.generator->network, c.head, s).dist;
  }
  const auto it = c.entries.find(s);
  if (it == c.entries.end()) {
    if (c.kind == OracleKind::kPairs) throw MissingEntryError(c.case_id, {s});
    throw SchemaError("table case '" + c.case_id + "' lacks " + EntryLabel(s));
  }
  return it->second;
}

double ScalarUtility(const OracleCase& c, const Coalition& s) {
  return Query(c, s).probs[c.predicted_class];
}

OracleCase SynthCase(const SyntheticOracleSpec& spec, std::uint64_t seed,
                     std::string case_id) {
  spec.Validate();
  const int n = spec.n_concepts;
  const int d = spec.feature_dim;
  const int m = spec.EffectiveHiddenWidth();
  const double g = spec.nonlinearity;
  Rng rng(DeriveSeed(seed, 0x5EED));

  const Eigen::MatrixXd w1 =
      Gaussian(m, n, spec.input_scale / std::sqrt(double(n)), rng);
  const Eigen::VectorXd b1 =
      Gaussian(m, 1, spec.input_scale / std::sqrt(double(n)), rng).col(0);
  const Eigen::MatrixXd w2 =
      Gaussian(d, m, spec.feature_scale / std::sqrt(double(m)), rng);
  const Eigen::VectorXd b2 =
      Gaussian(d, 1, spec.feature_scale / std::sqrt(double(m)), rng).col(0);

  OracleCase c;
  c.case_id = case_id.empty() ? "synth-" + std::to_string(seed) : case_id;
  c.n_concepts = n;
  c.n_classes = spec.n_classes;
  c.feature_dim = d;
  c.head.weight =
      Gaussian(spec.n_classes, d, spec.head_scale / std::sqrt(double(d)), rng);
  c.head.bias = Gaussian(spec.n_classes, 1, 0.1, rng).col(0);
  c.concepts.n = n;

  SurrogateWeights net;
  if (g == 0.0) {
    net.variant = SurrogateVariant::Linear();
    net.w1 = w2 * w1;
    net.b1 = w2 * b1 + b2;
  } else {
    // tanh(g x) / min(g, 1): tends to x as g -> 0, unit amplitude for g >= 1.
    net.variant = SurrogateVariant::Nonlinear(Activation::kTanh);
    net.w1 = g * w1;
    net.b1 = g * b1;
    net.w2 = w2 / std::min(g, 1.0);
    net.b2 = b2;
  }

  const Coalition full = Coalition::Full(n);
  if (n <= kMaxTableConcepts) {
    c.kind = OracleKind::kTable;
    for (const Coalition& s : EnumerateCoalitions(n)) {
      c.entries.emplace(s, ForwardUnchecked(net, c.head, s).dist);
    }
  } else {
    c.kind = OracleKind::kSynthetic;
    c.entries.emplace(full, ForwardUnchecked(net, c.head, full).dist);
  }
  // Kept for every kind: documents the ground truth and lets table entries be
  // re-derived independently.
  c.generator = SyntheticGenerator{spec, seed, std::move(net)};
  c.predicted_class = ArgMax(c.entries.at(full));
  c.Validate();
  return c;
}

void MergeEntries(OracleCase& c,
                  const std::map<Coalition, ClassDistribution>& response) {
  if (c.kind != OracleKind::kPairs) {
    throw SchemaError("responses can only be merged into a pairs-kind case");
  }
  for (const auto& [coalition, dist] : response) {
    if (coalition.n() != c.n_concepts || dist.n_classes() != c.n_classes) {
      throw SchemaError(EntryLabel(coalition) +
                        ": response shape does not match the case");
    }
    dist.Validate(EntryLabel(coalition));
    const auto [it, inserted] = c.entries.emplace(coalition, dist);
    if (!inserted && !(it->second == dist)) {
      throw SchemaError(EntryLabel(coalition) +
                        ": response conflicts with the stored entry");
    }
  }
}

GameView::GameView(int n, Utility utility, std::string backing)
    : n_(n), utility_(std::move(utility)), backing_(std::move(backing)) {
  if (n < 0 || n > kMaxConcepts) throw std::invalid_argument("bad game width");
}

GameView OracleGame(const OracleCase& c) {
  const OracleCase* ptr = &c;
  return GameView(
      c.n_concepts, [ptr](const Coalition& s) { return ScalarUtility(*ptr, s); },
      "oracle");
}

GameView SurrogateGame(const OracleCase& c, const SurrogateWeights& w) {
  if (w.n_concepts() != c.n_concepts || w.feature_dim() != c.feature_dim) {
    throw std::invalid_argument("surrogate does not match case '" + c.case_id +
                                "' dimensions");
  }
  w.Validate();
  auto model = std::make_shared<const std::pair<SurrogateWeights, FrozenHead>>(
      w, c.head);
  const int cls = c.predicted_class;
  return GameView(
      c.n_concepts,
      [model, cls](const Coalition& s) {
        return ForwardUnchecked(model->first, model->second, s).dist.probs[cls];
      },
      "surrogate");
}

GameView TableGame(int n, std::vector<double> values, std::string backing) {
  if (n > kMaxExactConcepts || values.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("table game needs 2^n values with n <= 20");
  }
  auto table = std::make_shared<const std::vector<double>>(std::move(values));
  return GameView(
      n, [table](const Coalition& s) { return (*table)[s.bits()]; },
      std::move(backing));
}

GameView Tabulate(const GameView& game) {
  if (game.n() > kMaxExactConcepts) {
    throw std::invalid_argument("cannot tabulate a game with n > 20");
  }
  const std::uint64_t total = std::uint64_t{1} << game.n();
  std::vector<double> values(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    values[bits] = game(Coalition(bits, game.n()));
  }
  return TableGame(game.n(), std::move(values), game.backing());
}

}  // namespace eeac
