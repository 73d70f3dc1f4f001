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

#ifndef EEAC_ORACLE_H_
#define EEAC_ORACLE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eeac/coalition.h"
#include "eeac/surrogate.h"

namespace eeac {

enum class OracleKind { kTable, kPairs, kSynthetic };

std::string_view OracleKindName(OracleKind kind);
OracleKind ParseOracleKind(std::string_view name);

// Table-kind cases store every coalition; wider cases fall back to pairs.
inline constexpr int kMaxTableConcepts = 16;

// Parameters of the ground-truth generator behind a synthetic case:
//   features(b) = W2 * tanh(g * (W1 * b + b1)) / min(g, 1) + b2
//   logits      = head(features)
// with g = nonlinearity. g = 0 degenerates to an affine map of b.
struct SyntheticOracleSpec {
  int n_concepts = 12;
  int n_classes = 10;
  int feature_dim = 16;
  int hidden_width = 0;         // 0 means feature_dim
  double nonlinearity = 1.0;    // g
  double input_scale = 1.0;     // std of W1 entries times sqrt(n_concepts)
  double feature_scale = 3.0;   // std of W2 entries times sqrt(hidden_width)
  double head_scale = 10.0;     // std of head entries times sqrt(feature_dim)

  int EffectiveHiddenWidth() const {
    return hidden_width > 0 ? hidden_width : feature_dim;
  }
  void Validate() const;

  friend bool operator==(const SyntheticOracleSpec&,
                         const SyntheticOracleSpec&) = default;
};

struct SyntheticGenerator {
  SyntheticOracleSpec spec;
  std::uint64_t seed = 0;
  // Generator expressed in surrogate form: nonlinear tanh for g > 0, linear
  // for g = 0. Either way the case's oracle is head(h(b)) for this h.
  SurrogateWeights network;

  friend bool operator==(const SyntheticGenerator&,
                         const SyntheticGenerator&) = default;
};

// One explainable input: the frozen head, the predicted class on the full
// coalition, and a coalition -> class distribution oracle.
struct OracleCase {
  std::string case_id;
  int n_concepts = 0;
  int n_classes = 0;
  int feature_dim = 0;
  int predicted_class = 0;
  FrozenHead head;
  OracleKind kind = OracleKind::kTable;
  std::map<Coalition, ClassDistribution> entries;
  std::optional<SyntheticGenerator> generator;  // required for synthetic kind
  ConceptSet concepts;

  // Structural invariants; throws SchemaError naming the offending field.
  void Validate() const;

  friend bool operator==(const OracleCase&, const OracleCase&) = default;
};

ClassDistribution Query(const OracleCase& c, const Coalition& s);

// Probability the oracle assigns to the full-coalition predicted class.
double ScalarUtility(const OracleCase& c, const Coalition& s);

// Index of the largest probability; ties resolve to the lowest index.
int ArgMax(const ClassDistribution& d);

// Deterministic per (spec, seed). Emits table kind when n <= 16 and synthetic
// kind otherwise. An empty id becomes "synth-<seed>".
OracleCase SynthCase(const SyntheticOracleSpec& spec, std::uint64_t seed,
                     std::string case_id = "");

// Adds response entries to a pairs-kind case. Entries already present must
// agree exactly; conflicting values throw SchemaError.
void MergeEntries(OracleCase& c,
                  const std::map<Coalition, ClassDistribution>& response);

// Scalar game u over coalitions of a fixed width.
class GameView {
 public:
  using Utility = std::function<double(const Coalition&)>;

  GameView(int n, Utility utility, std::string backing);

  int n() const { return n_; }
  const std::string& backing() const { return backing_; }
  double operator()(const Coalition& s) const { return utility_(s); }

 private:
  int n_;
  Utility utility_;
  std::string backing_;
};

// u(S) = oracle probability of the case's predicted class.
GameView OracleGame(const OracleCase& c);

// u(S) = surrogate probability of the case's predicted class.
GameView SurrogateGame(const OracleCase& c, const SurrogateWeights& w);

// Game over an explicit table indexed by coalition bits (size 2^n).
GameView TableGame(int n, std::vector<double> values,
                   std::string backing = "table");

// Evaluates every coalition once and returns a table-backed view; n <= 20.
GameView Tabulate(const GameView& game);

}  // namespace eeac

#endif  // EEAC_ORACLE_H_
