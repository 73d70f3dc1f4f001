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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "eeac/errors.h"
#include "eeac/records.h"

namespace eeac {
namespace {

SyntheticOracleSpec SmallSpec(int n) {
  SyntheticOracleSpec spec;
  spec.n_concepts = n;
  spec.n_classes = 4;
  spec.feature_dim = 3;
  return spec;
}

// Synthetic-kind case whose generator is all zeros, so logits equal the head
// bias for every coalition.
OracleCase ConstantLogitCase(const Eigen::VectorXd& logits) {
  SyntheticOracleSpec spec = SmallSpec(20);
  spec.n_classes = static_cast<int>(logits.size());
  OracleCase c = SynthCase(spec, 3);
  SurrogateWeights& net = c.generator->network;
  net.w1.setZero();
  net.b1.setZero();
  net.w2.setZero();
  net.b2.setZero();
  c.head.weight.setRandom();
  c.head.bias = logits;
  c.entries.clear();
  c.entries.emplace(Coalition::Full(20), Softmax(logits));
  c.predicted_class = ArgMax(Softmax(logits));
  c.Validate();
  return c;
}

TEST(OracleTest, ZeroGeneratorIsUniform) {
  const OracleCase c = ConstantLogitCase(Eigen::VectorXd::Zero(5));
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const ClassDistribution d = Query(c, SampleCoalition(rng, 20, t));
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(d.probs(k), 0.2, 1e-15);
    EXPECT_NEAR(ScalarUtility(c, SampleCoalition(rng, 20, t)), 0.2, 1e-15);
  }
}

TEST(OracleTest, LogitsOneTwoThree) {
  Eigen::VectorXd logits(3);
  logits << 1, 2, 3;
  const OracleCase c = ConstantLogitCase(logits);
  const ClassDistribution d = Query(c, CoalitionFromText("10110000000000000001", 20));
  const long double z = std::exp(1.0L) + std::exp(2.0L) + std::exp(3.0L);
  EXPECT_NEAR(d.probs(0), double(std::exp(1.0L) / z), 1e-15);
  EXPECT_NEAR(d.probs(1), double(std::exp(2.0L) / z), 1e-15);
  EXPECT_NEAR(d.probs(2), double(std::exp(3.0L) / z), 1e-15);
  EXPECT_NEAR(d.probs(2), 0.6652, 5e-5);
}

TEST(OracleTest, TableFullCoalitionIsStoredAndPredicted) {
  const OracleCase c = SynthCase(SmallSpec(5), 9);
  ASSERT_EQ(c.kind, OracleKind::kTable);
  const Coalition full = Coalition::Full(5);
  const ClassDistribution d = Query(c, full);
  EXPECT_TRUE(d == c.entries.at(full));
  EXPECT_EQ(ArgMax(d), c.predicted_class);
  EXPECT_EQ(ScalarUtility(c, full), d.probs.maxCoeff());
}

TEST(OracleTest, TwoConceptUtilitiesByBruteForce) {
  const OracleCase c = SynthCase(SmallSpec(2), 21);
  ASSERT_TRUE(c.generator.has_value());
  const SurrogateWeights& net = c.generator->network;
  for (int bits = 0; bits < 4; ++bits) {
    const Coalition s(static_cast<std::uint64_t>(bits), 2);
    // features = W2 tanh(W1 b + b1) + b2, logits = head(features)
    Eigen::VectorXd pre = net.b1;
    for (int i = 0; i < 2; ++i) {
      if (bits >> i & 1) pre += net.w1.col(i);
    }
    const Eigen::VectorXd features = net.w2 * pre.array().tanh().matrix() + net.b2;
    const Eigen::VectorXd logits = c.head.weight * features + c.head.bias;
    const Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
    EXPECT_NEAR(ScalarUtility(c, s), (e / e.sum())(c.predicted_class), 1e-14)
        << s.ToText();
  }
}

TEST(OracleTest, SyntheticKindAboveTableLimit) {
  const OracleCase wide = SynthCase(SmallSpec(17), 2);
  EXPECT_EQ(wide.kind, OracleKind::kSynthetic);
  EXPECT_EQ(wide.entries.size(), 1u);
  const OracleCase twelve = SynthCase(SyntheticOracleSpec{}, 7);
  EXPECT_EQ(twelve.kind, OracleKind::kTable);
  EXPECT_EQ(twelve.entries.size(), 4096u);
}

TEST(OracleTest, SynthIsDeterministic) {
  const OracleCase a = SynthCase(SmallSpec(6), 5, "x");
  const OracleCase b = SynthCase(SmallSpec(6), 5, "x");
  EXPECT_TRUE(a == b);
  EXPECT_EQ(DumpCanonical(CaseToJson(a)), DumpCanonical(CaseToJson(b)));
  const OracleCase other = SynthCase(SmallSpec(6), 6, "x");
  EXPECT_FALSE(a == other);
}

TEST(OracleTest, ZeroNonlinearityIsAffine) {
  SyntheticOracleSpec spec = SmallSpec(4);
  spec.nonlinearity = 0.0;
  const OracleCase c = SynthCase(spec, 1);
  EXPECT_EQ(c.generator->network.variant, SurrogateVariant::Linear());
  // Affine features: f(a) + f(b) = f(a|b) + f(empty) for disjoint a, b.
  const SurrogateWeights& net = c.generator->network;
  auto features = [&](int bits) {
    Eigen::VectorXd f = net.b1;
    for (int i = 0; i < 4; ++i) {
      if (bits >> i & 1) f += net.w1.col(i);
    }
    return f;
  };
  EXPECT_LT((features(0b0011) + features(0b1100) - features(0b1111) - features(0))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(OracleTest, InvalidSpecRejected) {
  SyntheticOracleSpec spec = SmallSpec(0);
  EXPECT_ANY_THROW(SynthCase(spec, 0));
  spec = SmallSpec(3);
  spec.n_classes = 0;
  EXPECT_ANY_THROW(SynthCase(spec, 0));
  spec = SmallSpec(3);
  spec.nonlinearity = -1;
  EXPECT_ANY_THROW(SynthCase(spec, 0));
}

OracleCase PairsCase() {
  OracleCase c = SynthCase(SmallSpec(3), 4, "pairs");
  c.kind = OracleKind::kPairs;
  c.generator.reset();
  std::erase_if(c.entries, [](const auto& e) {
    return e.first.Count() == 1 || e.first.bits() == 0b011;
  });
  c.Validate();
  return c;
}

TEST(OracleTest, PairsMissingEntry) {
  const OracleCase c = PairsCase();
  EXPECT_NO_THROW(Query(c, Coalition::Full(3)));
  try {
    Query(c, CoalitionFromText("010", 3));
    FAIL();
  } catch (const MissingEntryError& e) {
    EXPECT_EQ(e.case_id(), "pairs");
    ASSERT_EQ(e.missing().size(), 1u);
    EXPECT_EQ(e.missing()[0].ToText(), "010");
  }
}

TEST(OracleTest, MergeEntries) {
  OracleCase c = PairsCase();
  const OracleCase full = SynthCase(SmallSpec(3), 4, "pairs");
  std::map<Coalition, ClassDistribution> response;
  response.emplace(CoalitionFromText("010", 3), full.entries.at(CoalitionFromText("010", 3)));
  response.emplace(Coalition::Full(3), full.entries.at(Coalition::Full(3)));
  MergeEntries(c, response);
  EXPECT_TRUE(Query(c, CoalitionFromText("010", 3)) ==
              full.entries.at(CoalitionFromText("010", 3)));

  std::map<Coalition, ClassDistribution> conflict;
  conflict.emplace(CoalitionFromText("010", 3),
                   full.entries.at(CoalitionFromText("100", 3)));
  EXPECT_THROW(MergeEntries(c, conflict), SchemaError);

  OracleCase table = SynthCase(SmallSpec(3), 4);
  EXPECT_THROW(MergeEntries(table, response), SchemaError);
}

TEST(OracleTest, ValidateRejectsBrokenCases) {
  OracleCase c = SynthCase(SmallSpec(3), 4);
  c.predicted_class = (c.predicted_class + 1) % 4;
  EXPECT_THROW(c.Validate(), SchemaError);

  c = SynthCase(SmallSpec(3), 4);
  c.entries.erase(CoalitionFromText("010", 3));
  EXPECT_THROW(c.Validate(), SchemaError);

  c = SynthCase(SmallSpec(3), 4);
  c.entries.begin()->second.probs *= 0.93;
  try {
    c.Validate();
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("000"), std::string::npos) << e.what();
  }
}

TEST(OracleTest, ArgMaxTiesPickLowestIndex) {
  ClassDistribution d{Eigen::VectorXd(4)};
  d.probs << 0.1, 0.4, 0.4, 0.1;
  EXPECT_EQ(ArgMax(d), 1);
}

TEST(GameViewTest, OracleAndSurrogateBacking) {
  const OracleCase c = SynthCase(SmallSpec(4), 8);
  const GameView oracle = OracleGame(c);
  EXPECT_EQ(oracle.backing(), "oracle");
  for (const Coalition& s : EnumerateCoalitions(4)) {
    EXPECT_EQ(oracle(s), ScalarUtility(c, s));
  }
  const GameView surrogate = SurrogateGame(c, c.generator->network);
  EXPECT_EQ(surrogate.backing(), "surrogate");
  for (const Coalition& s : EnumerateCoalitions(4)) {
    EXPECT_EQ(surrogate(s), oracle(s));
  }
  const GameView table = Tabulate(surrogate);
  for (const Coalition& s : EnumerateCoalitions(4)) EXPECT_EQ(table(s), oracle(s));
  EXPECT_EQ(table.backing(), "surrogate");
}

}  // namespace
}  // namespace eeac
