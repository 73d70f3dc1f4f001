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

#include "eeac/shapley.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "eeac/errors.h"
#include "eeac/games.h"
#include "eeac/oracle.h"

namespace eeac {
namespace {

// u(0)=0, u({c1})=1, u({c2})=2, u({c1,c2})=4, indexed by bits.
GameView TwoConceptGame() { return TableGame(2, {0.0, 1.0, 2.0, 4.0}); }

// Shapley values by averaging marginal contributions over all n! orders.
std::vector<double> PermutationShapley(const GameView& game) {
  const int n = game.n();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<long double> sum(static_cast<std::size_t>(n), 0.0L);
  long double count = 0;
  do {
    Coalition s = Coalition::Empty(n);
    for (int i : order) {
      const Coalition t = WithConcept(s, i);
      sum[static_cast<std::size_t>(i)] += game(t) - game(s);
      s = t;
    }
    count += 1;
  } while (std::next_permutation(order.begin(), order.end()));
  std::vector<double> out;
  for (long double v : sum) out.push_back(double(v / count));
  return out;
}

TEST(MarginalTest, TwoConceptTable) {
  const GameView g = TwoConceptGame();
  EXPECT_EQ(MarginalContribution(g, 0, Coalition::Empty(2)), 1.0);
  EXPECT_EQ(MarginalContribution(g, 0, CoalitionFromText("01", 2)), 2.0);
  EXPECT_THROW(MarginalContribution(g, 0, CoalitionFromText("10", 2)),
               std::invalid_argument);
}

TEST(MarginalTest, DummyAndAdditive) {
  const GameView additive = AdditiveGame({0.5, -0.25, 0.125, 2.0});
  const GameView dummy = TableGame(4, RandomGameTable(4, 3, 2));
  for (const Coalition& s : EnumerateCoalitions(4)) {
    for (int i = 0; i < 4; ++i) {
      if (s.Contains(i)) continue;
      const double w[] = {0.5, -0.25, 0.125, 2.0};
      EXPECT_EQ(MarginalContribution(additive, i, s), w[i]);
      if (i == 2) EXPECT_EQ(MarginalContribution(dummy, i, s), 0.0);
    }
  }
}

TEST(ExactShapleyTest, TwoConceptGame) {
  const ShapleyEstimate est = ExactShapley(TwoConceptGame());
  EXPECT_EQ(est.values, (std::vector<double>{1.5, 2.5}));
  EXPECT_EQ(est.std_errors, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(est.method, ShapleyMethod::kExact);
  EXPECT_FALSE(est.samples_per_concept.has_value());
  EXPECT_FALSE(est.seed.has_value());
}

TEST(ExactShapleyTest, AdditiveGameIsExact) {
  // Dyadic weights keep every partial sum exact in binary floating point.
  const std::vector<double> w = {0.5, -0.25, 0.125, 2.0, -1.0, 0.0625};
  EXPECT_EQ(ExactShapley(AdditiveGame(w)).values, w);
}

TEST(ExactShapleyTest, MatchesPermutationOracle) {
  for (int n = 1; n <= 7; ++n) {
    const GameView g = TableGame(n, RandomGameTable(n, 100 + static_cast<std::uint64_t>(n)));
    const std::vector<double> ref = PermutationShapley(g);
    const ShapleyEstimate est = ExactShapley(g);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(est.values[static_cast<std::size_t>(i)], ref[static_cast<std::size_t>(i)],
                  1e-13);
    }
  }
}

TEST(ExactShapleyTest, Axioms) {
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 7;
    const int dummy = t % n;
    const std::pair<int, int> sym{(dummy + 1) % n, (dummy + 2) % n};
    const bool has_pair = n > 2;
    const GameView g = TableGame(
        n, RandomGameTable(n, DeriveSeed(4, static_cast<std::uint64_t>(t)), dummy,
                           has_pair ? std::optional(sym) : std::nullopt));
    const ShapleyEstimate est = ExactShapley(g);
    const double sum = std::accumulate(est.values.begin(), est.values.end(), 0.0);
    EXPECT_LT(std::abs(sum - (g(Coalition::Full(n)) - g(Coalition::Empty(n)))), 1e-10);
    EXPECT_EQ(est.values[static_cast<std::size_t>(dummy)], 0.0);
    if (has_pair) {
      EXPECT_LE(std::abs(est.values[static_cast<std::size_t>(sym.first)] -
                         est.values[static_cast<std::size_t>(sym.second)]),
                1e-12);
    }
  }
}

TEST(ExactShapleyTest, Linearity) {
  const std::vector<double> table = RandomGameTable(6, 8);
  std::vector<double> scaled = table;
  for (double& v : scaled) v = 3.0 * v + 0.7;
  const ShapleyEstimate a = ExactShapley(TableGame(6, table));
  const ShapleyEstimate b = ExactShapley(TableGame(6, scaled));
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(b.values[static_cast<std::size_t>(i)],
                3.0 * a.values[static_cast<std::size_t>(i)], 1e-12);
  }
}

TEST(ExactShapleyTest, PermutationEquivariance) {
  const int n = 6;
  const std::vector<double> table = RandomGameTable(n, 12);
  const int perm[] = {3, 0, 5, 1, 4, 2};  // concept i is relabeled perm[i]
  std::vector<double> relabeled(table.size());
  for (std::uint64_t bits = 0; bits < table.size(); ++bits) {
    std::uint64_t moved = 0;
    for (int i = 0; i < n; ++i) {
      if (bits >> i & 1) moved |= std::uint64_t{1} << perm[i];
    }
    relabeled[moved] = table[bits];
  }
  const ShapleyEstimate a = ExactShapley(TableGame(n, table));
  const ShapleyEstimate b = ExactShapley(TableGame(n, relabeled));
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(b.values[static_cast<std::size_t>(perm[i])],
                a.values[static_cast<std::size_t>(i)], 1e-14);
  }
}

TEST(ExactShapleyTest, EvaluatesEachCoalitionOnce) {
  int calls = 0;
  const GameView g(5, [&](const Coalition& s) {
    ++calls;
    return double(s.Count());
  }, "counting");
  ExactShapley(g);
  EXPECT_EQ(calls, 32);
}

TEST(ExactShapleyTest, GuardAboveTwenty) {
  const GameView g(21, [](const Coalition&) { return 0.0; }, "zero");
  EXPECT_THROW(ExactShapley(g), std::invalid_argument);
}

TEST(MonteCarloTest, ZeroVarianceGames) {
  const std::vector<double> w = {0.5, -0.25, 0.125, 2.0};
  const ShapleyEstimate est = MonteCarloShapley(AdditiveGame(w), 50, 3);
  EXPECT_EQ(est.values, w);
  EXPECT_EQ(est.std_errors, std::vector<double>(4, 0.0));
  EXPECT_EQ(est.method, ShapleyMethod::kMonteCarlo);
  EXPECT_EQ(est.samples_per_concept, 50);
  EXPECT_EQ(est.seed, 3u);

  const ShapleyEstimate dummy = MonteCarloShapley(TableGame(5, RandomGameTable(5, 1, 3)), 100, 0);
  EXPECT_EQ(dummy.values[3], 0.0);
  EXPECT_EQ(dummy.std_errors[3], 0.0);
}

TEST(MonteCarloTest, ConvergesToExact) {
  const GameView g = TableGame(10, RandomGameTable(10, 0));
  const ShapleyEstimate exact = ExactShapley(g);
  const ShapleyEstimate mc = MonteCarloShapley(g, 20000, 0);
  for (int i = 0; i < 10; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double err = std::abs(mc.values[k] - exact.values[k]);
    EXPECT_LE(err, 0.01);
    EXPECT_LE(err, 4 * mc.std_errors[k]);
    EXPECT_GT(mc.std_errors[k], 0.0);
  }
}

TEST(MonteCarloTest, SamplingReproducesShapleyWeights) {
  // With u(S) = [0 in S and S \ {0} == T], concept 0's marginal is 1 exactly
  // when the sampled S equals T, so its Shapley value is the kernel weight
  // |T|! (n - |T| - 1)! / n! and the estimate is the empirical frequency of T.
  const int n = 6;
  const int k = 60000;
  for (std::uint64_t target : {0b000000u, 0b000110u, 0b101010u, 0b111110u}) {
    const Coalition t(target, n);
    const GameView g(n, [&](const Coalition& s) {
      return s.Contains(0) && WithoutConcept(s, 0) == t ? 1.0 : 0.0;
    }, "indicator");
    const int size = t.Count();
    double weight = 1.0 / n;
    for (int j = 1; j <= size; ++j) weight *= double(j) / (n - j);
    EXPECT_NEAR(ExactShapley(g).values[0], weight, 1e-15);
    const ShapleyEstimate mc = MonteCarloShapley(g, k, 21);
    EXPECT_NEAR(mc.values[0], weight, 4 * mc.std_errors[0] + 1e-12) << t.ToText();
  }
  // Sizes: u(S) = [0 in S and |S| - 1 == s] has value 1/n for every s.
  for (int size = 0; size < n; ++size) {
    const GameView g(n, [&](const Coalition& s) {
      return s.Contains(0) && s.Count() - 1 == size ? 1.0 : 0.0;
    }, "size");
    const ShapleyEstimate mc = MonteCarloShapley(g, k, 22);
    EXPECT_NEAR(mc.values[0], 1.0 / n, 0.01) << size;
  }
}

TEST(MonteCarloTest, DeterministicAndJobIndependent) {
  const GameView g = TableGame(8, RandomGameTable(8, 5));
  const ShapleyEstimate a = MonteCarloShapley(g, 500, 42, 1);
  const ShapleyEstimate b = MonteCarloShapley(g, 500, 42, 1);
  const ShapleyEstimate c = MonteCarloShapley(g, 500, 42, 4);
  EXPECT_TRUE(a == b);
  EXPECT_TRUE(a == c);
  const ShapleyEstimate d = MonteCarloShapley(g, 500, 43, 1);
  EXPECT_FALSE(a == d);
}

TEST(MonteCarloTest, RejectsTooFewSamples) {
  EXPECT_THROW(MonteCarloShapley(AdditiveGame({1.0}), 1, 0), std::invalid_argument);
}

TEST(MonteCarloTest, MissingEntriesAreCollected) {
  OracleCase c;
  SyntheticOracleSpec spec;
  spec.n_concepts = 4;
  c = SynthCase(spec, 1, "sparse");
  c.kind = OracleKind::kPairs;
  c.generator.reset();
  std::erase_if(c.entries, [](const auto& e) { return e.first.Count() == 2; });
  try {
    MonteCarloShapley(OracleGame(c), 200, 0);
    FAIL();
  } catch (const MissingEntryError& e) {
    EXPECT_EQ(e.case_id(), "sparse");
    EXPECT_EQ(e.missing().size(), 6u);
    EXPECT_TRUE(std::is_sorted(e.missing().begin(), e.missing().end()));
  }
}

}  // namespace
}  // namespace eeac
