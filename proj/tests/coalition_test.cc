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

#include "eeac/coalition.h"

#include <map>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

namespace eeac {
namespace {

TEST(CoalitionTest, FromTextSetsLeftmostAsConceptZero) {
  const Coalition s = CoalitionFromText("101", 3);
  EXPECT_TRUE(s.Contains(0));
  EXPECT_FALSE(s.Contains(1));
  EXPECT_TRUE(s.Contains(2));
  EXPECT_EQ(s.bits(), 0b101u);
  EXPECT_EQ(CoalitionFromText("100", 3).bits(), 1u);
  EXPECT_EQ(CoalitionFromText("000", 3), Coalition::Empty(3));
}

TEST(CoalitionTest, FromTextRejectsBadInput) {
  EXPECT_THROW(CoalitionFromText("10a", 3), std::invalid_argument);
  EXPECT_THROW(CoalitionFromText("10", 3), std::invalid_argument);
  EXPECT_THROW(CoalitionFromText("1010", 3), std::invalid_argument);
}

TEST(CoalitionTest, WithAndWithoutConcept) {
  EXPECT_EQ(WithConcept(CoalitionFromText("010", 3), 0).ToText(), "110");
  EXPECT_EQ(WithConcept(CoalitionFromText("110", 3), 0).ToText(), "110");
  EXPECT_EQ(WithoutConcept(CoalitionFromText("110", 3), 1).ToText(), "100");
  EXPECT_THROW(WithConcept(Coalition::Empty(3), 3), std::out_of_range);
  EXPECT_THROW(WithoutConcept(Coalition::Empty(3), -1), std::out_of_range);
}

TEST(CoalitionTest, WithThenWithoutClearsOnlyThatBit) {
  for (const Coalition& s : EnumerateCoalitions(6)) {
    for (int i = 0; i < 6; ++i) {
      const Coalition t = WithoutConcept(WithConcept(s, i), i);
      EXPECT_FALSE(t.Contains(i));
      for (int j = 0; j < 6; ++j) {
        if (j != i) EXPECT_EQ(t.Contains(j), s.Contains(j));
      }
    }
  }
}

TEST(CoalitionTest, EnumerateSmall) {
  const std::vector<Coalition> two = EnumerateCoalitions(2);
  ASSERT_EQ(two.size(), 4u);
  EXPECT_EQ(two[0].ToText(), "00");
  EXPECT_EQ(two[1].ToText(), "10");
  EXPECT_EQ(two[2].ToText(), "01");
  EXPECT_EQ(two[3].ToText(), "11");

  const std::vector<Coalition> zero = EnumerateCoalitions(0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].Count(), 0);
}

TEST(CoalitionTest, EnumerateIsDistinctAndAscending) {
  for (int n = 1; n <= 12; ++n) {
    const std::vector<Coalition> all = EnumerateCoalitions(n);
    ASSERT_EQ(all.size(), std::size_t{1} << n);
    for (std::size_t k = 0; k < all.size(); ++k) EXPECT_EQ(all[k].bits(), k);
  }
}

TEST(CoalitionTest, EnumerateGuardNamesLimit) {
  try {
    EnumerateCoalitions(21);
    FAIL() << "expected a guard error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("20"), std::string::npos) << e.what();
  }
}

TEST(CoalitionTest, TextRoundTripExhaustive) {
  for (int n = 1; n <= 10; ++n) {
    for (const Coalition& s : EnumerateCoalitions(n)) {
      ASSERT_EQ(CoalitionFromText(s.ToText(), n), s);
    }
  }
}

TEST(CoalitionTest, ComplementAndFull) {
  const Coalition s = CoalitionFromText("1100101", 7);
  EXPECT_EQ(s.Complement().ToText(), "0011010");
  EXPECT_EQ(Coalition::Full(64).Count(), 64);
  EXPECT_EQ(Coalition::Full(64).Complement(), Coalition::Empty(64));
  EXPECT_THROW(Coalition(0b1000, 3), std::invalid_argument);
}

TEST(CoalitionTest, SampleDegenerateSizes) {
  Rng rng(11);
  EXPECT_EQ(SampleCoalition(rng, 5, 0, 2), Coalition::Empty(5));
  EXPECT_EQ(SampleCoalition(rng, 3, 2, 0).ToText(), "011");
  EXPECT_THROW(SampleCoalition(rng, 3, 3, 0), std::invalid_argument);
  EXPECT_THROW(SampleCoalition(rng, 3, 4), std::invalid_argument);
  EXPECT_THROW(SampleCoalition(rng, 3, -1), std::invalid_argument);
}

TEST(CoalitionTest, SampleRespectsSizeAndExclusion) {
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = trial % 9;
    const Coalition s = SampleCoalition(rng, 10, k, 4);
    EXPECT_EQ(s.Count(), k);
    EXPECT_FALSE(s.Contains(4));
  }
}

TEST(CoalitionTest, SampleFrequenciesAreUniform) {
  Rng rng(2024);
  std::map<std::uint64_t, int> counts;
  const int draws = 60000;
  for (int t = 0; t < draws; ++t) ++counts[SampleCoalition(rng, 4, 2).bits()];
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [bits, count] : counts) {
    EXPECT_NEAR(double(count) / draws, 1.0 / 6.0, 0.01) << bits;
  }
}

TEST(CoalitionTest, SampleIsDeterministicPerSeed) {
  Rng a(99), b(99);
  for (int t = 0; t < 100; ++t) {
    EXPECT_EQ(SampleCoalition(a, 20, t % 20), SampleCoalition(b, 20, t % 20));
  }
}

TEST(CoalitionTest, DeriveSeedSeparatesStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(DeriveSeed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(DeriveSeed(7, 3), DeriveSeed(7, 3));
  EXPECT_NE(DeriveSeed(7, 3), DeriveSeed(8, 3));
}

TEST(ConceptSetTest, Validate) {
  ConceptSet ok{3, {}};
  EXPECT_NO_THROW(ok.Validate());
  ConceptSet with_meta{2, {{"m0.png", 10}, {"m1.png", 5}}};
  EXPECT_NO_THROW(with_meta.Validate());
  ConceptSet short_meta{3, {{"m0.png", 10}}};
  EXPECT_ANY_THROW(short_meta.Validate());
  ConceptSet empty{0, {}};
  EXPECT_ANY_THROW(empty.Validate());
}

}  // namespace
}  // namespace eeac
