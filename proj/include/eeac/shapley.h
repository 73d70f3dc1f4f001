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

#ifndef EEAC_SHAPLEY_H_
#define EEAC_SHAPLEY_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "eeac/coalition.h"
#include "eeac/oracle.h"

namespace eeac {

enum class ShapleyMethod { kExact, kMonteCarlo };

std::string_view ShapleyMethodName(ShapleyMethod m);
ShapleyMethod ParseShapleyMethod(std::string_view name);

inline constexpr int kDefaultSamplesPerConcept = 10000;

struct ShapleyEstimate {
  std::vector<double> values;
  std::vector<double> std_errors;  // all zero for exact
  ShapleyMethod method = ShapleyMethod::kExact;
  std::optional<int> samples_per_concept;  // Monte Carlo only
  std::optional<std::uint64_t> seed;       // Monte Carlo only

  int n() const { return static_cast<int>(values.size()); }
  void Validate() const;
  friend bool operator==(const ShapleyEstimate&,
                         const ShapleyEstimate&) = default;
};

// u(S + i) - u(S); i must not be in S.
double MarginalContribution(const GameView& game, int i, const Coalition& s);

// Weighted sum over all coalitions with every utility evaluated once. n <= 20.
ShapleyEstimate ExactShapley(const GameView& game);

// For each concept, K draws of: size k ~ U{1..n}, S uniform among the
// (k-1)-subsets of the other concepts. Reports mean and sample standard error.
// Concept i uses its own stream derived from (seed, i). `jobs` > 1 spreads
// concepts over threads without changing the result; the game must then be
// safe for concurrent calls.
ShapleyEstimate MonteCarloShapley(const GameView& game, int samples_per_concept,
                                  std::uint64_t seed, int jobs = 1);

}  // namespace eeac

#endif  // EEAC_SHAPLEY_H_
