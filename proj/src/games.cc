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

#include "eeac/games.h"

#include <memory>
#include <stdexcept>

namespace eeac {

std::vector<double> RandomGameTable(int n, std::uint64_t seed,
                                    std::optional<int> dummy,
                                    std::optional<std::pair<int, int>> symmetric) {
  if (n < 0 || n > kMaxExactConcepts) {
    throw std::invalid_argument("random games are limited to n <= 20");
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> raw(total);
  for (double& v : raw) v = unit(rng);

  std::vector<double> table(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    std::uint64_t canonical = bits;
    if (dummy) canonical &= ~(std::uint64_t{1} << *dummy);
    if (symmetric) {
      const std::uint64_t a = std::uint64_t{1} << symmetric->first;
      const std::uint64_t b = std::uint64_t{1} << symmetric->second;
      // Exactly one of the pair present: always look up the "a present" cell.
      if (((canonical & a) != 0) != ((canonical & b) != 0)) {
        canonical = (canonical | a) & ~b;
      }
    }
    table[bits] = raw[canonical];
  }
  return table;
}

GameView AdditiveGame(std::vector<double> weights) {
  const int n = static_cast<int>(weights.size());
  auto w = std::make_shared<const std::vector<double>>(std::move(weights));
  return GameView(
      n,
      [w](const Coalition& s) {
        double total = 0.0;
        for (int i = 0; i < s.n(); ++i) {
          if ((s.bits() >> i) & 1U) total += (*w)[static_cast<std::size_t>(i)];
        }
        return total;
      },
      "additive");
}

}  // namespace eeac
