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

#ifndef EEAC_GAMES_H_
#define EEAC_GAMES_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "eeac/oracle.h"

namespace eeac {

// Utility table with entries uniform in [0, 1]. When requested, `dummy` is
// made structurally irrelevant and the two concepts in `symmetric` become
// interchangeable.
std::vector<double> RandomGameTable(
    int n, std::uint64_t seed, std::optional<int> dummy = std::nullopt,
    std::optional<std::pair<int, int>> symmetric = std::nullopt);

// u(S) = sum of weights[i] over i in S.
GameView AdditiveGame(std::vector<double> weights);

}  // namespace eeac

#endif  // EEAC_GAMES_H_
