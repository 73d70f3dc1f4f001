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

#ifndef EEAC_SELFTEST_H_
#define EEAC_SELFTEST_H_

#include <filesystem>
#include <string>
#include <vector>

#include "eeac/surrogate.h"

namespace eeac {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestInputs {
  // Files whose invariants are checked in addition to the built-in suite.
  std::vector<std::filesystem::path> surrogate_files;
  std::vector<std::filesystem::path> case_files;
};

// Shapley axioms, Monte Carlo vs exact, gradient checks, linear reduction,
// AUC hand cases and serialization round trips, plus the given files.
std::vector<CheckResult> RunSelftest(const SelftestInputs& inputs = {});

// Largest |analytic - central difference| / max(|analytic|, |numeric|, floor)
// over every trainable parameter of `w` for the batch-mean cross entropy.
double MaxGradientError(const SurrogateWeights& w,
                        const FrozenHead& head,
                        const std::vector<TrainingPair>& batch,
                        double step = 1e-4, double floor = 1e-3);

// Smallest |pre-activation| over the batch for a ReLU network, infinity for
// every other variant. Central differences are meaningless within one step
// of the kink, so gradient checks redraw such instances.
double KinkDistance(const SurrogateWeights& w,
                    const std::vector<TrainingPair>& batch);

}  // namespace eeac

#endif  // EEAC_SELFTEST_H_
