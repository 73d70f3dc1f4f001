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

#ifndef EEAC_TRAINING_H_
#define EEAC_TRAINING_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "eeac/oracle.h"
#include "eeac/surrogate.h"

namespace eeac {

struct TrainConfig {
  int epochs = 50;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 64;
  // Sampled coalitions. Zero selects the defaults: min(2^n, 1024) coalitions
  // in total, a quarter of which are held out.
  int n_train_samples = 0;
  int n_holdout_samples = 0;
  int hidden_width = 0;  // 0 means the case's feature_dim
  std::uint64_t seed = 0;

  void Validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainReport {
  std::vector<double> loss_curve;  // train-set mean CE after each epoch
  double final_train_ce = 0.0;
  std::optional<double> final_holdout_kl;  // absent when nothing is held out
  int n_train = 0;
  int n_holdout = 0;
  double pie_time_seconds = 0.0;  // wall clock of the optimization loop only
};

struct TrainingSet {
  std::vector<TrainingPair> train;
  std::vector<TrainingPair> holdout;
};

// Distinct coalitions drawn as size ~ U{0..n} then a uniform subset of that
// size; the empty and full coalitions always train. The draw depends on the
// seed only, whatever the oracle kind. Coalitions a pairs case lacks are
// collected and reported together through MissingEntryError.
TrainingSet BuildTrainingSet(const OracleCase& c, const TrainConfig& cfg);

struct TrainedSurrogate {
  SurrogateWeights weights;
  TrainReport report;
};

// Adam over shuffled mini-batches; the head is read but never written.
TrainedSurrogate TrainOnSet(const FrozenHead& head, const TrainingSet& data,
                            SurrogateVariant variant, const TrainConfig& cfg);

TrainedSurrogate Train(const OracleCase& c, SurrogateVariant variant,
                       const TrainConfig& cfg);

// Mean KL(target || surrogate) over a set of pairs.
double MeanKl(const SurrogateWeights& w, const FrozenHead& head,
              const std::vector<TrainingPair>& pairs);
double MeanCrossEntropy(const SurrogateWeights& w, const FrozenHead& head,
                        const std::vector<TrainingPair>& pairs);

}  // namespace eeac

#endif  // EEAC_TRAINING_H_
