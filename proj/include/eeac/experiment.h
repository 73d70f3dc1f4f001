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

#ifndef EEAC_EXPERIMENT_H_
#define EEAC_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eeac/explanation.h"
#include "eeac/json_text.h"
#include "eeac/oracle.h"
#include "eeac/shapley.h"
#include "eeac/training.h"

namespace eeac {

struct ExplainOptions {
  SurrogateVariant variant = SurrogateVariant::Nonlinear(Activation::kTanh);
  TrainConfig train;  // train.seed is overwritten from `seed`
  ShapleyMethod method = ShapleyMethod::kMonteCarlo;
  int samples_per_concept = kDefaultSamplesPerConcept;
  std::uint64_t seed = 0;
  // Evaluate faithfulness curves on the surrogate instead of the oracle.
  bool pie_curves = false;
  bool at_least_one = false;
  int jobs = 1;
};

struct ExplainResult {
  TrainedSurrogate surrogate;
  TrainConfig train_config;  // as actually used
  ShapleyEstimate shapley;
  ExplanationReport report;
};

// Train the PIE surrogate, estimate Shapley values on it, then rank, select
// and trace faithfulness curves. MissingEntryError carries every coalition
// the current stage could not obtain.
ExplainResult RunExplain(const OracleCase& c, const ExplainOptions& options);

struct ExperimentConfig {
  std::vector<SurrogateVariant> variants = {
      SurrogateVariant::Linear(), SurrogateVariant::Nonlinear(Activation::kTanh)};
  TrainConfig train;
  ShapleyMethod method = ShapleyMethod::kMonteCarlo;
  int samples_per_concept = kDefaultSamplesPerConcept;
  int repetitions = 3;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  bool pie_curves = false;

  void Validate() const;
};

// Seed of one (case, repetition) cell; shared by every variant so the
// comparison is paired.
std::uint64_t RunSeed(std::uint64_t base_seed, const std::string& case_id,
                      int repetition);

struct RunRecord {
  std::string case_id;
  std::string variant;
  int repetition = 0;
  std::uint64_t seed = 0;
  double insertion_auc = 0.0;
  double deletion_auc = 0.0;
  double final_train_ce = 0.0;
  std::optional<double> holdout_kl;
  double pie_time_seconds = 0.0;
};

struct SummaryRow {
  std::string variant;
  int runs = 0;
  double mean_insertion_auc = 0.0;
  double mean_deletion_auc = 0.0;
  std::optional<double> mean_holdout_kl;
  double mean_pie_time_seconds = 0.0;
};

struct CaseFailure {
  std::string case_id;
  std::string message;
};

struct CompareResult {
  std::vector<RunRecord> runs;  // case order, then repetition, then variant
  std::vector<SummaryRow> summary;
  std::vector<CaseFailure> failures;
};

// `count` synthetic cases with ids "s<seed>-NNNN"; case i uses seed
// DeriveSeed(seed, i).
std::vector<OracleCase> SynthesizeCases(const SyntheticOracleSpec& spec,
                                        int count, std::uint64_t seed);
std::string SynthCaseId(std::uint64_t seed, int index);

// Every case x repetition x variant: train, surrogate-backed Shapley, curves
// on the oracle (unless pie_curves). A failing case is recorded and skipped.
CompareResult Compare(const std::vector<OracleCase>& cases,
                      const ExperimentConfig& config);

// Arithmetic means per variant, in the order variants first appear.
std::vector<SummaryRow> Summarize(const std::vector<RunRecord>& runs);

// Table with AUCs x100 and the best entry of each metric column wrapped in
// ** **.
std::string SummaryText(const std::vector<SummaryRow>& summary);

// Deterministic records (no wall-clock fields).
Json RunsJson(const std::vector<RunRecord>& runs);
Json SummaryJson(const std::vector<SummaryRow>& summary);
// Wall-clock fields only.
Json TimingJson(const std::vector<RunRecord>& runs,
                const std::vector<SummaryRow>& summary);

}  // namespace eeac

#endif  // EEAC_EXPERIMENT_H_
