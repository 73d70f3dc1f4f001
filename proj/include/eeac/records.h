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

#ifndef EEAC_RECORDS_H_
#define EEAC_RECORDS_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eeac/explanation.h"
#include "eeac/json_text.h"
#include "eeac/oracle.h"
#include "eeac/shapley.h"
#include "eeac/surrogate.h"
#include "eeac/training.h"

// Versioned text formats. Every document starts with "format_version": 1 and
// keeps a fixed key order so re-serialization is byte-stable. Case and
// surrogate files end with a checksum over the rest of the document; a
// document without one is accepted unverified (hand-made or bridge output).
namespace eeac {

inline constexpr int kFormatVersion = 1;

Json CaseToJson(const OracleCase& c);
OracleCase CaseFromJson(const Json& doc);
void SaveCase(const OracleCase& c, const std::filesystem::path& path);
OracleCase LoadCase(const std::filesystem::path& path);

Json SurrogateToJson(const SurrogateWeights& w, const TrainConfig& cfg);
SurrogateWeights SurrogateFromJson(const Json& doc, TrainConfig* cfg = nullptr);
void SaveSurrogate(const SurrogateWeights& w, const TrainConfig& cfg,
                   const std::filesystem::path& path);
SurrogateWeights LoadSurrogate(const std::filesystem::path& path,
                               TrainConfig* cfg = nullptr);

// Deterministic part of a training run; wall-clock time is kept out.
Json TrainReportToJson(const std::string& case_id,
                       const SurrogateVariant& variant,
                       const TrainReport& report);

Json ShapleyToJson(const std::string& case_id, const std::string& backing,
                   const ShapleyEstimate& est);
ShapleyEstimate ShapleyFromJson(const Json& doc);

Json ExplanationToJson(const std::string& case_id, const ExplanationReport& r);

// Tab-separated: step, fraction, coalition, u.
std::string CurveTable(const Curve& curve);

// Coalitions are sorted and de-duplicated.
Json RequestToJson(const std::string& case_id,
                   std::vector<Coalition> coalitions);

struct OracleRequest {
  std::string case_id;
  std::vector<Coalition> coalitions;
};
OracleRequest RequestFromJson(const Json& doc);

struct OracleResponse {
  std::string case_id;
  std::map<Coalition, ClassDistribution> entries;
};
Json ResponseToJson(const OracleResponse& response);
OracleResponse ResponseFromJson(const Json& doc, int n_concepts);

}  // namespace eeac

#endif  // EEAC_RECORDS_H_
