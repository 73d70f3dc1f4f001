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

#ifndef EEAC_EXPLANATION_H_
#define EEAC_EXPLANATION_H_

#include <span>
#include <string>
#include <vector>

#include "eeac/coalition.h"
#include "eeac/oracle.h"
#include "eeac/shapley.h"

namespace eeac {

struct CurvePoint {
  double fraction = 0.0;
  Coalition coalition;
  double utility = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

using Curve = std::vector<CurvePoint>;

struct Explanation {
  std::vector<int> selected;  // ascending concept indices
  double phi = 0.0;           // sum of the selected values
};

// The additive score is maximized by every strictly positive concept. With
// `at_least_one`, an all-non-positive estimate yields the single top concept.
Explanation SelectExplanation(std::span<const double> values,
                              bool at_least_one = false);

// Descending by value, ties by ascending index.
std::vector<int> RankConcepts(std::span<const double> values);

// Step j keeps (insertion) or removes (deletion) the top-j ranked concepts and
// records u at fraction j/n; n+1 points in total.
Curve InsertionCurve(const GameView& game, std::span<const int> ranking);
Curve DeletionCurve(const GameView& game, std::span<const int> ranking);

// Trapezoidal area over the fraction axis. Fractions must rise strictly from
// 0 to 1 across at least two points.
double Auc(std::span<const double> fractions, std::span<const double> values);
double Auc(const Curve& curve);

struct ExplanationReport {
  std::vector<int> ranking;
  Explanation explanation;
  Curve insertion_curve;
  Curve deletion_curve;
  double insertion_auc = 0.0;
  double deletion_auc = 0.0;
  std::string curve_backing;
};

// Ranks and selects from `estimate`, then evaluates both curves on `curves`.
// Missing oracle entries from either curve are reported together.
ExplanationReport Evaluate(const ShapleyEstimate& estimate,
                           const GameView& curves, bool at_least_one = false);

// Two-panel vector plot of both curves with their AUC values.
std::string RenderCurvesSvg(const ExplanationReport& report,
                            const std::string& title);

}  // namespace eeac

#endif  // EEAC_EXPLANATION_H_
