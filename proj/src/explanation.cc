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

#include "eeac/explanation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "eeac/errors.h"

namespace eeac {
namespace {

using Rational = boost::multiprecision::cpp_rational;

// Nearest double to q (ties to even); the library conversion alone does not
// promise correct rounding.
double RoundToDouble(const Rational& q) {
  const double guess = q.convert_to<double>();
  double best = guess;
  Rational best_gap = abs(q - Rational(guess));
  for (double candidate : {std::nextafter(guess, -HUGE_VAL),
                           std::nextafter(guess, HUGE_VAL)}) {
    const Rational gap = abs(q - Rational(candidate));
    if (gap < best_gap ||
        (gap == best_gap && (std::bit_cast<std::uint64_t>(candidate) & 1) == 0)) {
      best = candidate;
      best_gap = gap;
    }
  }
  return best;
}

void CheckRanking(std::span<const int> ranking, int n) {
  if (static_cast<int>(ranking.size()) != n) {
    throw std::invalid_argument("ranking has " + std::to_string(ranking.size()) +
                                " entries for n=" + std::to_string(n));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int i : ranking) {
    if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("ranking is not a permutation of 0..n-1");
    }
    seen[static_cast<std::size_t>(i)] = true;
  }
}

// insertion: coalition after adding the top-j concepts to the empty set.
// deletion: its complement.
Curve TraceCurve(const GameView& game, std::span<const int> ranking,
                 bool deletion) {
  const int n = game.n();
  if (n < 1) throw std::invalid_argument("curves need at least one concept");
  CheckRanking(ranking, n);
  Curve curve;
  std::vector<Coalition> missing;
  std::string case_id;
  Coalition prefix = Coalition::Empty(n);
  for (int j = 0; j <= n; ++j) {
    if (j > 0) prefix = WithConcept(prefix, ranking[static_cast<std::size_t>(j - 1)]);
    const Coalition s = deletion ? prefix.Complement() : prefix;
    double u = 0.0;
    try {
      u = game(s);
    } catch (const MissingEntryError& e) {
      case_id = e.case_id();
      missing.insert(missing.end(), e.missing().begin(), e.missing().end());
    }
    curve.push_back({static_cast<double>(j) / n, s, u});
  }
  if (!missing.empty()) throw MissingEntryError(case_id, std::move(missing));
  return curve;
}

}  // namespace

Explanation SelectExplanation(std::span<const double> values,
                              bool at_least_one) {
  Explanation e;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("non-finite Shapley value");
    }
    if (values[i] > 0.0) {
      e.selected.push_back(static_cast<int>(i));
      e.phi += values[i];
    }
  }
  if (e.selected.empty() && at_least_one && !values.empty()) {
    const int top = RankConcepts(values).front();
    e.selected.push_back(top);
    e.phi = values[static_cast<std::size_t>(top)];
  }
  return e;
}

std::vector<int> RankConcepts(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite Shapley value");
  }
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
  });
  return order;
}

Curve InsertionCurve(const GameView& game, std::span<const int> ranking) {
  return TraceCurve(game, ranking, false);
}

Curve DeletionCurve(const GameView& game, std::span<const int> ranking) {
  return TraceCurve(game, ranking, true);
}

double Auc(std::span<const double> fractions, std::span<const double> values) {
  if (fractions.size() != values.size() || fractions.size() < 2) {
    throw std::invalid_argument("AUC needs at least two (fraction, value) points");
  }
  if (fractions.front() != 0.0 || fractions.back() != 1.0) {
    throw std::invalid_argument("AUC fractions must run from 0 to 1");
  }
  // The trapezoid sum is evaluated exactly over the given doubles and rounded
  // once, so a constant curve p integrates to exactly p and the ramp v = f to
  // exactly 1/2 (both sums telescope).
  Rational twice_area = 0;
  for (std::size_t j = 0; j + 1 < fractions.size(); ++j) {
    if (!(fractions[j + 1] > fractions[j])) {
      throw std::invalid_argument("AUC fractions must be strictly increasing");
    }
    if (!std::isfinite(values[j]) || !std::isfinite(values[j + 1])) {
      throw std::invalid_argument("AUC over non-finite curve values");
    }
    twice_area += (Rational(fractions[j + 1]) - Rational(fractions[j])) *
                  (Rational(values[j]) + Rational(values[j + 1]));
  }
  return RoundToDouble(twice_area / 2);
}

double Auc(const Curve& curve) {
  std::vector<double> fractions;
  std::vector<double> values;
  for (const CurvePoint& p : curve) {
    fractions.push_back(p.fraction);
    values.push_back(p.utility);
  }
  return Auc(fractions, values);
}

ExplanationReport Evaluate(const ShapleyEstimate& estimate,
                           const GameView& curves, bool at_least_one) {
  if (estimate.n() != curves.n()) {
    throw std::invalid_argument("estimate and game disagree on n");
  }
  ExplanationReport report;
  report.ranking = RankConcepts(estimate.values);
  report.explanation = SelectExplanation(estimate.values, at_least_one);
  report.curve_backing = curves.backing();

  std::vector<Coalition> missing;
  std::string case_id;
  auto collect = [&](const MissingEntryError& e) {
    case_id = e.case_id();
    missing.insert(missing.end(), e.missing().begin(), e.missing().end());
  };
  try {
    report.insertion_curve = InsertionCurve(curves, report.ranking);
  } catch (const MissingEntryError& e) {
    collect(e);
  }
  try {
    report.deletion_curve = DeletionCurve(curves, report.ranking);
  } catch (const MissingEntryError& e) {
    collect(e);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw MissingEntryError(case_id, std::move(missing));
  }
  report.insertion_auc = Auc(report.insertion_curve);
  report.deletion_auc = Auc(report.deletion_curve);
  return report;
}

namespace {

std::string EscapeXml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string RenderCurvesSvg(const ExplanationReport& report,
                            const std::string& title) {
  constexpr int kPanel = 320;
  constexpr int kMargin = 40;
  std::ostringstream svg;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << 2 * kPanel + 3 * kMargin << "\" height=\"" << kPanel + 2 * kMargin + 20
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<text x=\"" << kMargin << "\" y=\"18\">" << EscapeXml(title) << "</text>\n";
  const std::pair<const Curve*, std::pair<const char*, double>> panels[] = {
      {&report.insertion_curve, {"insertion", report.insertion_auc}},
      {&report.deletion_curve, {"deletion", report.deletion_auc}}};
  int x0 = kMargin;
  for (const auto& [curve, label] : panels) {
    const int y0 = kMargin + 20;
    svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << kPanel
        << "\" height=\"" << kPanel << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const CurvePoint& p : *curve) {
      svg << num(x0 + p.fraction * kPanel) << ","
          << num(y0 + (1.0 - p.utility) * kPanel) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << x0 + 8 << "\" y=\"" << y0 + 16 << "\">" << label.first
        << " AUC " << num(100.0 * label.second) << "</text>\n";
    x0 += kPanel + kMargin;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace eeac
