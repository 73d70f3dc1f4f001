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

#include "eeac/shapley.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "eeac/errors.h"

namespace eeac {

std::string_view ShapleyMethodName(ShapleyMethod m) {
  return m == ShapleyMethod::kExact ? "exact" : "monte_carlo";
}

ShapleyMethod ParseShapleyMethod(std::string_view name) {
  if (name == "exact") return ShapleyMethod::kExact;
  if (name == "monte_carlo" || name == "mc") return ShapleyMethod::kMonteCarlo;
  throw std::invalid_argument("unknown Shapley method '" + std::string(name) +
                              "'");
}

void ShapleyEstimate::Validate() const {
  if (std_errors.size() != values.size()) {
    throw SchemaError("shapley: values and std_errors differ in length");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(std_errors[i]) ||
        std_errors[i] < 0.0) {
      throw SchemaError("shapley: invalid estimate for concept " +
                        std::to_string(i));
    }
  }
  if (method == ShapleyMethod::kExact && samples_per_concept) {
    throw SchemaError("shapley: exact estimates carry no sample count");
  }
  if (method == ShapleyMethod::kMonteCarlo && !samples_per_concept) {
    throw SchemaError("shapley: Monte Carlo estimates need K");
  }
}

double MarginalContribution(const GameView& game, int i, const Coalition& s) {
  if (s.Contains(i)) {
    throw std::invalid_argument("concept " + std::to_string(i) +
                                " is already in coalition " + s.ToText());
  }
  return game(WithConcept(s, i)) - game(s);
}

ShapleyEstimate ExactShapley(const GameView& game) {
  const int n = game.n();
  if (n > kMaxExactConcepts) {
    throw std::invalid_argument("exact Shapley is limited to n <= " +
                                std::to_string(kMaxExactConcepts) +
                                " concepts, got n=" + std::to_string(n));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<double> u(total);
  std::vector<Coalition> missing;
  std::string case_id;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    try {
      u[bits] = game(Coalition(bits, n));
    } catch (const MissingEntryError& e) {
      case_id = e.case_id();
      missing.insert(missing.end(), e.missing().begin(), e.missing().end());
    }
  }
  if (!missing.empty()) throw MissingEntryError(case_id, std::move(missing));

  // phi_i = (1/n) sum_s mean of the marginals over the C(n-1, s) coalitions of
  // size s, i.e. weight s! (n-s-1)! / n! per coalition. Summing per size
  // first keeps additive games exact.
  std::vector<double> binom(static_cast<std::size_t>(std::max(n, 1)));
  double c = 1.0;
  for (int s = 0; s < n; ++s) {
    binom[static_cast<std::size_t>(s)] = c;
    c = c * (n - 1 - s) / (s + 1);
  }

  ShapleyEstimate est;
  est.method = ShapleyMethod::kExact;
  est.values.assign(static_cast<std::size_t>(n), 0.0);
  est.std_errors.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> by_size(static_cast<std::size_t>(std::max(n, 1)));
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    std::fill(by_size.begin(), by_size.end(), 0.0);
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      if (bits & bit) continue;
      by_size[static_cast<std::size_t>(std::popcount(bits))] += u[bits | bit] - u[bits];
    }
    double phi = 0.0;
    for (int s = 0; s < n; ++s) {
      phi += by_size[static_cast<std::size_t>(s)] / binom[static_cast<std::size_t>(s)];
    }
    est.values[static_cast<std::size_t>(i)] = phi / n;
  }
  return est;
}

ShapleyEstimate MonteCarloShapley(const GameView& game, int samples_per_concept,
                                  std::uint64_t seed, int jobs) {
  if (samples_per_concept < 2) {
    throw std::invalid_argument("Monte Carlo Shapley needs K >= 2");
  }
  const int n = game.n();
  ShapleyEstimate est;
  est.method = ShapleyMethod::kMonteCarlo;
  est.samples_per_concept = samples_per_concept;
  est.seed = seed;
  est.values.assign(static_cast<std::size_t>(n), 0.0);
  est.std_errors.assign(static_cast<std::size_t>(n), 0.0);

  // Unknown oracle entries are gathered per concept and reported together.
  std::vector<std::vector<Coalition>> missing(static_cast<std::size_t>(n));
  std::string case_id;
  std::mutex case_id_mutex;
  auto utility = [&](int i, const Coalition& s) {
    try {
      return game(s);
    } catch (const MissingEntryError& e) {
      auto& bucket = missing[static_cast<std::size_t>(i)];
      bucket.insert(bucket.end(), e.missing().begin(), e.missing().end());
      std::lock_guard lock(case_id_mutex);
      case_id = e.case_id();
      return 0.0;
    }
  };

  auto estimate_concept = [&](int i) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_int_distribution<int> size_dist(1, n);
    // Welford accumulation.
    double mean = 0.0;
    double m2 = 0.0;
    for (int k = 0; k < samples_per_concept; ++k) {
      const Coalition s = SampleCoalition(rng, n, size_dist(rng) - 1, i);
      const double delta =
          utility(i, WithConcept(s, i)) - utility(i, s);
      const double step = delta - mean;
      mean += step / (k + 1);
      m2 += step * (delta - mean);
    }
    const double variance = m2 / (samples_per_concept - 1);
    est.values[static_cast<std::size_t>(i)] = mean;
    est.std_errors[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, variance) / samples_per_concept);
  };

  auto finish = [&]() {
    std::vector<Coalition> all;
    for (const auto& bucket : missing) all.insert(all.end(), bucket.begin(), bucket.end());
    if (!all.empty()) {
      std::sort(all.begin(), all.end());
      all.erase(std::unique(all.begin(), all.end()), all.end());
      throw MissingEntryError(case_id, std::move(all));
    }
    return est;
  };

  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) estimate_concept(i);
    return finish();
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (int t = 0; t < std::min(jobs, n); ++t) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          estimate_concept(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
  return finish();
}

}  // namespace eeac
