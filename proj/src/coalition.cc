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

#include "eeac/coalition.h"

#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "eeac/errors.h"

namespace eeac {
namespace {

std::uint64_t LowMask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void CheckIndex(const Coalition& s, int i) {
  if (i < 0 || i >= s.n()) {
    throw std::out_of_range("concept index " + std::to_string(i) +
                            " out of range for n=" + std::to_string(s.n()));
  }
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MissingEntryError::MissingEntryError(std::string case_id,
                                     std::vector<Coalition> missing)
    : std::runtime_error("case '" + case_id + "' is missing " +
                         std::to_string(missing.size()) +
                         " oracle entr" + (missing.size() == 1 ? "y" : "ies")),
      case_id_(std::move(case_id)),
      missing_(std::move(missing)) {}

Coalition::Coalition(std::uint64_t bits, int n) : bits_(bits), n_(n) {
  if (n < 0 || n > kMaxConcepts) {
    throw std::invalid_argument("coalition width must be in [0, 64], got " +
                                std::to_string(n));
  }
  if ((bits & ~LowMask(n)) != 0) {
    throw std::invalid_argument("coalition bits exceed width " +
                                std::to_string(n));
  }
}

Coalition Coalition::Full(int n) { return Coalition(LowMask(n), n); }

bool Coalition::Contains(int i) const {
  CheckIndex(*this, i);
  return (bits_ >> i) & 1U;
}

int Coalition::Count() const { return std::popcount(bits_); }

Coalition Coalition::Complement() const {
  return Coalition(~bits_ & LowMask(n_), n_);
}

std::string Coalition::ToText() const {
  std::string text(static_cast<std::size_t>(n_), '0');
  for (int i = 0; i < n_; ++i) {
    if ((bits_ >> i) & 1U) text[static_cast<std::size_t>(i)] = '1';
  }
  return text;
}

Coalition CoalitionFromText(std::string_view text, int n) {
  if (static_cast<int>(text.size()) != n) {
    throw std::invalid_argument("coalition text '" + std::string(text) +
                                "' has length " + std::to_string(text.size()) +
                                ", expected " + std::to_string(n));
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < n; ++i) {
    const char c = text[static_cast<std::size_t>(i)];
    if (c == '1') {
      bits |= std::uint64_t{1} << i;
    } else if (c != '0') {
      throw std::invalid_argument("invalid character '" + std::string(1, c) +
                                  "' in coalition text '" + std::string(text) +
                                  "'");
    }
  }
  return Coalition(bits, n);
}

Coalition WithConcept(const Coalition& s, int i) {
  CheckIndex(s, i);
  return Coalition(s.bits() | (std::uint64_t{1} << i), s.n());
}

Coalition WithoutConcept(const Coalition& s, int i) {
  CheckIndex(s, i);
  return Coalition(s.bits() & ~(std::uint64_t{1} << i), s.n());
}

std::vector<Coalition> EnumerateCoalitions(int n) {
  if (n < 0) throw std::invalid_argument("negative concept count");
  if (n > kMaxExactConcepts) {
    throw std::invalid_argument(
        "exact enumeration is limited to n <= " +
        std::to_string(kMaxExactConcepts) + " concepts, got n=" +
        std::to_string(n));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<Coalition> all;
  all.reserve(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) all.emplace_back(bits, n);
  return all;
}

Coalition SampleCoalition(Rng& rng, int n, int size,
                          std::optional<int> exclude) {
  if (n < 0 || n > kMaxConcepts) {
    throw std::invalid_argument("invalid concept count " + std::to_string(n));
  }
  if (exclude && (*exclude < 0 || *exclude >= n)) {
    throw std::out_of_range("excluded concept " + std::to_string(*exclude) +
                            " out of range for n=" + std::to_string(n));
  }
  const int available = n - (exclude ? 1 : 0);
  if (size < 0 || size > available) {
    throw std::invalid_argument("cannot draw a coalition of size " +
                                std::to_string(size) + " from " +
                                std::to_string(available) + " concepts");
  }
  int candidates[kMaxConcepts];
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (!exclude || i != *exclude) candidates[count++] = i;
  }
  std::uint64_t bits = 0;
  for (int j = 0; j < size; ++j) {
    std::uniform_int_distribution<int> pick(j, count - 1);
    std::swap(candidates[j], candidates[pick(rng)]);
    bits |= std::uint64_t{1} << candidates[j];
  }
  return Coalition(bits, n);
}

void ConceptSet::Validate() const {
  if (n < 1 || n > kMaxConcepts) {
    throw SchemaError("concept set needs 1 <= n <= 64, got n=" +
                      std::to_string(n));
  }
  if (!meta.empty() && static_cast<int>(meta.size()) != n) {
    throw SchemaError("concept metadata has " + std::to_string(meta.size()) +
                      " entries for n=" + std::to_string(n));
  }
}

}  // namespace eeac
