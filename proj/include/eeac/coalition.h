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

#ifndef EEAC_COALITION_H_
#define EEAC_COALITION_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace eeac {

inline constexpr int kMaxConcepts = 64;
// Exact enumeration (and exact Shapley) refuses anything wider.
inline constexpr int kMaxExactConcepts = 20;

using Rng = std::mt19937_64;

// Mixes a base seed with a stream index (splitmix64 finalizer) so that
// independent streams can be derived from one user-facing seed.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

// Presence vector over n concepts. Bit i of the integer form is concept i;
// in text form concept 0 is the leftmost character.
class Coalition {
 public:
  Coalition() = default;
  Coalition(std::uint64_t bits, int n);

  static Coalition Empty(int n) { return Coalition(0, n); }
  static Coalition Full(int n);

  int n() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  bool Contains(int i) const;
  int Count() const;
  Coalition Complement() const;
  std::string ToText() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;
  friend auto operator<=>(const Coalition&, const Coalition&) = default;

 private:
  std::uint64_t bits_ = 0;
  int n_ = 0;
};

Coalition CoalitionFromText(std::string_view text, int n);

Coalition WithConcept(const Coalition& s, int i);
Coalition WithoutConcept(const Coalition& s, int i);

// All 2^n coalitions in ascending integer order. n > kMaxExactConcepts throws.
std::vector<Coalition> EnumerateCoalitions(int n);

// Uniform draw among coalitions of exactly `size` concepts taken from
// {0..n-1} minus `exclude`. Partial Fisher-Yates over the candidates.
Coalition SampleCoalition(Rng& rng, int n, int size,
                          std::optional<int> exclude = std::nullopt);

// Optional descriptor the bridge attaches to a concept; never read by the math.
struct ConceptMeta {
  std::string mask_path;
  std::int64_t pixel_area = 0;

  friend bool operator==(const ConceptMeta&, const ConceptMeta&) = default;
};

struct ConceptSet {
  int n = 0;
  std::vector<ConceptMeta> meta;  // empty, or exactly n entries

  void Validate() const;
  friend bool operator==(const ConceptSet&, const ConceptSet&) = default;
};

}  // namespace eeac

template <>
struct std::hash<eeac::Coalition> {
  std::size_t operator()(const eeac::Coalition& c) const noexcept {
    return std::hash<std::uint64_t>{}(c.bits() ^
                                      (static_cast<std::uint64_t>(c.n()) << 58));
  }
};

#endif  // EEAC_COALITION_H_
