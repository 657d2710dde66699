// Copyright 2026 The seldqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELDQA_UTIL_HPP_
#define SELDQA_UTIL_HPP_

#include <cstdint>
#include <string_view>

namespace seldqa {

/// FNV-1a, 64 bit. Stable across platforms and standard libraries, unlike
/// std::hash, so seeded outputs are reproducible everywhere.
constexpr std::uint64_t StableHash(std::string_view s,
                                   std::uint64_t basis = 0xcbf29ce484222325ULL) {
  std::uint64_t h = basis;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// splitmix64 step; also a decent mixer for combining a seed with a hash.
constexpr std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t MixSeed(std::uint64_t seed, std::string_view key) {
  std::uint64_t state = seed ^ StableHash(key);
  return SplitMix64(state);
}

/// Tiny deterministic generator whose output sequence does not depend on the
/// standard library implementation (std::uniform_int_distribution does).
class StableRng {
 public:
  explicit constexpr StableRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() { return SplitMix64(state_); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t Below(std::uint64_t n) {
    // Lemire-style rejection keeps the draw unbiased.
    const std::uint64_t limit = -n % n;
    for (;;) {
      const std::uint64_t x = Next();
      if (x >= limit) return x % n;
    }
  }

  /// Uniform integer in [lo, hi].
  int Uniform(int lo, int hi) {
    return lo + static_cast<int>(
                    Below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1).
  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return Unit() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace seldqa

#endif  // SELDQA_UTIL_HPP_
