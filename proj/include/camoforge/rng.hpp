// Copyright 2026 The camoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace camoforge {

inline constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stateless draw keyed by (seed, stream, a, b). Used so that the random choice
// of a given gate in a given sample does not depend on evaluation order.
inline constexpr uint64_t counter_hash(uint64_t seed, uint64_t stream, uint64_t a, uint64_t b) {
  uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ull);
  h = mix64(h ^ (stream * 0x13198a2e03707344ull));
  h = mix64(h ^ (a * 0xa4093822299f31d0ull));
  return mix64(h ^ (b * 0x082efa98ec4e6c89ull));
}

// Seed for run `index` of a campaign with master seed `master`.
inline constexpr uint64_t derive_seed(uint64_t master, uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x452821e638d01377ull));
}

// Probability p as a 64-bit threshold: a uniform word u satisfies u < t with probability p.
// p >= 1 maps to UINT64_MAX, which is then handled by callers as "always".
inline uint64_t probability_threshold(double p) {
  if (!(p > 0)) return 0;
  if (p >= 1) return ~uint64_t{0};
  return static_cast<uint64_t>(std::ldexp(p, 64));
}

// Small sequential generator (splitmix64). Bit-for-bit reproducible across
// platforms, unlike the standard distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) without modulo bias.
  uint64_t uniform_int(uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int(0)");
    uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t x;
    do { x = next(); } while (x >= limit);
    return x % n;
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace camoforge
