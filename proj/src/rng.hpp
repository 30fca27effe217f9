// Copyright 2026 The Authors.
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

#ifndef PMA_RNG_HPP_
#define PMA_RNG_HPP_

#include <cstdint>
#include <vector>

namespace pma {

// SplitMix64 finalizer.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives the k-th child seed of `seed`:
//   sub_seed(s, k) = mix64(s + (k + 1) * 0x9E3779B97F4A7C15).
inline uint64_t sub_seed(uint64_t seed, uint64_t k) {
  return mix64(seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

// Counter-based generator: the i-th draw is mix64(seed + (i + 1) * golden),
// so a stream is fully determined by (seed, counter).
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {}

  uint64_t next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

  // Index drawn from unnormalized nonnegative weights.
  int categorical(const std::vector<double>& w) {
    double total = 0.0;
    for (double v : w) total += v;
    double u = uniform() * total;
    for (size_t i = 0; i < w.size(); ++i) {
      if (u < w[i]) return static_cast<int>(i);
      u -= w[i];
    }
    for (size_t i = w.size(); i-- > 0;) {
      if (w[i] > 0) return static_cast<int>(i);
    }
    return 0;
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace pma

#endif  // PMA_RNG_HPP_
