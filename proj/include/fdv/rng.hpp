// Copyright 2026 the fdv authors
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

#ifndef FDV_RNG_HPP
#define FDV_RNG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace fdv {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective 64-bit scramble.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derives an independent substream seed from (seed, salt). Substreams for
/// distinct salts are decorrelated, so draws never depend on traversal or
/// scheduling order.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t salt) {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (salt + 1));
}

/// SplitMix64 generator. Seedable, portable, and fast; all randomness in the
/// library flows through this type so outputs are bit-reproducible.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Modulo bias is below 2^-52 for the ranges
  /// used here (n < 2^32).
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }

  /// One pair of independent standard normal draws via Box-Muller.
  std::pair<double, double> gaussian_pair() {
    const double u1 =
        (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  double gaussian() { return gaussian_pair().first; }

 private:
  std::uint64_t state_;
};

/// Uniform sample of k distinct indices from [0, n), ascending. Partial
/// Fisher-Yates; deterministic per seed.
inline std::vector<std::uint32_t> sample_indices(std::uint32_t n,
                                                 std::uint32_t k,
                                                 std::uint64_t seed) {
  std::vector<std::uint32_t> idx(n);
  for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
  if (k >= n) return idx;
  SplitMix64 rng(seed);
  for (std::uint32_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.bounded(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace fdv

#endif  // FDV_RNG_HPP
