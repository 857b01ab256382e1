// Copyright 2026 The DEL Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace del {

/// SplitMix64 finalizer; used for seed derivation and stream splitting.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a parent seed and up to three stream labels.
/// Distinct labels give statistically independent child streams, so work
/// items can be seeded by (seed, step, index) without sharing state.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

/// Deterministic random stream. All distributions are implemented on top of
/// the raw 64-bit generator so results are identical on every platform and
/// standard library. Not safe to share across threads; split() instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n); n must be >= 1. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal deviate (Box-Muller, cached spare).
  double normal();
  /// True with probability p.
  bool bernoulli(double p);
  /// Random permutation of [0, n).
  std::vector<std::size_t> permutation(std::size_t n);
  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Independent substream. Consumes one draw from this stream.
  Rng split();

  /// Raw 64-bit draw.
  std::uint64_t next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace del
