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
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace del {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment vectors track one parameter vector;
/// step() validates gradients before touching any state, so a rejected
/// update leaves parameters and moments unchanged.
class AdamState {
 public:
  AdamState(std::size_t dim, AdamConfig config = {});

  /// One update in place. Throws Error naming the offending index if any
  /// gradient entry is non-finite.
  void step(std::span<double> params, std::span<const double> grads);

  std::size_t dim() const { return first_moment_.size(); }
  std::uint64_t steps() const { return step_; }
  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  std::span<const double> first_moment() const { return first_moment_; }
  std::span<const double> second_moment() const { return second_moment_; }

 private:
  AdamConfig config_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  std::uint64_t step_ = 0;
};

struct DEConfig {
  std::size_t population_size = 0;  // must be >= 4
  double mutation_factor = 0.8;     // F in [0, 2]
  double crossover_prob = 0.7;      // CR in [0, 1]
  std::vector<std::pair<double, double>> bounds;  // per-dimension (lo, hi)
  std::uint64_t seed = 0;
};

/// Population sized 15 per dimension, capped at 64 and floored at 4.
DEConfig make_de_config(std::vector<std::pair<double, double>> bounds,
                        std::uint64_t seed);

struct DEResult {
  std::vector<double> best;
  double best_value = 0.0;
  std::size_t evaluations = 0;
  /// Best value after initialization and after each iteration; non-increasing.
  std::vector<double> best_history;
};

using DEObjective = std::function<double(std::span<const double>)>;

/// Classic rand/1/bin differential evolution, minimizing. Candidates are
/// clipped to the bounds before evaluation, so the objective never sees an
/// out-of-bounds vector. Deterministic given config.seed. max_iters == 0
/// returns the best member of the random initial population.
DEResult de_optimize(const DEObjective& objective, const DEConfig& config,
                     std::size_t max_iters);

}  // namespace del
