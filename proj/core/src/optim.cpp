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

#include "del/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "del/error.hpp"
#include "del/rng.hpp"

namespace del {

AdamState::AdamState(std::size_t dim, AdamConfig config)
    : config_(config), first_moment_(dim, 0.0), second_moment_(dim, 0.0) {}

void AdamState::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != dim() || grads.size() != dim()) {
    throw ShapeError("adam_step: parameter/gradient length " +
                     std::to_string(params.size()) + "/" +
                     std::to_string(grads.size()) + " does not match state " +
                     std::to_string(dim()));
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw Error("adam_step: non-finite gradient at index " +
                  std::to_string(i));
    }
  }
  step_ += 1;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_moment_[i] = b1 * first_moment_[i] + (1.0 - b1) * grads[i];
    second_moment_[i] = b2 * second_moment_[i] + (1.0 - b2) * grads[i] * grads[i];
    const double mhat = first_moment_[i] / bias1;
    const double vhat = second_moment_[i] / bias2;
    params[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
  }
}

DEConfig make_de_config(std::vector<std::pair<double, double>> bounds,
                        std::uint64_t seed) {
  DEConfig cfg;
  cfg.population_size = std::clamp<std::size_t>(15 * bounds.size(), 4, 64);
  cfg.bounds = std::move(bounds);
  cfg.seed = seed;
  return cfg;
}

namespace {

void validate_de_config(const DEConfig& config) {
  if (config.population_size < 4) {
    throw ConfigError("de_optimize: population_size must be >= 4");
  }
  if (config.bounds.empty()) {
    throw ConfigError("de_optimize: bounds must be nonempty");
  }
  if (config.mutation_factor < 0.0 || config.mutation_factor > 2.0) {
    throw ConfigError("de_optimize: mutation_factor must be in [0, 2]");
  }
  if (config.crossover_prob < 0.0 || config.crossover_prob > 1.0) {
    throw ConfigError("de_optimize: crossover_prob must be in [0, 1]");
  }
  for (std::size_t d = 0; d < config.bounds.size(); ++d) {
    const auto& [lo, hi] = config.bounds[d];
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      throw ConfigError("de_optimize: bound " + std::to_string(d) +
                        " must satisfy finite lower < upper");
    }
  }
}

}  // namespace

DEResult de_optimize(const DEObjective& objective, const DEConfig& config,
                     std::size_t max_iters) {
  validate_de_config(config);
  const std::size_t dim = config.bounds.size();
  const std::size_t pop = config.population_size;
  Rng rng(config.seed);

  std::vector<std::vector<double>> members(pop, std::vector<double>(dim));
  std::vector<double> values(pop);
  DEResult result;
  result.best_value = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < pop; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      members[i][d] = rng.uniform(config.bounds[d].first, config.bounds[d].second);
    }
    values[i] = objective(members[i]);
    ++result.evaluations;
    if (values[i] < result.best_value) {
      result.best_value = values[i];
      result.best = members[i];
    }
  }
  result.best_history.push_back(result.best_value);

  std::vector<double> trial(dim);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    for (std::size_t i = 0; i < pop; ++i) {
      // rand/1: three distinct members, none equal to i.
      std::size_t r1 = rng.below(pop);
      while (r1 == i) r1 = rng.below(pop);
      std::size_t r2 = rng.below(pop);
      while (r2 == i || r2 == r1) r2 = rng.below(pop);
      std::size_t r3 = rng.below(pop);
      while (r3 == i || r3 == r1 || r3 == r2) r3 = rng.below(pop);

      const std::size_t forced = rng.below(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        if (d == forced || rng.uniform() < config.crossover_prob) {
          double v = members[r1][d] +
                     config.mutation_factor * (members[r2][d] - members[r3][d]);
          trial[d] = std::clamp(v, config.bounds[d].first, config.bounds[d].second);
        } else {
          trial[d] = members[i][d];
        }
      }
      const double trial_value = objective(trial);
      ++result.evaluations;
      if (trial_value <= values[i]) {
        members[i] = trial;
        values[i] = trial_value;
        if (trial_value < result.best_value) {
          result.best_value = trial_value;
          result.best = trial;
        }
      }
    }
    result.best_history.push_back(result.best_value);
  }
  return result;
}

}  // namespace del
