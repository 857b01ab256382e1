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

#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace del {

struct Metrics {
  double accuracy = 0.0;
  double recall = 0.0;
  double recall_prime = 0.0;
  double false_critical_ratio = 0.0;
  std::size_t false_neg = 0;
  std::size_t false_pos = 0;
  std::size_t n_samples = 0;
  std::size_t n_positive = 0;
  /// Set when recall is reported as 1.0 because the dataset has no
  /// positive samples.
  bool recall_vacuous = false;

  nlohmann::json to_json() const;
  static Metrics from_json(const nlohmann::json& j);
  bool operator==(const Metrics&) const = default;
};

/// The model-selection score: recall when accuracy clears the threshold,
/// negated recall otherwise.
double recall_prime_of(double recall, double accuracy, double acc_threshold);

/// One evaluated sample: label, prediction, and whether the predicted
/// critical rows intersect the labelled ones.
struct PredictionOutcome {
  int y = -1;
  int predicted = -1;
  bool has_y_feat = false;
  bool critical_hit = false;
};

Metrics compute_metrics(std::span<const PredictionOutcome> outcomes,
                        double acc_threshold);

}  // namespace del
