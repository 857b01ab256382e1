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
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "del/assess_net.hpp"
#include "del/metrics.hpp"
#include "del/rules.hpp"

namespace del {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// Matrices serialize as {rows, cols, data: base64(little-endian doubles)}
/// so weights round-trip bit-exactly.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// A self-contained model state: the rule set with learned thresholds, the
/// normalization constants, and (when trained with the data assessing model)
/// the full assess-network weights and preprocessing statistics.
struct Snapshot {
  std::size_t step = 0;
  std::string config_hash;
  RuleSet rules;               // theta0 holds the expert initial values
  std::vector<double> theta;   // learned thresholds
  std::vector<double> z;
  bool has_assess = false;
  AssessConfig assess_config;
  AssessWeights assess_weights;
  FeatureCodec codec;
  Metrics metrics;  // on the training set at save time

  nlohmann::json to_json() const;
  static Snapshot from_json(const nlohmann::json& j);
};

/// Write-temp-then-rename; a crash never leaves a partial snapshot behind.
void save_snapshot_file(const Snapshot& snapshot, const std::string& path);
Snapshot load_snapshot_file(const std::string& path);

}  // namespace del
