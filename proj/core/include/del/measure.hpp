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

#include "del/rules.hpp"
#include "del/sample.hpp"

namespace del {

struct MeasurementResult {
  double value = 0.0;
  /// Effective rows that satisfied all predicates, ascending.
  std::vector<std::size_t> touched_rows;
};

/// Runs one aggregation query over the effective (mask >= 0.5) rows.
/// count -> cardinality of the touched set; max -> maximum of the target
/// column over it, or schema.empty_max_default when nothing matches.
MeasurementResult evaluate(const Measurement& m, const MaskedSample& sample,
                           const Schema& schema);

struct EvalAllResult {
  std::vector<double> values;                       // f_k, by measurement id
  std::vector<std::vector<std::size_t>> touched;    // by measurement id
};

EvalAllResult evaluate_all(std::span<const Measurement> measurements,
                           const MaskedSample& sample, const Schema& schema);

}  // namespace del
