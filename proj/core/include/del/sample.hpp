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
#include <string>
#include <vector>

#include "del/schema.hpp"

namespace del {

inline constexpr std::size_t kMaxSequenceLength = 20000;

/// One product record: a variable-length observation sequence, a fixed base
/// vector, the label, and the expert-marked critical rows.
struct Sample {
  std::vector<std::vector<Value>> x_seq;  // rows over schema.seq_columns
  std::vector<double> x_base;
  int y = -1;                          // +1 positive ("unqualified"), -1 negative
  std::vector<std::size_t> y_feat;     // sorted, unique row indices

  std::size_t rows() const { return x_seq.size(); }
};

/// A sample paired with a per-row mask in (0,1). Rows with mask >= 0.5 are
/// the effective rows; the rest are dropped before any rule evaluation.
struct MaskedSample {
  const Sample* sample = nullptr;
  std::span<const double> mask;

  std::size_t rows() const { return sample->rows(); }
  bool keeps(std::size_t row) const { return mask[row] >= 0.5; }
};

inline constexpr double kMaskKeep = 1.0;

std::vector<double> all_ones_mask(std::size_t n);

/// Validates mask length and returns the view.
MaskedSample masked(const Sample& sample, std::span<const double> mask);

struct Dataset {
  Schema schema;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
};

/// Per-sample schema conformance: row widths, cell kinds, base length,
/// sequence length bound, y in {+1,-1}, y_feat indices valid.
void validate_sample(const Sample& sample, const Schema& schema);
void validate_dataset(const Dataset& dataset);

// One JSON object per line:
//   {"x_seq": [[...row...], ...], "x_base": [...], "y": 1, "y_feat": [...]}
Dataset load_dataset_jsonl(const std::string& data_path,
                           const std::string& schema_path);
void save_dataset_jsonl(const Dataset& dataset, const std::string& data_path);

// CSV pair keyed by sample id. The sequence file has columns
// (sample_id, <seq columns...>); the base file has
// (sample_id, y, y_feat, <base values...>) with y_feat a semicolon-joined
// index list. Sample order follows first appearance in the base file.
Dataset load_dataset_csv(const std::string& seq_path,
                         const std::string& base_path,
                         const std::string& schema_path);

}  // namespace del
