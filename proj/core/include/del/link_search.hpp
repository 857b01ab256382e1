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
#include <optional>
#include <vector>

#include "del/prepared.hpp"
#include "del/rng.hpp"
#include "del/rule_net.hpp"

namespace del {

struct SearchConfig {
  std::size_t chi = 15;  // greedy search steps
  std::size_t tau = 10;  // paths tried per step
  std::uint64_t seed = 0;
};

/// An ordered list of distinct row indices; walks are deduplicated at
/// finalization, keeping the first occurrence.
struct CandidatePath {
  std::vector<std::size_t> nodes;
};

/// Uniform-neighbor walk of `length` recorded nodes starting at `start`.
/// An isolated node restarts the walk from a fresh uniformly random row.
CandidatePath random_walk(const RowGraph& g, std::size_t start,
                          std::size_t length, Rng& rng);

struct SearchResult {
  bool found = false;
  /// All ones except the zeroed prefix of the successful path. Candidates
  /// are verified with the pre-mask composed in, so on an all-ones pre-mask
  /// applying this mask alone flips the prediction to the label.
  std::vector<double> mask;
  std::size_t evaluations = 0;  // rule-network evaluations, <= chi * tau
  std::size_t success_step = 0;
  std::size_t success_path = 0;
  std::size_t dropped_rows = 0;
};

/// Greedy target-mask search for a misclassified sample: classify to get the
/// predicted critical rows, draw chi prefix lengths, walk tau paths amended
/// with the critical rows, then drop path prefixes until the rule network
/// predicts the label. Returns found=false after chi*tau failed evaluations
/// or on an empty sequence.
SearchResult greedy_search(const PreparedSample& prepared,
                           std::span<const double> pre_mask,
                           const CompiledRuleNet& net, const Schema& schema,
                           const SearchConfig& config, Rng& rng);

enum class TargetKind { all_ones, self_mask, searched, excluded };

struct TargetResult {
  TargetKind kind = TargetKind::excluded;
  std::vector<double> mask;
  std::size_t search_evaluations = 0;
};

struct TargetBatch {
  std::vector<TargetResult> per_sample;
  std::size_t n_correct = 0;
  std::size_t n_searched = 0;
  std::size_t n_excluded = 0;
};

/// Target-mask generation for one assess-model batch. In stage two the
/// current model H pre-masks every sample before the correctness check;
/// correctly predicted samples self-target (H's own mask), in stage one they
/// target the all-ones vector. Misclassified samples are searched; samples
/// whose search fails are excluded from the training batch. A smooth
/// prediction counts as correct when |output - y| < 1.
TargetBatch generate_targets(std::span<const PreparedSample* const> batch,
                             const CompiledRuleNet& net, const Schema& schema,
                             const AssessModel* assess, bool stage2,
                             const SearchConfig& config, std::uint64_t seed);

}  // namespace del
