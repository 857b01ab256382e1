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

#include "del/link_search.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "del/error.hpp"

namespace del {

namespace {

constexpr std::uint64_t kSearchStream = 0x5331u;

/// Smooth prediction check used by both stages: correct when |y' - y| < 1.
bool prediction_correct(double output, int y) {
  return std::abs(output - static_cast<double>(y)) < 1.0;
}

double evaluate_output(const CompiledRuleNet& net, const Schema& schema,
                       const Sample& sample, std::span<const double> mask) {
  const EvalAllResult f =
      evaluate_all(net.rules().measurements, masked(sample, mask), schema);
  return net.forward(f).output;
}

}  // namespace

CandidatePath random_walk(const RowGraph& g, std::size_t start,
                          std::size_t length, Rng& rng) {
  if (g.n == 0) throw Error("random_walk: empty graph");
  if (start >= g.n) throw Error("random_walk: start out of range");
  std::vector<std::size_t> visited;
  visited.reserve(length);
  std::size_t current = start;
  while (visited.size() < length) {
    visited.push_back(current);
    if (visited.size() == length) break;
    const auto& adj = g.neighbors[current];
    if (adj.empty()) {
      current = static_cast<std::size_t>(rng.below(g.n));  // restart
    } else {
      current = adj[static_cast<std::size_t>(rng.below(adj.size()))];
    }
  }
  CandidatePath path;
  std::unordered_set<std::size_t> seen;
  for (std::size_t node : visited) {
    if (seen.insert(node).second) path.nodes.push_back(node);
  }
  return path;
}

SearchResult greedy_search(const PreparedSample& prepared,
                           std::span<const double> pre_mask,
                           const CompiledRuleNet& net, const Schema& schema,
                           const SearchConfig& config, Rng& rng) {
  if (config.chi < 1 || config.tau < 1) {
    throw ConfigError("greedy_search: chi and tau must be >= 1");
  }
  SearchResult result;
  const Sample& sample = *prepared.sample;
  const std::size_t n = sample.rows();
  if (n == 0) return result;
  if (pre_mask.size() != n) {
    throw ShapeError("greedy_search: pre-mask length mismatch");
  }

  // Predicted critical rows at the current theta, on the pre-masked sample.
  const EvalAllResult f0 =
      evaluate_all(net.rules().measurements, masked(sample, pre_mask), schema);
  const ForwardTrace trace = net.forward(f0);
  const std::vector<std::size_t>& predicted_feat = trace.critical_rows;

  // chi prefix lengths, uniform in [1, n].
  std::vector<std::size_t> steps(config.chi);
  for (auto& s : steps) {
    s = static_cast<std::size_t>(
        rng.uniform_int(1, static_cast<std::int64_t>(n)));
  }
  const std::size_t walk_length = *std::max_element(steps.begin(), steps.end());

  // tau candidate paths: random walk, amend with the predicted critical rows,
  // permute, deduplicate keeping the first occurrence.
  std::vector<CandidatePath> paths(config.tau);
  for (auto& path : paths) {
    const std::size_t start = static_cast<std::size_t>(rng.below(n));
    CandidatePath walk = random_walk(prepared.graph, start, walk_length, rng);
    walk.nodes.insert(walk.nodes.end(), predicted_feat.begin(),
                      predicted_feat.end());
    rng.shuffle(walk.nodes);
    std::unordered_set<std::size_t> seen;
    path.nodes.clear();
    for (std::size_t node : walk.nodes) {
      if (seen.insert(node).second) path.nodes.push_back(node);
    }
  }

  std::vector<double> candidate(n);
  for (std::size_t s : steps) {
    for (std::size_t k = 0; k < config.tau; ++k) {
      const auto& nodes = paths[k].nodes;
      const std::size_t drop = std::min(s, nodes.size());
      std::fill(candidate.begin(), candidate.end(), kMaskKeep);
      for (std::size_t i = 0; i < drop; ++i) candidate[nodes[i]] = 0.0;
      // Evaluate with the pre-mask composed in: rows the caller already
      // dropped stay dropped.
      std::vector<double> composed(n);
      for (std::size_t r = 0; r < n; ++r) {
        composed[r] = std::min(pre_mask[r], candidate[r]);
      }
      const double output = evaluate_output(net, schema, sample, composed);
      ++result.evaluations;
      if (prediction_correct(output, sample.y)) {
        result.found = true;
        result.mask = candidate;
        result.success_step = s;
        result.success_path = k;
        result.dropped_rows = drop;
        return result;
      }
    }
  }
  return result;
}

TargetBatch generate_targets(std::span<const PreparedSample* const> batch,
                             const CompiledRuleNet& net, const Schema& schema,
                             const AssessModel* assess, bool stage2,
                             const SearchConfig& config, std::uint64_t seed) {
  if (batch.empty()) throw Error("generate_targets: empty batch");
  if (stage2 && assess == nullptr) {
    throw Error("generate_targets: stage two requires an assess model");
  }
  TargetBatch out;
  out.per_sample.resize(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PreparedSample& prepared = *batch[i];
    const Sample& sample = *prepared.sample;
    const std::size_t n = sample.rows();
    TargetResult& target = out.per_sample[i];

    std::vector<double> pre_mask;
    double output;
    if (stage2) {
      pre_mask = assess->forward_mask(prepared.graph, prepared.features,
                                      prepared.base);
      output = net.forward(evaluate_all(net.rules().measurements,
                                        masked(sample, pre_mask), schema))
                   .output;
    } else {
      pre_mask = all_ones_mask(n);
      output = net.forward(prepared.raw_f).output;
    }

    if (prediction_correct(output, sample.y)) {
      ++out.n_correct;
      target.kind = stage2 ? TargetKind::self_mask : TargetKind::all_ones;
      target.mask = stage2 ? pre_mask : all_ones_mask(n);
      continue;
    }

    Rng rng(derive_seed(config.seed, kSearchStream, seed, i));
    const SearchResult searched =
        greedy_search(prepared, pre_mask, net, schema, config, rng);
    target.search_evaluations = searched.evaluations;
    if (searched.found) {
      ++out.n_searched;
      target.kind = TargetKind::searched;
      target.mask = searched.mask;
    } else {
      ++out.n_excluded;
      target.kind = TargetKind::excluded;
    }
  }
  return out;
}

}  // namespace del
