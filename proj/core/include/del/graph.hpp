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
#include <vector>

#include "del/matrix.hpp"
#include "del/sample.hpp"

namespace del {

/// Undirected row graph over an observation sequence. Edges connect rows
/// whose `position` values are strictly closer than the distance threshold;
/// no self-edges are stored (normalization adds self-loops).
struct RowGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::uint32_t>> neighbors;  // sorted, symmetric

  std::size_t degree(std::size_t i) const { return neighbors[i].size(); }
  bool has_edge(std::size_t i, std::size_t j) const;
};

RowGraph build_graph(const Sample& sample, const Schema& schema,
                     double distance_threshold);

/// One graph-convolution propagation: X -> D^{-1/2} (A + I) D^{-1/2} X with
/// D the degree matrix of A + I. Symmetric, so it is its own transpose in
/// backpropagation.
Matrix gcn_propagate(const RowGraph& g, const Matrix& x);

}  // namespace del
