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

#include "del/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "del/error.hpp"

namespace del {

bool RowGraph::has_edge(std::size_t i, std::size_t j) const {
  const auto& adj = neighbors[i];
  return std::binary_search(adj.begin(), adj.end(),
                            static_cast<std::uint32_t>(j));
}

RowGraph build_graph(const Sample& sample, const Schema& schema,
                     double distance_threshold) {
  RowGraph g;
  g.n = sample.rows();
  g.neighbors.resize(g.n);
  if (g.n == 0) return g;

  const std::size_t pos_col = schema.position_column();
  std::vector<double> pos(g.n);
  for (std::size_t r = 0; r < g.n; ++r) {
    pos[r] = as_number(sample.x_seq[r][pos_col]);
  }

  // Sort rows by position and sweep a window; edge iff |pos_i - pos_j| is
  // strictly below the threshold.
  std::vector<std::size_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
  for (std::size_t a = 0; a < g.n; ++a) {
    for (std::size_t b = a + 1; b < g.n; ++b) {
      const std::size_t i = order[a];
      const std::size_t j = order[b];
      if (!(pos[j] - pos[i] < distance_threshold)) break;
      g.neighbors[i].push_back(static_cast<std::uint32_t>(j));
      g.neighbors[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  for (auto& adj : g.neighbors) std::sort(adj.begin(), adj.end());
  return g;
}

Matrix gcn_propagate(const RowGraph& g, const Matrix& x) {
  if (x.rows() != g.n) {
    throw ShapeError("gcn_propagate: feature rows do not match graph size");
  }
  Matrix out(x.rows(), x.cols());
  if (g.n == 0) return out;
  std::vector<double> inv_sqrt_deg(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
  }
  for (std::size_t i = 0; i < g.n; ++i) {
    auto orow = out.row(i);
    const auto self = x.row(i);
    const double self_w = inv_sqrt_deg[i] * inv_sqrt_deg[i];
    for (std::size_t c = 0; c < x.cols(); ++c) orow[c] = self_w * self[c];
    for (std::uint32_t j : g.neighbors[i]) {
      const double w = inv_sqrt_deg[i] * inv_sqrt_deg[j];
      const auto nrow = x.row(j);
      for (std::size_t c = 0; c < x.cols(); ++c) orow[c] += w * nrow[c];
    }
  }
  return out;
}

}  // namespace del
