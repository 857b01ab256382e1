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

#include "del/rule_net.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "del/error.hpp"

namespace del {

namespace {

void collect_leaves(const RuleNode& node, std::vector<LeafBinding>& out) {
  if (node.is_leaf()) {
    out.push_back(LeafBinding{node.measurement_id, node.direction});
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, out);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

CompiledRuleNet::CompiledRuleNet(RuleSet rules, std::vector<double> z,
                                 RuleNetConfig config)
    : rules_(std::move(rules)),
      config_(config),
      theta_(rules_.theta0),
      z_(std::move(z)) {
  if (z_.size() != rules_.measurement_count()) {
    throw ShapeError("z length does not match measurement count");
  }
  for (std::size_t k = 0; k < z_.size(); ++k) {
    if (!(z_[k] > 0.0) || !std::isfinite(z_[k])) {
      throw Error("normalization factor z[" + std::to_string(k) +
                  "] must be positive and finite");
    }
  }
  if (config_.softmin_temperature <= 0.0) {
    throw ConfigError("softmin_temperature must be positive");
  }
  collect_leaves(rules_.root, leaves_);
}

void CompiledRuleNet::set_theta(std::span<const double> theta) {
  if (theta.size() != theta_.size()) {
    throw ShapeError("theta length does not match measurement count");
  }
  for (double v : theta) {
    if (!std::isfinite(v)) throw Error("non-finite theta entry");
  }
  std::copy(theta.begin(), theta.end(), theta_.begin());
}

std::vector<std::size_t> CompiledRuleNet::unfrozen_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < theta_.size(); ++k) {
    if (!rules_.frozen[k]) idx.push_back(k);
  }
  return idx;
}

double CompiledRuleNet::leaf_score(double f, double theta, double z,
                                   LeafDirection direction) {
  const double margin = direction == LeafDirection::below ? (f - theta) / z
                                                          : (theta - f) / z;
  return std::tanh(margin);
}

namespace {

// Shared recursion over the tree in the violation-positive orientation:
// AND = max of children, OR = min. `Score` is double for the smooth net and
// int for the hard-sign variant.
template <typename Score, typename LeafFn>
Score eval_tree(const RuleNode& node, std::size_t& next_leaf, LeafFn&& leaf_fn) {
  if (node.is_leaf()) {
    return leaf_fn(node, next_leaf++);
  }
  const bool is_and = node.kind == RuleNode::Kind::logic_and;
  bool first = true;
  Score extreme{};
  for (const auto& child : node.children) {
    const Score s = eval_tree<Score>(child, next_leaf, leaf_fn);
    if (first || (is_and ? s > extreme : s < extreme)) extreme = s;
    first = false;
  }
  return extreme;
}

struct NodeEval {
  double score;
  std::vector<std::size_t> extreme_leaves;  // all leaves attaining the chain
  std::size_t routed_leaf;                  // lowest-index tie for gradients
};

NodeEval eval_with_trace(const RuleNode& node, std::size_t& next_leaf,
                         std::size_t& next_logic,
                         std::span<const double> leaf_scores,
                         std::vector<double>& node_scores) {
  if (node.is_leaf()) {
    const std::size_t id = next_leaf++;
    return NodeEval{leaf_scores[id], {id}, id};
  }
  const std::size_t logic_id = next_logic++;
  node_scores.push_back(0.0);  // reserve the preorder slot
  const bool is_and = node.kind == RuleNode::Kind::logic_and;
  bool first = true;
  NodeEval best{};
  for (const auto& child : node.children) {
    NodeEval sub =
        eval_with_trace(child, next_leaf, next_logic, leaf_scores, node_scores);
    if (first) {
      best = std::move(sub);
      first = false;
    } else if (sub.score == best.score) {
      best.extreme_leaves.insert(best.extreme_leaves.end(),
                                 sub.extreme_leaves.begin(),
                                 sub.extreme_leaves.end());
    } else if (is_and ? sub.score > best.score : sub.score < best.score) {
      best = std::move(sub);
    }
  }
  node_scores[logic_id] = best.score;
  return best;
}

}  // namespace

ForwardTrace CompiledRuleNet::forward(const EvalAllResult& f) const {
  return forward_with_theta(theta_, f);
}

ForwardTrace CompiledRuleNet::forward_with_theta(std::span<const double> theta,
                                                 const EvalAllResult& f) const {
  if (f.values.size() != theta_.size()) {
    throw ShapeError("f vector length does not match measurement count");
  }
  ForwardTrace trace;
  trace.f_values = f.values;
  trace.leaf_scores.resize(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const auto& leaf = leaves_[i];
    trace.leaf_scores[i] =
        leaf_score(f.values[leaf.measurement_id], theta[leaf.measurement_id],
                   z_[leaf.measurement_id], leaf.direction);
  }

  std::size_t next_leaf = 0;
  std::size_t next_logic = 0;
  NodeEval root = eval_with_trace(rules_.root, next_leaf, next_logic,
                                  trace.leaf_scores, trace.node_scores);
  trace.output = root.score;
  trace.predicted_label = root.score > 0.0 ? +1 : -1;
  std::sort(root.extreme_leaves.begin(), root.extreme_leaves.end());
  root.extreme_leaves.erase(
      std::unique(root.extreme_leaves.begin(), root.extreme_leaves.end()),
      root.extreme_leaves.end());
  trace.argmin_leaves = std::move(root.extreme_leaves);

  std::set<std::size_t> rows;
  for (std::size_t leaf_id : trace.argmin_leaves) {
    const auto& touched = f.touched.at(leaves_[leaf_id].measurement_id);
    rows.insert(touched.begin(), touched.end());
  }
  trace.critical_rows.assign(rows.begin(), rows.end());

  // Soft arg-extreme over leaves: softmax of violation scores, so the most
  // violated leaf carries the largest weight at any positive temperature.
  trace.responsibilities.resize(leaves_.size());
  const double tau = config_.softmin_temperature;
  double hi = -std::numeric_limits<double>::infinity();
  for (double s : trace.leaf_scores) hi = std::max(hi, s / tau);
  double norm = 0.0;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    trace.responsibilities[i] = std::exp(trace.leaf_scores[i] / tau - hi);
    norm += trace.responsibilities[i];
  }
  for (double& r : trace.responsibilities) r /= norm;
  return trace;
}

namespace {

// Gradient routing: the lowest-index leaf on the extreme chain. Recomputed
// on leaf scores directly so loss_and_grad does not depend on trace layout.
std::pair<double, std::size_t> routed_extreme(
    const RuleNode& node, std::size_t& next_leaf,
    std::span<const double> leaf_scores) {
  if (node.is_leaf()) {
    const std::size_t id = next_leaf++;
    return {leaf_scores[id], id};
  }
  const bool is_and = node.kind == RuleNode::Kind::logic_and;
  bool first = true;
  std::pair<double, std::size_t> best{0.0, 0};
  for (const auto& child : node.children) {
    const auto sub = routed_extreme(child, next_leaf, leaf_scores);
    if (first || (is_and ? sub.first > best.first : sub.first < best.first)) {
      best = sub;
      first = false;
    }
  }
  return best;
}

}  // namespace

double focal_loss(double p, int y, double gamma, double alpha) {
  const double pt = y == +1 ? p : 1.0 - p;
  return -alpha * std::pow(1.0 - pt, gamma) * std::log(pt);
}

LossGrad CompiledRuleNet::loss_and_grad(
    const EvalAllResult& f, int y, std::span<const std::size_t> y_feat) const {
  if (y != +1 && y != -1) throw Error("label must be +1 or -1");
  LossGrad out;
  out.trace = forward(f);
  out.dtheta.assign(theta_.size(), 0.0);

  const std::size_t n_leaves = leaves_.size();
  // dscore/dtheta per leaf.
  std::vector<double> dleaf_dtheta(n_leaves);
  for (std::size_t i = 0; i < n_leaves; ++i) {
    const auto& leaf = leaves_[i];
    const double s = out.trace.leaf_scores[i];
    const double sech2 = 1.0 - s * s;
    const double sign = leaf.direction == LeafDirection::below ? -1.0 : 1.0;
    dleaf_dtheta[i] = sign * sech2 / z_[leaf.measurement_id];
  }

  // Focal term through the hard min/max chain.
  const double slope = config_.sigmoid_slope;
  const double p = sigmoid(slope * out.trace.output);
  out.focal = focal_loss(p, y, config_.focal_gamma, config_.focal_alpha);
  const double pt = y == +1 ? p : 1.0 - p;
  const double gamma = config_.focal_gamma;
  const double alpha = config_.focal_alpha;
  double dfocal_dpt = -alpha * std::pow(1.0 - pt, gamma) / pt;
  if (gamma != 0.0) {
    dfocal_dpt += alpha * gamma * std::pow(1.0 - pt, gamma - 1.0) * std::log(pt);
  }
  const double dpt_dout = (y == +1 ? 1.0 : -1.0) * slope * p * (1.0 - p);
  const double dfocal_dout = dfocal_dpt * dpt_dout;

  std::size_t next_leaf = 0;
  const auto routed = routed_extreme(rules_.root, next_leaf, out.trace.leaf_scores);
  const std::size_t routed_leaf = routed.second;
  out.dtheta[leaves_[routed_leaf].measurement_id] +=
      dfocal_dout * dleaf_dtheta[routed_leaf];

  // Critical-feature cross entropy against the responsibility-weighted row
  // distribution. Leaves spread their responsibility uniformly over the rows
  // their measurement touched.
  out.critical_ce = 0.0;
  if (config_.critical_loss_weight != 0.0 && !y_feat.empty()) {
    const auto& resp = out.trace.responsibilities;
    std::vector<double> dce_dresp(n_leaves, 0.0);
    const double inv_feat = 1.0 / static_cast<double>(y_feat.size());
    for (std::size_t r : y_feat) {
      double q = 0.0;
      for (std::size_t i = 0; i < n_leaves; ++i) {
        const auto& touched = f.touched[leaves_[i].measurement_id];
        if (touched.empty()) continue;
        if (std::binary_search(touched.begin(), touched.end(), r)) {
          q += resp[i] / static_cast<double>(touched.size());
        }
      }
      out.critical_ce -= inv_feat * std::log(q + kCriticalEps);
      const double dce_dq = -inv_feat / (q + kCriticalEps);
      for (std::size_t i = 0; i < n_leaves; ++i) {
        const auto& touched = f.touched[leaves_[i].measurement_id];
        if (touched.empty()) continue;
        if (std::binary_search(touched.begin(), touched.end(), r)) {
          dce_dresp[i] += dce_dq / static_cast<double>(touched.size());
        }
      }
    }
    // Back through the softmax: dCE/dv_j = resp_j (g_j - sum_l g_l resp_l)/tau.
    double mean_g = 0.0;
    for (std::size_t i = 0; i < n_leaves; ++i) mean_g += dce_dresp[i] * resp[i];
    const double inv_tau = 1.0 / config_.softmin_temperature;
    const double w = config_.critical_loss_weight;
    for (std::size_t i = 0; i < n_leaves; ++i) {
      const double dce_dv = resp[i] * (dce_dresp[i] - mean_g) * inv_tau;
      out.dtheta[leaves_[i].measurement_id] += w * dce_dv * dleaf_dtheta[i];
    }
  }

  for (std::size_t k = 0; k < theta_.size(); ++k) {
    if (rules_.frozen[k]) out.dtheta[k] = 0.0;
  }
  out.loss = out.focal + config_.critical_loss_weight * out.critical_ce;
  return out;
}

double CompiledRuleNet::batch_objective(std::span<const BatchItem> batch) const {
  return batch_objective_with_theta(theta_, batch);
}

double CompiledRuleNet::batch_objective_with_theta(
    std::span<const double> theta, std::span<const BatchItem> batch) const {
  if (batch.empty()) throw Error("batch_objective: empty batch");
  double total = 0.0;
  for (const auto& item : batch) {
    std::size_t next_leaf = 0;
    std::vector<double> scores(leaves_.size());
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
      const auto& leaf = leaves_[i];
      scores[i] =
          leaf_score(item.f->values[leaf.measurement_id],
                     theta[leaf.measurement_id], z_[leaf.measurement_id],
                     leaf.direction);
    }
    const double out = eval_tree<double>(
        rules_.root, next_leaf,
        [&](const RuleNode&, std::size_t id) { return scores[id]; });
    total += out * static_cast<double>(item.y);
  }
  return total;
}

int CompiledRuleNet::hard_sign_label(std::span<const double> f_values) const {
  if (f_values.size() != theta_.size()) {
    throw ShapeError("f vector length does not match measurement count");
  }
  std::size_t next_leaf = 0;
  const int out = eval_tree<int>(
      rules_.root, next_leaf, [&](const RuleNode& leaf, std::size_t) {
        const double fk = f_values[leaf.measurement_id];
        const double tk = theta_[leaf.measurement_id];
        const double margin =
            leaf.direction == LeafDirection::below ? fk - tk : tk - fk;
        return margin > 0.0 ? 1 : (margin < 0.0 ? -1 : 0);
      });
  return out > 0 ? +1 : -1;
}

Explanation CompiledRuleNet::explain(const EvalAllResult& f) const {
  const ForwardTrace trace = forward(f);
  Explanation e;
  e.predicted_label = trace.predicted_label;
  e.output = trace.output;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const auto& leaf = leaves_[i];
    e.leaves.push_back(LeafExplanation{
        i, rules_.measurements[leaf.measurement_id].name, leaf.direction,
        f.values[leaf.measurement_id], theta_[leaf.measurement_id],
        z_[leaf.measurement_id], trace.leaf_scores[i]});
  }
  e.argmin_leaves = trace.argmin_leaves;
  e.critical_rows = trace.critical_rows;
  return e;
}

nlohmann::json explanation_to_json(const Explanation& e) {
  nlohmann::json leaves = nlohmann::json::array();
  for (const auto& leaf : e.leaves) {
    leaves.push_back(
        {{"leaf", leaf.leaf_id},
         {"measurement", leaf.measurement},
         {"direction",
          leaf.direction == LeafDirection::below ? "below" : "above"},
         {"f", leaf.f},
         {"theta", leaf.theta},
         {"z", leaf.z},
         {"score", leaf.score}});
  }
  return nlohmann::json{{"predicted_label", e.predicted_label},
                        {"output", e.output},
                        {"leaves", std::move(leaves)},
                        {"argmin_leaves", e.argmin_leaves},
                        {"critical_rows", e.critical_rows}};
}

std::vector<std::pair<double, double>> theta_search_bounds(
    std::span<const double> f_min, std::span<const double> f_max,
    std::span<const double> z) {
  if (f_min.size() != f_max.size() || f_min.size() != z.size()) {
    throw ShapeError("theta_search_bounds: length mismatch");
  }
  std::vector<std::pair<double, double>> bounds(f_min.size());
  for (std::size_t k = 0; k < f_min.size(); ++k) {
    bounds[k] = {f_min[k] - 0.1 * z[k], f_max[k] + 0.1 * z[k]};
  }
  return bounds;
}

}  // namespace del
