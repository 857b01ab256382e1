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
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "del/measure.hpp"
#include "del/rules.hpp"

namespace del {

struct RuleNetConfig {
  /// Temperature of the soft arg-extreme over leaf scores that produces
  /// differentiable per-leaf responsibilities.
  double softmin_temperature = 0.25;
  double focal_gamma = 2.0;
  double focal_alpha = 0.25;
  /// Output-to-probability map p = sigmoid(slope * output).
  double sigmoid_slope = 3.0;
  double critical_loss_weight = 1.0;
};

/// Smoothing floor added to the predicted row distribution inside the
/// critical-feature cross entropy.
inline constexpr double kCriticalEps = 1e-9;

/// Trace of one smooth evaluation. Scores use the violation-positive
/// orientation throughout: a below-leaf scores tanh((f - theta) / z), so a
/// positive score means the constraint is broken and the root output's sign
/// predicts the label directly (+1 = failed at least one constraint).
struct ForwardTrace {
  std::vector<double> f_values;
  std::vector<double> leaf_scores;   // per leaf, preorder
  std::vector<double> node_scores;   // per logic node, preorder
  double output = 0.0;               // in (-1, 1)
  int predicted_label = -1;          // sign(output); 0 counts as complying
  /// Leaves attaining the extreme chain down from the root: the leaves the
  /// paper reads the prediction (and its critical features) from.
  std::vector<std::size_t> argmin_leaves;
  /// Union of rows touched by the argmin leaves, ascending.
  std::vector<std::size_t> critical_rows;
  /// Soft arg-extreme weights per leaf; nonnegative, sum to 1.
  std::vector<double> responsibilities;
};

struct LossGrad {
  double loss = 0.0;
  double focal = 0.0;
  double critical_ce = 0.0;
  std::vector<double> dtheta;  // per measurement id; frozen entries are 0
  ForwardTrace trace;
};

struct LeafBinding {
  std::size_t measurement_id;
  LeafDirection direction;
};

struct LeafExplanation {
  std::size_t leaf_id;
  std::string measurement;
  LeafDirection direction;
  double f;
  double theta;
  double z;
  double score;
};

struct Explanation {
  int predicted_label;
  double output;
  std::vector<LeafExplanation> leaves;
  std::vector<std::size_t> argmin_leaves;
  std::vector<std::size_t> critical_rows;
};

nlohmann::json explanation_to_json(const Explanation& e);

/// One (f values, label) batch entry for the global-search objective.
struct BatchItem {
  const EvalAllResult* f;
  int y;
};

/// The rule tree compiled into a differentiable scorer with trainable
/// thresholds. The tree and measurement table are immutable; only theta
/// moves under training, and entries flagged frozen never do.
class CompiledRuleNet {
 public:
  /// z entries must be positive, one per measurement.
  CompiledRuleNet(RuleSet rules, std::vector<double> z, RuleNetConfig config = {});

  const RuleSet& rules() const { return rules_; }
  const RuleNetConfig& config() const { return config_; }
  std::size_t measurement_count() const { return theta_.size(); }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::span<const LeafBinding> leaves() const { return leaves_; }

  std::span<const double> theta() const { return theta_; }
  void set_theta(std::span<const double> theta);
  std::span<const double> z() const { return z_; }
  const std::vector<bool>& frozen() const { return rules_.frozen; }
  std::vector<std::size_t> unfrozen_indices() const;

  /// Smooth leaf score in (-1, 1), violation-positive.
  static double leaf_score(double f, double theta, double z,
                           LeafDirection direction);

  ForwardTrace forward(const EvalAllResult& f) const;
  ForwardTrace forward_with_theta(std::span<const double> theta,
                                  const EvalAllResult& f) const;

  /// Focal loss on the smooth label plus the responsibility-weighted
  /// critical-feature cross entropy, with the analytic gradient in theta.
  /// Min/max subgradients route to the extreme child, lowest index on ties.
  LossGrad loss_and_grad(const EvalAllResult& f, int y,
                         std::span<const std::size_t> y_feat) const;

  /// Sum over the batch of output * y: positive when predictions agree with
  /// labels, the empirical fit the global optimizer maximizes.
  double batch_objective(std::span<const BatchItem> batch) const;
  double batch_objective_with_theta(std::span<const double> theta,
                                    std::span<const BatchItem> batch) const;

  /// Hard variant: tanh replaced by sign. Agrees with classify_boolean
  /// whenever no measurement sits exactly on its threshold.
  int hard_sign_label(std::span<const double> f_values) const;

  Explanation explain(const EvalAllResult& f) const;

 private:
  RuleSet rules_;
  RuleNetConfig config_;
  std::vector<double> theta_;
  std::vector<double> z_;
  std::vector<LeafBinding> leaves_;  // preorder
};

/// Per-measurement search box [min f - 0.1 z, max f + 0.1 z] derived from
/// training-data measurement ranges.
std::vector<std::pair<double, double>> theta_search_bounds(
    std::span<const double> f_min, std::span<const double> f_max,
    std::span<const double> z);

/// Focal loss of a predicted positive-class probability p against y in
/// {+1,-1}; alpha scales the whole term, so gamma=0, alpha=1 reduces to
/// plain binary cross entropy.
double focal_loss(double p, int y, double gamma, double alpha);

}  // namespace del
