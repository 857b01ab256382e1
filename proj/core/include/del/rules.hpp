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

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "del/sample.hpp"
#include "del/schema.hpp"

namespace del {

enum class Cmp { equals, less_than, greater_than };

/// One conjunctive filter clause over a sequence column.
struct Predicate {
  std::string column;
  Cmp cmp = Cmp::equals;
  Value literal;

  bool operator==(const Predicate&) const = default;
};

enum class Agg { count, max };

/// An aggregation query over predicate-filtered rows of x_seq.
struct Measurement {
  std::string name;           // source-level identifier
  std::size_t id = 0;         // contiguous 0..K-1 in declaration order
  Agg agg = Agg::count;
  std::string target_column;  // required for max, empty for count
  std::vector<Predicate> predicates;

  bool operator==(const Measurement&) const = default;
};

enum class LeafDirection { below, above };

/// AND/OR tree over threshold leaves. Value type; leaves reference
/// measurements by id.
struct RuleNode {
  enum class Kind { leaf, logic_and, logic_or };

  Kind kind = Kind::leaf;
  std::size_t measurement_id = 0;                  // leaf only
  LeafDirection direction = LeafDirection::below;  // leaf only
  std::vector<RuleNode> children;                  // logic only

  static RuleNode leaf(std::size_t measurement_id,
                       LeafDirection direction = LeafDirection::below) {
    RuleNode n;
    n.kind = Kind::leaf;
    n.measurement_id = measurement_id;
    n.direction = direction;
    return n;
  }
  static RuleNode logic(Kind kind, std::vector<RuleNode> children) {
    RuleNode n;
    n.kind = kind;
    n.children = std::move(children);
    return n;
  }

  bool is_leaf() const { return kind == Kind::leaf; }
  bool operator==(const RuleNode&) const = default;
};

/// A parsed rule file: the tree, the measurement table, the expert initial
/// thresholds, and the per-measurement frozen flags.
struct RuleSet {
  std::string name = "R";
  bool cnf = false;
  RuleNode root;
  std::vector<Measurement> measurements;
  std::vector<double> theta0;  // per measurement id
  std::vector<bool> frozen;    // per measurement id

  std::size_t measurement_count() const { return measurements.size(); }
  std::size_t leaf_count() const;

  bool operator==(const RuleSet&) const = default;
};

/// Parses DSL source. Grammar (line breaks insignificant):
///
///   rule <name> [cnf] { <node> }
///   <node>    := and { <node>+ } | or { <node>+ }
///              | leaf <measure> (below|above) <number> [frozen]
///   measure <name> = count [where <preds>]
///   measure <name> = max(<column>) [where <preds>]
///   <preds>   := <pred> (&& <pred>)*
///   <pred>    := <column> == <literal> | <column> < <number>
///              | <column> > <number>
///
/// `#` starts a comment. Throws ParseError with line/column on bad syntax,
/// dangling measurement references, duplicate declarations, empty logic
/// nodes, or a CNF flag on a non-CNF tree.
RuleSet parse_rules(const std::string& text);

/// Canonical DSL text; parse(serialize(rs)) reproduces rs exactly.
std::string serialize_rules(const RuleSet& rules);

/// JSON mirror of the rule file; both formats round-trip.
nlohmann::json rules_to_json(const RuleSet& rules);
RuleSet rules_from_json(const nlohmann::json& j);

/// Dispatches on extension: `.rules.json`/`.json` as JSON, otherwise DSL.
RuleSet load_rules_file(const std::string& path);
void save_rules_file(const RuleSet& rules, const std::string& path);

/// Column existence / kind checks against a dataset schema.
void validate_rules(const RuleSet& rules, const Schema& schema);

/// Verifies the AND-of-(leaves-or-ORs-of-leaves) shape.
bool is_cnf_tree(const RuleNode& root);

struct BooleanResult {
  int label = -1;  // +1 failed, -1 complies
  /// Leaf ids (preorder) whose violation causes the failure; empty iff the
  /// tree complies when the tree is CNF.
  std::vector<std::size_t> violated_leaves;
};

/// Hard rule application: a below-leaf holds iff f < theta (strictly),
/// an above-leaf iff f > theta. Complying samples get label -1.
BooleanResult classify_boolean(const RuleSet& rules,
                               std::span<const double> theta,
                               const MaskedSample& sample,
                               const Schema& schema);
BooleanResult classify_boolean(const RuleSet& rules,
                               std::span<const double> theta,
                               const Sample& sample, const Schema& schema);

}  // namespace del
