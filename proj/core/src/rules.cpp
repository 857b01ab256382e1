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

#include "del/rules.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "del/error.hpp"
#include "del/measure.hpp"

namespace del {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

enum class Tok {
  identifier,
  number,
  string,
  lbrace,
  rbrace,
  lparen,
  rparen,
  assign,      // =
  eq,          // ==
  lt,          // <
  gt,          // >
  amp_amp,     // &&
  end,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= src_.size()) {
      current_.kind = Tok::end;
      current_.text = "<end of input>";
      return;
    }
    const char ch = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string word;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        word.push_back(src_[pos_]);
        bump();
      }
      current_.kind = Tok::identifier;
      current_.text = std::move(word);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' ||
        ch == '+' || ch == '.') {
      lex_number();
      return;
    }
    if (ch == '"') {
      lex_string();
      return;
    }
    bump();
    switch (ch) {
      case '{': current_.kind = Tok::lbrace; current_.text = "{"; return;
      case '}': current_.kind = Tok::rbrace; current_.text = "}"; return;
      case '(': current_.kind = Tok::lparen; current_.text = "("; return;
      case ')': current_.kind = Tok::rparen; current_.text = ")"; return;
      case '<': current_.kind = Tok::lt; current_.text = "<"; return;
      case '>': current_.kind = Tok::gt; current_.text = ">"; return;
      case '=':
        if (pos_ < src_.size() && src_[pos_] == '=') {
          bump();
          current_.kind = Tok::eq;
          current_.text = "==";
        } else {
          current_.kind = Tok::assign;
          current_.text = "=";
        }
        return;
      case '&':
        if (pos_ < src_.size() && src_[pos_] == '&') {
          bump();
          current_.kind = Tok::amp_amp;
          current_.text = "&&";
          return;
        }
        throw ParseError("stray `&`", line_, column_);
      default:
        throw ParseError(std::string("unexpected character `") + ch + "`",
                         current_.line, current_.column);
    }
  }

  void lex_number() {
    const int line = line_;
    const int column = column_;
    std::string text;
    auto accept = [&](auto pred) {
      while (pos_ < src_.size() && pred(src_[pos_])) {
        text.push_back(src_[pos_]);
        bump();
      }
    };
    if (src_[pos_] == '-' || src_[pos_] == '+') {
      text.push_back(src_[pos_]);
      bump();
    }
    auto digit = [](char c) {
      return std::isdigit(static_cast<unsigned char>(c)) != 0;
    };
    accept(digit);
    if (pos_ < src_.size() && src_[pos_] == '.') {
      text.push_back('.');
      bump();
      accept(digit);
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      text.push_back(src_[pos_]);
      bump();
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
        text.push_back(src_[pos_]);
        bump();
      }
      accept(digit);
    }
    try {
      std::size_t used = 0;
      current_.number = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ParseError("malformed number `" + text + "`", line, column);
    }
    current_.kind = Tok::number;
    current_.text = std::move(text);
    current_.line = line;
    current_.column = column;
  }

  void lex_string() {
    const int line = line_;
    const int column = column_;
    bump();  // opening quote
    std::string text;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\n') {
        throw ParseError("unterminated string literal", line, column);
      }
      text.push_back(src_[pos_]);
      bump();
    }
    if (pos_ >= src_.size()) {
      throw ParseError("unterminated string literal", line, column);
    }
    bump();  // closing quote
    current_.kind = Tok::string;
    current_.text = std::move(text);
    current_.line = line;
    current_.column = column;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct PendingLeaf {
  RuleNode* node;
  std::string measurement;
  double theta;
  bool frozen;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  RuleSet run() {
    bool saw_rule = false;
    while (lex_.peek().kind != Tok::end) {
      const Token head = expect(Tok::identifier, "`rule` or `measure`");
      if (head.text == "rule") {
        if (saw_rule) {
          throw ParseError("multiple rule declarations", head.line,
                           head.column);
        }
        saw_rule = true;
        parse_rule();
      } else if (head.text == "measure") {
        parse_measure();
      } else {
        throw ParseError("expected `rule` or `measure`, got `" + head.text +
                             "`",
                         head.line, head.column);
      }
    }
    if (!saw_rule) throw ParseError("no rule declaration", 1, 1);
    resolve();
    return std::move(rules_);
  }

 private:
  Token expect(Tok kind, const char* what) {
    const Token t = lex_.take();
    if (t.kind != kind) {
      throw ParseError("expected " + std::string(what) + ", got `" + t.text +
                           "`",
                       t.line, t.column);
    }
    return t;
  }

  void parse_rule() {
    rules_.name = expect(Tok::identifier, "rule name").text;
    if (lex_.peek().kind == Tok::identifier && lex_.peek().text == "cnf") {
      lex_.take();
      rules_.cnf = true;
    }
    expect(Tok::lbrace, "`{`");
    rules_.root = parse_node();
    expect(Tok::rbrace, "`}`");
  }

  RuleNode parse_node() {
    const Token head = expect(Tok::identifier, "`and`, `or` or `leaf`");
    if (head.text == "and" || head.text == "or") {
      RuleNode node;
      node.kind = head.text == "and" ? RuleNode::Kind::logic_and
                                     : RuleNode::Kind::logic_or;
      expect(Tok::lbrace, "`{`");
      while (lex_.peek().kind != Tok::rbrace) {
        node.children.push_back(parse_node());
      }
      lex_.take();  // rbrace
      if (node.children.empty()) {
        throw ParseError("empty logic node", head.line, head.column);
      }
      return node;
    }
    if (head.text == "leaf") {
      RuleNode node;
      node.kind = RuleNode::Kind::leaf;
      const Token name = expect(Tok::identifier, "measurement name");
      const Token dir = expect(Tok::identifier, "`below` or `above`");
      if (dir.text == "below") {
        node.direction = LeafDirection::below;
      } else if (dir.text == "above") {
        node.direction = LeafDirection::above;
      } else {
        throw ParseError("expected `below` or `above`, got `" + dir.text + "`",
                         dir.line, dir.column);
      }
      const Token theta = expect(Tok::number, "initial threshold");
      bool frozen = false;
      if (lex_.peek().kind == Tok::identifier && lex_.peek().text == "frozen") {
        lex_.take();
        frozen = true;
      }
      pending_.push_back(PendingLeaf{nullptr, name.text, theta.number, frozen,
                                     name.line, name.column});
      node.measurement_id = pending_.size() - 1;  // provisional, fixed later
      return node;
    }
    throw ParseError("expected `and`, `or` or `leaf`, got `" + head.text + "`",
                     head.line, head.column);
  }

  void parse_measure() {
    Measurement m;
    const Token name = expect(Tok::identifier, "measurement name");
    m.name = name.text;
    if (declared_.count(m.name) != 0) {
      throw ParseError("duplicate measurement `" + m.name + "`", name.line,
                       name.column);
    }
    expect(Tok::assign, "`=`");
    const Token agg = expect(Tok::identifier, "`count` or `max`");
    if (agg.text == "count") {
      m.agg = Agg::count;
    } else if (agg.text == "max") {
      m.agg = Agg::max;
      expect(Tok::lparen, "`(`");
      m.target_column = expect(Tok::identifier, "target column").text;
      expect(Tok::rparen, "`)`");
    } else {
      throw ParseError("unknown aggregation `" + agg.text + "`", agg.line,
                       agg.column);
    }
    if (lex_.peek().kind == Tok::identifier && lex_.peek().text == "where") {
      lex_.take();
      for (;;) {
        m.predicates.push_back(parse_predicate());
        if (lex_.peek().kind == Tok::amp_amp) {
          lex_.take();
          continue;
        }
        break;
      }
    }
    m.id = rules_.measurements.size();
    declared_.emplace(m.name, m.id);
    rules_.measurements.push_back(std::move(m));
  }

  Predicate parse_predicate() {
    Predicate p;
    p.column = expect(Tok::identifier, "column name").text;
    const Token op = lex_.take();
    switch (op.kind) {
      case Tok::eq: {
        p.cmp = Cmp::equals;
        const Token lit = lex_.take();
        if (lit.kind == Tok::number) {
          p.literal = lit.number;
        } else if (lit.kind == Tok::string) {
          p.literal = lit.text;
        } else {
          throw ParseError("expected literal after `==`, got `" + lit.text +
                               "`",
                           lit.line, lit.column);
        }
        return p;
      }
      case Tok::lt:
        p.cmp = Cmp::less_than;
        p.literal = expect(Tok::number, "number").number;
        return p;
      case Tok::gt:
        p.cmp = Cmp::greater_than;
        p.literal = expect(Tok::number, "number").number;
        return p;
      default:
        throw ParseError("expected `==`, `<` or `>`, got `" + op.text + "`",
                         op.line, op.column);
    }
  }

  // Rewrites provisional leaf tags into measurement ids, collects theta and
  // frozen flags, and rejects dangling or inconsistent references.
  void resolve() {
    const std::size_t K = rules_.measurements.size();
    rules_.theta0.assign(K, 0.0);
    rules_.frozen.assign(K, false);
    std::vector<bool> theta_set(K, false);
    std::vector<bool> referenced(K, false);

    rewrite(rules_.root, [&](RuleNode& leaf) {
      const PendingLeaf& pending = pending_.at(leaf.measurement_id);
      const auto it = declared_.find(pending.measurement);
      if (it == declared_.end()) {
        throw ParseError("unknown measurement " + pending.measurement,
                         pending.line, pending.column);
      }
      const std::size_t id = it->second;
      leaf.measurement_id = id;
      referenced[id] = true;
      if (theta_set[id]) {
        if (rules_.theta0[id] != pending.theta) {
          throw ParseError("conflicting initial threshold for " +
                               pending.measurement,
                           pending.line, pending.column);
        }
        if (rules_.frozen[id] != pending.frozen) {
          throw ParseError("conflicting frozen flag for " +
                               pending.measurement,
                           pending.line, pending.column);
        }
      } else {
        theta_set[id] = true;
        rules_.theta0[id] = pending.theta;
        rules_.frozen[id] = pending.frozen;
      }
    });

    for (std::size_t k = 0; k < K; ++k) {
      if (!referenced[k]) {
        throw ParseError("measurement " + rules_.measurements[k].name +
                             " is declared but never referenced",
                         1, 1);
      }
      if (!std::isfinite(rules_.theta0[k])) {
        throw ParseError("non-finite initial threshold for " +
                             rules_.measurements[k].name,
                         1, 1);
      }
    }
    if (rules_.cnf && !is_cnf_tree(rules_.root)) {
      throw ParseError("rule is flagged cnf but the tree is not an AND of "
                       "leaves or ORs of leaves",
                       1, 1);
    }
  }

  template <typename Fn>
  static void rewrite(RuleNode& node, Fn&& fn) {
    if (node.is_leaf()) {
      fn(node);
      return;
    }
    for (auto& child : node.children) rewrite(child, fn);
  }

  Lexer lex_;
  RuleSet rules_;
  std::vector<PendingLeaf> pending_;
  std::map<std::string, std::size_t> declared_;
};

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v) {
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

void serialize_node(const RuleSet& rules, const RuleNode& node,
                    std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (node.is_leaf()) {
    const auto& m = rules.measurements.at(node.measurement_id);
    out << pad << "leaf " << m.name << ' '
        << (node.direction == LeafDirection::below ? "below" : "above") << ' '
        << format_double(rules.theta0.at(node.measurement_id));
    if (rules.frozen.at(node.measurement_id)) out << " frozen";
    out << '\n';
    return;
  }
  out << pad << (node.kind == RuleNode::Kind::logic_and ? "and" : "or")
      << " {\n";
  for (const auto& child : node.children) {
    serialize_node(rules, child, out, indent + 1);
  }
  out << pad << "}\n";
}

void serialize_predicate(const Predicate& p, std::ostream& out) {
  out << p.column << ' ';
  switch (p.cmp) {
    case Cmp::equals:
      out << "== ";
      if (is_numeric(p.literal)) {
        out << format_double(as_number(p.literal));
      } else {
        out << '"' << as_category(p.literal) << '"';
      }
      break;
    case Cmp::less_than:
      out << "< " << format_double(as_number(p.literal));
      break;
    case Cmp::greater_than:
      out << "> " << format_double(as_number(p.literal));
      break;
  }
}

std::size_t count_leaves(const RuleNode& node) {
  if (node.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& child : node.children) n += count_leaves(child);
  return n;
}

}  // namespace

std::size_t RuleSet::leaf_count() const { return count_leaves(root); }

RuleSet parse_rules(const std::string& text) { return Parser(text).run(); }

std::string serialize_rules(const RuleSet& rules) {
  std::ostringstream out;
  out << "rule " << rules.name;
  if (rules.cnf) out << " cnf";
  out << " {\n";
  serialize_node(rules, rules.root, out, 1);
  out << "}\n\n";
  for (const auto& m : rules.measurements) {
    out << "measure " << m.name << " = ";
    if (m.agg == Agg::count) {
      out << "count";
    } else {
      out << "max(" << m.target_column << ")";
    }
    if (!m.predicates.empty()) {
      out << " where ";
      for (std::size_t i = 0; i < m.predicates.size(); ++i) {
        if (i != 0) out << " && ";
        serialize_predicate(m.predicates[i], out);
      }
    }
    out << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json node_to_json(const RuleSet& rules, const RuleNode& node) {
  if (node.is_leaf()) {
    return nlohmann::json{
        {"leaf", rules.measurements.at(node.measurement_id).name},
        {"direction",
         node.direction == LeafDirection::below ? "below" : "above"}};
  }
  nlohmann::json children = nlohmann::json::array();
  for (const auto& child : node.children) {
    children.push_back(node_to_json(rules, child));
  }
  return nlohmann::json{
      {"op", node.kind == RuleNode::Kind::logic_and ? "and" : "or"},
      {"children", std::move(children)}};
}

RuleNode node_from_json(const nlohmann::json& j,
                        const std::map<std::string, std::size_t>& ids) {
  if (j.contains("leaf")) {
    const std::string name = j.at("leaf").get<std::string>();
    const auto it = ids.find(name);
    if (it == ids.end()) {
      throw Error("unknown measurement " + name);
    }
    LeafDirection dir = LeafDirection::below;
    if (j.contains("direction") && j.at("direction") == "above") {
      dir = LeafDirection::above;
    }
    return RuleNode::leaf(it->second, dir);
  }
  const std::string op = j.at("op").get<std::string>();
  RuleNode::Kind kind;
  if (op == "and") {
    kind = RuleNode::Kind::logic_and;
  } else if (op == "or") {
    kind = RuleNode::Kind::logic_or;
  } else {
    throw Error("unknown logic op `" + op + "`");
  }
  std::vector<RuleNode> children;
  for (const auto& child : j.at("children")) {
    children.push_back(node_from_json(child, ids));
  }
  if (children.empty()) throw Error("empty logic node");
  return RuleNode::logic(kind, std::move(children));
}

}  // namespace

nlohmann::json rules_to_json(const RuleSet& rules) {
  nlohmann::json measurements = nlohmann::json::array();
  for (const auto& m : rules.measurements) {
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : m.predicates) {
      nlohmann::json lit;
      if (is_numeric(p.literal)) {
        lit = as_number(p.literal);
      } else {
        lit = as_category(p.literal);
      }
      const char* cmp = p.cmp == Cmp::equals        ? "=="
                        : p.cmp == Cmp::less_than   ? "<"
                                                    : ">";
      preds.push_back(
          {{"column", p.column}, {"cmp", cmp}, {"value", std::move(lit)}});
    }
    nlohmann::json entry = {{"name", m.name}, {"where", std::move(preds)}};
    if (m.agg == Agg::count) {
      entry["agg"] = "count";
    } else {
      entry["agg"] = "max";
      entry["column"] = m.target_column;
    }
    measurements.push_back(std::move(entry));
  }
  return nlohmann::json{{"rule",
                         {{"name", rules.name},
                          {"cnf", rules.cnf},
                          {"tree", node_to_json(rules, rules.root)}}},
                        {"measurements", std::move(measurements)},
                        {"theta", rules.theta0},
                        {"frozen", rules.frozen}};
}

RuleSet rules_from_json(const nlohmann::json& j) {
  RuleSet rules;
  std::map<std::string, std::size_t> ids;
  for (const auto& entry : j.at("measurements")) {
    Measurement m;
    m.name = entry.at("name").get<std::string>();
    if (ids.count(m.name) != 0) {
      throw Error("duplicate measurement `" + m.name + "`");
    }
    const std::string agg = entry.at("agg").get<std::string>();
    if (agg == "count") {
      m.agg = Agg::count;
    } else if (agg == "max") {
      m.agg = Agg::max;
      m.target_column = entry.at("column").get<std::string>();
    } else {
      throw Error("unknown aggregation `" + agg + "`");
    }
    if (entry.contains("where")) {
      for (const auto& pj : entry.at("where")) {
        Predicate p;
        p.column = pj.at("column").get<std::string>();
        const std::string cmp = pj.at("cmp").get<std::string>();
        if (cmp == "==") {
          p.cmp = Cmp::equals;
        } else if (cmp == "<") {
          p.cmp = Cmp::less_than;
        } else if (cmp == ">") {
          p.cmp = Cmp::greater_than;
        } else {
          throw Error("unknown comparison `" + cmp + "`");
        }
        const auto& value = pj.at("value");
        if (value.is_string()) {
          p.literal = value.get<std::string>();
        } else {
          p.literal = value.get<double>();
        }
        m.predicates.push_back(std::move(p));
      }
    }
    m.id = rules.measurements.size();
    ids.emplace(m.name, m.id);
    rules.measurements.push_back(std::move(m));
  }
  const auto& rj = j.at("rule");
  rules.name = rj.at("name").get<std::string>();
  rules.cnf = rj.value("cnf", false);
  rules.root = node_from_json(rj.at("tree"), ids);
  rules.theta0 = j.at("theta").get<std::vector<double>>();
  rules.frozen = j.value("frozen", std::vector<bool>(ids.size(), false));
  if (rules.theta0.size() != rules.measurements.size() ||
      rules.frozen.size() != rules.measurements.size()) {
    throw Error("theta/frozen length does not match measurement count");
  }
  if (rules.cnf && !is_cnf_tree(rules.root)) {
    throw Error("rule is flagged cnf but the tree is not in CNF shape");
  }
  return rules;
}

RuleSet load_rules_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rule file `" + path + "`");
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return rules_from_json(nlohmann::json::parse(buffer.str()));
  }
  return parse_rules(buffer.str());
}

void save_rules_file(const RuleSet& rules, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write rule file `" + path + "`");
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    out << rules_to_json(rules).dump(2) << "\n";
  } else {
    out << serialize_rules(rules);
  }
}

void validate_rules(const RuleSet& rules, const Schema& schema) {
  for (const auto& m : rules.measurements) {
    for (const auto& p : m.predicates) {
      const auto idx = schema.column_index(p.column);
      if (!idx.has_value()) {
        throw SchemaError("measurement " + m.name +
                          " references unknown column `" + p.column + "`");
      }
      const bool categorical =
          schema.column_kind(*idx) == ColumnKind::categorical;
      if (categorical && p.cmp != Cmp::equals) {
        throw SchemaError("measurement " + m.name +
                          ": only `==` is allowed on categorical column `" +
                          p.column + "`");
      }
      if (categorical != !is_numeric(p.literal)) {
        throw SchemaError("measurement " + m.name + ": literal kind for `" +
                          p.column + "` does not match the column kind");
      }
    }
    if (m.agg == Agg::max) {
      const auto idx = schema.column_index(m.target_column);
      if (!idx.has_value()) {
        throw SchemaError("measurement " + m.name +
                          " aggregates unknown column `" + m.target_column +
                          "`");
      }
      if (schema.column_kind(*idx) != ColumnKind::numeric) {
        throw SchemaError("measurement " + m.name +
                          ": max requires a numeric column, `" +
                          m.target_column + "` is categorical");
      }
    }
  }
}

bool is_cnf_tree(const RuleNode& root) {
  if (root.kind != RuleNode::Kind::logic_and) return false;
  for (const auto& clause : root.children) {
    if (clause.is_leaf()) continue;
    if (clause.kind != RuleNode::Kind::logic_or) return false;
    for (const auto& leaf : clause.children) {
      if (!leaf.is_leaf()) return false;
    }
  }
  return true;
}

namespace {

struct BoolEval {
  bool holds;
  std::vector<std::size_t> violated;
};

BoolEval eval_node(const RuleNode& node, std::span<const double> f,
                   std::span<const double> theta, std::size_t& next_leaf) {
  if (node.is_leaf()) {
    const std::size_t leaf_id = next_leaf++;
    const double fk = f[node.measurement_id];
    const double tk = theta[node.measurement_id];
    const bool holds =
        node.direction == LeafDirection::below ? (fk < tk) : (fk > tk);
    BoolEval out{holds, {}};
    if (!holds) out.violated.push_back(leaf_id);
    return out;
  }
  BoolEval out{node.kind == RuleNode::Kind::logic_and, {}};
  std::vector<std::size_t> collected;
  for (const auto& child : node.children) {
    BoolEval sub = eval_node(child, f, theta, next_leaf);
    collected.insert(collected.end(), sub.violated.begin(),
                     sub.violated.end());
    if (node.kind == RuleNode::Kind::logic_and) {
      out.holds = out.holds && sub.holds;
    } else {
      out.holds = out.holds || sub.holds;
    }
  }
  // A failing subtree reports the leaves that force the failure; a holding
  // OR swallows its children's violations.
  if (!out.holds) out.violated = std::move(collected);
  return out;
}

}  // namespace

BooleanResult classify_boolean(const RuleSet& rules,
                               std::span<const double> theta,
                               const MaskedSample& sample,
                               const Schema& schema) {
  if (theta.size() != rules.measurement_count()) {
    throw ShapeError("theta length does not match measurement count");
  }
  const EvalAllResult f = evaluate_all(rules.measurements, sample, schema);
  std::size_t next_leaf = 0;
  BoolEval eval = eval_node(rules.root, f.values, theta, next_leaf);
  BooleanResult result;
  result.label = eval.holds ? -1 : +1;
  result.violated_leaves = std::move(eval.violated);
  return result;
}

BooleanResult classify_boolean(const RuleSet& rules,
                               std::span<const double> theta,
                               const Sample& sample, const Schema& schema) {
  const auto mask = all_ones_mask(sample.rows());
  return classify_boolean(rules, theta, masked(sample, mask), schema);
}

}  // namespace del
