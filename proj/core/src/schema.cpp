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

#include "del/schema.hpp"

#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "del/error.hpp"

namespace del {

std::optional<std::size_t> Schema::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < seq_columns.size(); ++i) {
    if (seq_columns[i].name == name) return i;
  }
  return std::nullopt;
}

ColumnKind Schema::column_kind(std::size_t index) const {
  return seq_columns.at(index).kind;
}

std::size_t Schema::position_column() const {
  const auto idx = column_index("position");
  if (!idx.has_value()) {
    throw SchemaError("schema has no `position` column");
  }
  if (seq_columns[*idx].kind != ColumnKind::numeric) {
    throw SchemaError("`position` column must be numeric");
  }
  return *idx;
}

void Schema::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& col : seq_columns) {
    if (col.name.empty()) throw SchemaError("empty column name");
    if (!seen.insert(col.name).second) {
      throw SchemaError("duplicate column name `" + col.name + "`");
    }
  }
  position_column();
  if (!(distance_threshold >= 0.0)) {
    throw SchemaError("distance_threshold must be >= 0");
  }
}

nlohmann::json Schema::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& col : seq_columns) {
    cols.push_back({{"name", col.name},
                    {"kind", col.kind == ColumnKind::numeric ? "numeric"
                                                             : "categorical"}});
  }
  return nlohmann::json{{"seq_columns", cols},
                        {"base_length", base_length},
                        {"empty_max_default", empty_max_default},
                        {"distance_threshold", distance_threshold}};
}

Schema Schema::from_json(const nlohmann::json& j) {
  Schema schema;
  for (const auto& col : j.at("seq_columns")) {
    SeqColumn c;
    c.name = col.at("name").get<std::string>();
    const std::string kind = col.at("kind").get<std::string>();
    if (kind == "numeric") {
      c.kind = ColumnKind::numeric;
    } else if (kind == "categorical") {
      c.kind = ColumnKind::categorical;
    } else {
      throw SchemaError("unknown column kind `" + kind + "`");
    }
    schema.seq_columns.push_back(std::move(c));
  }
  schema.base_length = j.at("base_length").get<std::size_t>();
  if (j.contains("empty_max_default")) {
    schema.empty_max_default = j.at("empty_max_default").get<double>();
  }
  if (j.contains("distance_threshold")) {
    schema.distance_threshold = j.at("distance_threshold").get<double>();
  }
  schema.validate();
  return schema;
}

Schema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schema file `" + path + "`");
  nlohmann::json j;
  in >> j;
  return Schema::from_json(j);
}

void save_schema_file(const Schema& schema, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write schema file `" + path + "`");
  out << schema.to_json().dump(2) << "\n";
}

}  // namespace del
