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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace del {

/// One cell of an observation row: numeric or categorical.
using Value = std::variant<double, std::string>;

inline bool is_numeric(const Value& v) {
  return std::holds_alternative<double>(v);
}
inline double as_number(const Value& v) { return std::get<double>(v); }
inline const std::string& as_category(const Value& v) {
  return std::get<std::string>(v);
}

enum class ColumnKind { numeric, categorical };

struct SeqColumn {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
};

/// Dataset sidecar describing observation rows and the base vector.
/// The `position` column is mandatory and numeric; row-graph construction
/// and path walking measure inter-row distance on it.
struct Schema {
  std::vector<SeqColumn> seq_columns;
  std::size_t base_length = 0;
  /// Value reported by a max-aggregation over zero matching rows.
  double empty_max_default = 0.0;
  /// Rows closer than this (on `position`) are connected in the row graph.
  double distance_threshold = 2.0;

  std::optional<std::size_t> column_index(const std::string& name) const;
  ColumnKind column_kind(std::size_t index) const;
  /// Index of the `position` column. Throws SchemaError if absent or not
  /// numeric.
  std::size_t position_column() const;
  /// Structural validation (position column present, names unique).
  void validate() const;

  nlohmann::json to_json() const;
  static Schema from_json(const nlohmann::json& j);
};

Schema load_schema_file(const std::string& path);
void save_schema_file(const Schema& schema, const std::string& path);

}  // namespace del
