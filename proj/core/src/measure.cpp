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

#include "del/measure.hpp"

#include <algorithm>

#include "del/error.hpp"

namespace del {

namespace {

bool predicate_matches(const Predicate& p, const Value& cell) {
  switch (p.cmp) {
    case Cmp::equals:
      return cell == p.literal;
    case Cmp::less_than:
      return as_number(cell) < as_number(p.literal);
    case Cmp::greater_than:
      return as_number(cell) > as_number(p.literal);
  }
  return false;
}

}  // namespace

MeasurementResult evaluate(const Measurement& m, const MaskedSample& sample,
                           const Schema& schema) {
  // Resolve columns once per call.
  std::vector<std::size_t> pred_cols(m.predicates.size());
  for (std::size_t i = 0; i < m.predicates.size(); ++i) {
    const auto idx = schema.column_index(m.predicates[i].column);
    if (!idx.has_value()) {
      throw SchemaError("measurement " + m.name + ": unknown column `" +
                        m.predicates[i].column + "`");
    }
    pred_cols[i] = *idx;
  }
  std::size_t target_col = 0;
  if (m.agg == Agg::max) {
    const auto idx = schema.column_index(m.target_column);
    if (!idx.has_value()) {
      throw SchemaError("measurement " + m.name + ": unknown target column `" +
                        m.target_column + "`");
    }
    if (schema.column_kind(*idx) != ColumnKind::numeric) {
      throw SchemaError("measurement " + m.name + ": target column `" +
                        m.target_column + "` is not numeric");
    }
    target_col = *idx;
  }

  MeasurementResult result;
  double best = schema.empty_max_default;
  bool any = false;
  for (std::size_t r = 0; r < sample.rows(); ++r) {
    if (!sample.keeps(r)) continue;
    const auto& row = sample.sample->x_seq[r];
    bool match = true;
    for (std::size_t i = 0; i < m.predicates.size(); ++i) {
      if (!predicate_matches(m.predicates[i], row[pred_cols[i]])) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    result.touched_rows.push_back(r);
    if (m.agg == Agg::max) {
      const double v = as_number(row[target_col]);
      best = any ? std::max(best, v) : v;
      any = true;
    }
  }
  if (m.agg == Agg::count) {
    result.value = static_cast<double>(result.touched_rows.size());
  } else {
    result.value = any ? best : schema.empty_max_default;
  }
  return result;
}

EvalAllResult evaluate_all(std::span<const Measurement> measurements,
                           const MaskedSample& sample, const Schema& schema) {
  EvalAllResult out;
  out.values.reserve(measurements.size());
  out.touched.reserve(measurements.size());
  for (const auto& m : measurements) {
    MeasurementResult r = evaluate(m, sample, schema);
    out.values.push_back(r.value);
    out.touched.push_back(std::move(r.touched_rows));
  }
  return out;
}

}  // namespace del
