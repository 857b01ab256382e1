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

#include "del/sample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "del/error.hpp"

namespace del {

std::vector<double> all_ones_mask(std::size_t n) {
  return std::vector<double>(n, kMaskKeep);
}

MaskedSample masked(const Sample& sample, std::span<const double> mask) {
  if (mask.size() != sample.rows()) {
    throw ShapeError("mask length " + std::to_string(mask.size()) +
                     " does not match sequence length " +
                     std::to_string(sample.rows()));
  }
  return MaskedSample{&sample, mask};
}

void validate_sample(const Sample& sample, const Schema& schema) {
  if (sample.rows() >= kMaxSequenceLength) {
    throw SchemaError("sequence length " + std::to_string(sample.rows()) +
                      " exceeds limit " + std::to_string(kMaxSequenceLength));
  }
  if (sample.y != 1 && sample.y != -1) {
    throw SchemaError("label must be +1 or -1, got " +
                      std::to_string(sample.y));
  }
  if (sample.x_base.size() != schema.base_length) {
    throw SchemaError("x_base length " + std::to_string(sample.x_base.size()) +
                      " does not match schema base_length " +
                      std::to_string(schema.base_length));
  }
  for (double v : sample.x_base) {
    if (!std::isfinite(v)) throw SchemaError("non-finite x_base entry");
  }
  const std::size_t width = schema.seq_columns.size();
  for (std::size_t r = 0; r < sample.rows(); ++r) {
    const auto& row = sample.x_seq[r];
    if (row.size() != width) {
      throw SchemaError("row " + std::to_string(r) + " has " +
                        std::to_string(row.size()) + " cells, expected " +
                        std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const bool numeric = schema.seq_columns[c].kind == ColumnKind::numeric;
      if (numeric != is_numeric(row[c])) {
        throw SchemaError("row " + std::to_string(r) + " column `" +
                          schema.seq_columns[c].name + "` has wrong cell kind");
      }
      if (numeric && !std::isfinite(as_number(row[c]))) {
        throw SchemaError("non-finite value in column `" +
                          schema.seq_columns[c].name + "`");
      }
    }
  }
  for (std::size_t idx : sample.y_feat) {
    if (idx >= sample.rows()) {
      throw SchemaError("y_feat index " + std::to_string(idx) +
                        " out of range for " + std::to_string(sample.rows()) +
                        " rows");
    }
  }
}

void validate_dataset(const Dataset& dataset) {
  dataset.schema.validate();
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    try {
      validate_sample(dataset.samples[i], dataset.schema);
    } catch (const Error& e) {
      throw SchemaError("sample " + std::to_string(i) + ": " + e.what());
    }
  }
}

namespace {

nlohmann::json sample_to_json(const Sample& sample, const Schema& schema) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : sample.x_seq) {
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (schema.seq_columns[c].kind == ColumnKind::numeric) {
        cells.push_back(as_number(row[c]));
      } else {
        cells.push_back(as_category(row[c]));
      }
    }
    rows.push_back(std::move(cells));
  }
  return nlohmann::json{{"x_seq", rows},
                        {"x_base", sample.x_base},
                        {"y", sample.y},
                        {"y_feat", sample.y_feat}};
}

Sample sample_from_json(const nlohmann::json& j, const Schema& schema) {
  Sample sample;
  for (const auto& row : j.at("x_seq")) {
    std::vector<Value> cells;
    cells.reserve(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c < schema.seq_columns.size() &&
          schema.seq_columns[c].kind == ColumnKind::categorical) {
        cells.emplace_back(row[c].get<std::string>());
      } else {
        cells.emplace_back(row[c].get<double>());
      }
    }
    sample.x_seq.push_back(std::move(cells));
  }
  sample.x_base = j.at("x_base").get<std::vector<double>>();
  sample.y = j.at("y").get<int>();
  if (j.contains("y_feat")) {
    sample.y_feat = j.at("y_feat").get<std::vector<std::size_t>>();
    std::sort(sample.y_feat.begin(), sample.y_feat.end());
    sample.y_feat.erase(
        std::unique(sample.y_feat.begin(), sample.y_feat.end()),
        sample.y_feat.end());
  }
  return sample;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char ch : line) {
    if (quoted) {
      if (ch == '"') {
        quoted = false;
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_number(const std::string& text, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SchemaError("cannot parse number `" + text + "` in " + context);
  }
}

}  // namespace

Dataset load_dataset_jsonl(const std::string& data_path,
                           const std::string& schema_path) {
  Dataset dataset;
  dataset.schema = load_schema_file(schema_path);
  std::ifstream in(data_path);
  if (!in) throw Error("cannot open dataset file `" + data_path + "`");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error("bad JSON on line " + std::to_string(lineno) + " of `" +
                  data_path + "`: " + e.what());
    }
    dataset.samples.push_back(sample_from_json(j, dataset.schema));
  }
  validate_dataset(dataset);
  return dataset;
}

void save_dataset_jsonl(const Dataset& dataset, const std::string& data_path) {
  std::ofstream out(data_path);
  if (!out) throw Error("cannot write dataset file `" + data_path + "`");
  for (const auto& sample : dataset.samples) {
    out << sample_to_json(sample, dataset.schema).dump() << "\n";
  }
}

Dataset load_dataset_csv(const std::string& seq_path,
                         const std::string& base_path,
                         const std::string& schema_path) {
  Dataset dataset;
  dataset.schema = load_schema_file(schema_path);
  const std::size_t width = dataset.schema.seq_columns.size();

  std::ifstream base_in(base_path);
  if (!base_in) throw Error("cannot open base file `" + base_path + "`");
  std::string line;
  if (!std::getline(base_in, line)) {
    throw Error("base file `" + base_path + "` is empty");
  }
  std::unordered_map<std::string, std::size_t> index_by_id;
  std::vector<std::string> order;
  std::size_t lineno = 1;
  while (std::getline(base_in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string context = base_path + ":" + std::to_string(lineno);
    if (fields.size() != 3 + dataset.schema.base_length) {
      throw SchemaError("expected " +
                        std::to_string(3 + dataset.schema.base_length) +
                        " fields in " + context);
    }
    const std::string& id = fields[0];
    if (index_by_id.count(id) != 0) {
      throw SchemaError("duplicate sample id `" + id + "` in " + context);
    }
    Sample sample;
    sample.y = static_cast<int>(parse_number(fields[1], context));
    if (!fields[2].empty()) {
      std::stringstream feat(fields[2]);
      std::string part;
      while (std::getline(feat, part, ';')) {
        sample.y_feat.push_back(
            static_cast<std::size_t>(parse_number(part, context)));
      }
      std::sort(sample.y_feat.begin(), sample.y_feat.end());
    }
    for (std::size_t b = 0; b < dataset.schema.base_length; ++b) {
      sample.x_base.push_back(parse_number(fields[3 + b], context));
    }
    index_by_id.emplace(id, dataset.samples.size());
    order.push_back(id);
    dataset.samples.push_back(std::move(sample));
  }

  std::ifstream seq_in(seq_path);
  if (!seq_in) throw Error("cannot open sequence file `" + seq_path + "`");
  if (!std::getline(seq_in, line)) {
    throw Error("sequence file `" + seq_path + "` is empty");
  }
  lineno = 1;
  while (std::getline(seq_in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string context = seq_path + ":" + std::to_string(lineno);
    if (fields.size() != 1 + width) {
      throw SchemaError("expected " + std::to_string(1 + width) +
                        " fields in " + context);
    }
    const auto it = index_by_id.find(fields[0]);
    if (it == index_by_id.end()) {
      throw SchemaError("unknown sample id `" + fields[0] + "` in " + context);
    }
    std::vector<Value> row;
    row.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (dataset.schema.seq_columns[c].kind == ColumnKind::numeric) {
        row.emplace_back(parse_number(fields[1 + c], context));
      } else {
        row.emplace_back(fields[1 + c]);
      }
    }
    dataset.samples[it->second].x_seq.push_back(std::move(row));
  }
  validate_dataset(dataset);
  return dataset;
}

}  // namespace del
