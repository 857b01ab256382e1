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

#include "del/snapshot.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "del/error.hpp"

namespace del {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (static_cast<std::uint32_t>(bytes[i]) << 16) |
                            (static_cast<std::uint32_t>(bytes[i + 1]) << 8) |
                            bytes[i + 2];
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back(kAlphabet[v & 63]);
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = static_cast<std::uint32_t>(bytes[i]) << 16;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back('=');
    out.push_back('=');
  } else if (rest == 2) {
    const std::uint32_t v = (static_cast<std::uint32_t>(bytes[i]) << 16) |
                            (static_cast<std::uint32_t>(bytes[i + 1]) << 8);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw Error("base64: length not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=') {
        vals[j] = 0;
        ++pad;
      } else {
        vals[j] = decode_char(c);
        if (vals[j] < 0 || pad > 0) throw Error("base64: invalid character");
      }
    }
    const std::uint32_t v = (static_cast<std::uint32_t>(vals[0]) << 18) |
                            (static_cast<std::uint32_t>(vals[1]) << 12) |
                            (static_cast<std::uint32_t>(vals[2]) << 6) |
                            static_cast<std::uint32_t>(vals[3]);
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  return out;
}

namespace {

std::string doubles_to_base64(std::span<const double> values) {
  std::vector<std::uint8_t> bytes(values.size() * sizeof(double));
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &values[i], sizeof(double));
    for (std::size_t b = 0; b < 8; ++b) {
      bytes[i * 8 + b] = static_cast<std::uint8_t>((bits >> (8 * b)) & 0xFF);
    }
  }
  return base64_encode(bytes);
}

std::vector<double> doubles_from_base64(const std::string& text) {
  const auto bytes = base64_decode(text);
  if (bytes.size() % 8 != 0) throw Error("payload is not a double array");
  std::vector<double> values(bytes.size() / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
    }
    std::memcpy(&values[i], &bits, sizeof(double));
  }
  return values;
}

}  // namespace

nlohmann::json matrix_to_json(const Matrix& m) {
  return nlohmann::json{{"rows", m.rows()},
                        {"cols", m.cols()},
                        {"data", doubles_to_base64(m.data())}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  auto data = doubles_from_base64(j.at("data").get<std::string>());
  return Matrix(rows, cols, std::move(data));
}

nlohmann::json Snapshot::to_json() const {
  nlohmann::json j{{"format", 1},
                   {"step", step},
                   {"config_hash", config_hash},
                   {"rules", rules_to_json(rules)},
                   {"theta", doubles_to_base64(theta)},
                   {"z", doubles_to_base64(z)},
                   {"metrics", metrics.to_json()},
                   {"has_assess", has_assess}};
  if (has_assess) {
    j["assess"] = nlohmann::json{
        {"gcn_width1", assess_config.gcn_width1},
        {"gcn_width2", assess_config.gcn_width2},
        {"fc_hidden", assess_config.fc_hidden},
        {"gcn1", matrix_to_json(assess_weights.gcn1)},
        {"gcn2", matrix_to_json(assess_weights.gcn2)},
        {"fc1", matrix_to_json(assess_weights.fc1)},
        {"fc1_bias", doubles_to_base64(assess_weights.fc1_bias)},
        {"fc2", matrix_to_json(assess_weights.fc2)},
        {"fc2_bias", doubles_to_base64(assess_weights.fc2_bias)},
        {"codec", codec.to_json()}};
  }
  return j;
}

Snapshot Snapshot::from_json(const nlohmann::json& j) {
  Snapshot s;
  s.step = j.at("step").get<std::size_t>();
  s.config_hash = j.at("config_hash").get<std::string>();
  s.rules = rules_from_json(j.at("rules"));
  s.theta = doubles_from_base64(j.at("theta").get<std::string>());
  s.z = doubles_from_base64(j.at("z").get<std::string>());
  s.metrics = Metrics::from_json(j.at("metrics"));
  s.has_assess = j.at("has_assess").get<bool>();
  if (s.theta.size() != s.rules.measurement_count() ||
      s.z.size() != s.rules.measurement_count()) {
    throw Error("snapshot theta/z length does not match the rule set");
  }
  if (s.has_assess) {
    const auto& a = j.at("assess");
    s.assess_config.gcn_width1 = a.at("gcn_width1").get<std::size_t>();
    s.assess_config.gcn_width2 = a.at("gcn_width2").get<std::size_t>();
    s.assess_config.fc_hidden = a.at("fc_hidden").get<std::size_t>();
    s.assess_weights.gcn1 = matrix_from_json(a.at("gcn1"));
    s.assess_weights.gcn2 = matrix_from_json(a.at("gcn2"));
    s.assess_weights.fc1 = matrix_from_json(a.at("fc1"));
    s.assess_weights.fc1_bias =
        doubles_from_base64(a.at("fc1_bias").get<std::string>());
    s.assess_weights.fc2 = matrix_from_json(a.at("fc2"));
    s.assess_weights.fc2_bias =
        doubles_from_base64(a.at("fc2_bias").get<std::string>());
    s.codec = FeatureCodec::from_json(a.at("codec"));
  }
  return s;
}

void save_snapshot_file(const Snapshot& snapshot, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write snapshot file `" + tmp + "`");
    out << snapshot.to_json().dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

Snapshot load_snapshot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot file `" + path + "`");
  nlohmann::json j;
  in >> j;
  return Snapshot::from_json(j);
}

}  // namespace del
