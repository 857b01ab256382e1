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

#include "del/assess_net.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "del/error.hpp"

namespace del {

// ---------------------------------------------------------------------------
// FeatureCodec
// ---------------------------------------------------------------------------

FeatureCodec FeatureCodec::fit(const Dataset& dataset) {
  FeatureCodec codec;
  const Schema& schema = dataset.schema;
  for (std::size_t c = 0; c < schema.seq_columns.size(); ++c) {
    if (schema.seq_columns[c].kind == ColumnKind::numeric) {
      codec.numeric_cols.push_back(c);
    } else {
      codec.categorical_cols.push_back(c);
      codec.vocab.emplace_back();
    }
  }

  // Numeric column stats over every row of every sample.
  codec.numeric_mean.assign(codec.numeric_cols.size(), 0.0);
  codec.numeric_std.assign(codec.numeric_cols.size(), 0.0);
  std::size_t total_rows = 0;
  for (const auto& sample : dataset.samples) total_rows += sample.rows();
  if (total_rows > 0) {
    for (const auto& sample : dataset.samples) {
      for (const auto& row : sample.x_seq) {
        for (std::size_t i = 0; i < codec.numeric_cols.size(); ++i) {
          codec.numeric_mean[i] += as_number(row[codec.numeric_cols[i]]);
        }
      }
    }
    for (double& m : codec.numeric_mean) m /= static_cast<double>(total_rows);
    for (const auto& sample : dataset.samples) {
      for (const auto& row : sample.x_seq) {
        for (std::size_t i = 0; i < codec.numeric_cols.size(); ++i) {
          const double d =
              as_number(row[codec.numeric_cols[i]]) - codec.numeric_mean[i];
          codec.numeric_std[i] += d * d;
        }
      }
    }
    for (double& s : codec.numeric_std) {
      s = std::sqrt(s / static_cast<double>(total_rows));
      if (s == 0.0) s = 1.0;
    }
  } else {
    codec.numeric_std.assign(codec.numeric_cols.size(), 1.0);
  }

  // Vocabularies in first-appearance order.
  for (const auto& sample : dataset.samples) {
    for (const auto& row : sample.x_seq) {
      for (std::size_t i = 0; i < codec.categorical_cols.size(); ++i) {
        const std::string& value = as_category(row[codec.categorical_cols[i]]);
        auto& vocab = codec.vocab[i];
        if (std::find(vocab.begin(), vocab.end(), value) == vocab.end()) {
          vocab.push_back(value);
        }
      }
    }
  }

  codec.base_mean.assign(schema.base_length, 0.0);
  codec.base_std.assign(schema.base_length, 1.0);
  if (!dataset.samples.empty() && schema.base_length > 0) {
    for (const auto& sample : dataset.samples) {
      for (std::size_t b = 0; b < schema.base_length; ++b) {
        codec.base_mean[b] += sample.x_base[b];
      }
    }
    for (double& m : codec.base_mean) {
      m /= static_cast<double>(dataset.samples.size());
    }
    std::vector<double> var(schema.base_length, 0.0);
    for (const auto& sample : dataset.samples) {
      for (std::size_t b = 0; b < schema.base_length; ++b) {
        const double d = sample.x_base[b] - codec.base_mean[b];
        var[b] += d * d;
      }
    }
    for (std::size_t b = 0; b < schema.base_length; ++b) {
      codec.base_std[b] =
          std::sqrt(var[b] / static_cast<double>(dataset.samples.size()));
      if (codec.base_std[b] == 0.0) codec.base_std[b] = 1.0;
    }
  }
  return codec;
}

std::size_t FeatureCodec::feature_width() const {
  std::size_t width = numeric_cols.size();
  for (const auto& v : vocab) width += v.size();
  return width;
}

Matrix FeatureCodec::encode_seq(const Sample& sample,
                                const Schema& schema) const {
  (void)schema;
  Matrix x(sample.rows(), feature_width());
  for (std::size_t r = 0; r < sample.rows(); ++r) {
    const auto& row = sample.x_seq[r];
    std::size_t c = 0;
    for (std::size_t i = 0; i < numeric_cols.size(); ++i, ++c) {
      x(r, c) = (as_number(row[numeric_cols[i]]) - numeric_mean[i]) /
                numeric_std[i];
    }
    for (std::size_t i = 0; i < categorical_cols.size(); ++i) {
      const std::string& value = as_category(row[categorical_cols[i]]);
      for (std::size_t v = 0; v < vocab[i].size(); ++v, ++c) {
        x(r, c) = vocab[i][v] == value ? 1.0 : 0.0;
      }
    }
  }
  return x;
}

std::vector<double> FeatureCodec::encode_base(const Sample& sample) const {
  std::vector<double> out(sample.x_base.size());
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b] = (sample.x_base[b] - base_mean[b]) / base_std[b];
  }
  return out;
}

void FeatureCodec::check_compatible(const Schema& schema) const {
  for (std::size_t c : numeric_cols) {
    if (c >= schema.seq_columns.size() ||
        schema.seq_columns[c].kind != ColumnKind::numeric) {
      throw SchemaError("codec numeric column " + std::to_string(c) +
                        " does not match the dataset schema");
    }
  }
  for (std::size_t c : categorical_cols) {
    if (c >= schema.seq_columns.size() ||
        schema.seq_columns[c].kind != ColumnKind::categorical) {
      throw SchemaError("codec categorical column " + std::to_string(c) +
                        " does not match the dataset schema");
    }
  }
  if (base_mean.size() != schema.base_length) {
    throw SchemaError("codec base length does not match the dataset schema");
  }
}

nlohmann::json FeatureCodec::to_json(const Schema& schema) const {
  (void)schema;
  return nlohmann::json{{"numeric_cols", numeric_cols},
                        {"numeric_mean", numeric_mean},
                        {"numeric_std", numeric_std},
                        {"categorical_cols", categorical_cols},
                        {"vocab", vocab},
                        {"base_mean", base_mean},
                        {"base_std", base_std}};
}

FeatureCodec FeatureCodec::from_json(const nlohmann::json& j,
                                     const Schema& schema) {
  FeatureCodec codec;
  codec.numeric_cols = j.at("numeric_cols").get<std::vector<std::size_t>>();
  codec.numeric_mean = j.at("numeric_mean").get<std::vector<double>>();
  codec.numeric_std = j.at("numeric_std").get<std::vector<double>>();
  codec.categorical_cols =
      j.at("categorical_cols").get<std::vector<std::size_t>>();
  codec.vocab = j.at("vocab").get<std::vector<std::vector<std::string>>>();
  codec.base_mean = j.at("base_mean").get<std::vector<double>>();
  codec.base_std = j.at("base_std").get<std::vector<double>>();
  codec.check_compatible(schema);
  return codec;
}

// ---------------------------------------------------------------------------
// AssessWeights
// ---------------------------------------------------------------------------

std::size_t AssessWeights::parameter_count() const {
  return gcn1.size() + gcn2.size() + fc1.size() + fc1_bias.size() +
         fc2.size() + fc2_bias.size();
}

std::vector<double> AssessWeights::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const Matrix* m : {&gcn1, &gcn2, &fc1}) {
    flat.insert(flat.end(), m->data().begin(), m->data().end());
  }
  flat.insert(flat.end(), fc1_bias.begin(), fc1_bias.end());
  flat.insert(flat.end(), fc2.data().begin(), fc2.data().end());
  flat.insert(flat.end(), fc2_bias.begin(), fc2_bias.end());
  return flat;
}

void AssessWeights::unflatten(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw ShapeError("unflatten: wrong parameter count");
  }
  std::size_t offset = 0;
  auto take = [&](std::span<double> dst) {
    std::copy(flat.begin() + offset, flat.begin() + offset + dst.size(),
              dst.begin());
    offset += dst.size();
  };
  take(gcn1.data());
  take(gcn2.data());
  take(fc1.data());
  take(fc1_bias);
  take(fc2.data());
  take(fc2_bias);
}

// ---------------------------------------------------------------------------
// AssessModel
// ---------------------------------------------------------------------------

namespace {

Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = rng.uniform(-limit, limit);
    }
  }
  return m;
}

}  // namespace

AssessModel::AssessModel(std::size_t feature_width, std::size_t base_length,
                         AssessConfig config, Rng& init_rng)
    : feature_width_(feature_width),
      base_length_(base_length),
      config_(config),
      adam_(0) {
  weights_.gcn1 = glorot_uniform(feature_width, config.gcn_width1, init_rng);
  weights_.gcn2 =
      glorot_uniform(config.gcn_width1, config.gcn_width2, init_rng);
  weights_.fc1 = glorot_uniform(config.gcn_width2 + base_length,
                                config.fc_hidden, init_rng);
  weights_.fc1_bias.assign(config.fc_hidden, 0.0);
  weights_.fc2 = glorot_uniform(config.fc_hidden, 1, init_rng);
  weights_.fc2_bias.assign(1, 0.0);
  adam_ = AdamState(weights_.parameter_count());
  validate();
}

AssessModel::AssessModel(std::size_t feature_width, std::size_t base_length,
                         AssessConfig config, AssessWeights weights)
    : feature_width_(feature_width),
      base_length_(base_length),
      config_(config),
      weights_(std::move(weights)),
      adam_(weights_.parameter_count()) {
  validate();
}

void AssessModel::set_weights(AssessWeights weights) {
  weights_ = std::move(weights);
  adam_ = AdamState(weights_.parameter_count());
  validate();
}

void AssessModel::validate() const {
  if (weights_.gcn1.rows() != feature_width_ ||
      weights_.gcn1.cols() != config_.gcn_width1 ||
      weights_.gcn2.rows() != config_.gcn_width1 ||
      weights_.gcn2.cols() != config_.gcn_width2 ||
      weights_.fc1.rows() != config_.gcn_width2 + base_length_ ||
      weights_.fc1.cols() != config_.fc_hidden ||
      weights_.fc1_bias.size() != config_.fc_hidden ||
      weights_.fc2.rows() != config_.fc_hidden || weights_.fc2.cols() != 1 ||
      weights_.fc2_bias.size() != 1) {
    throw ShapeError("assess model weight shapes are inconsistent");
  }
}

namespace {

struct AssessForward {
  Matrix p1;   // A_hat X
  Matrix a1;   // p1 W1
  Matrix h1;   // relu(a1)
  Matrix p2;   // A_hat h1
  Matrix a2;   // p2 W2
  Matrix u;    // [a2 | base]
  Matrix h3;   // tanh(u W3 + b3)
  std::vector<double> mask;  // sigmoid(h3 W4 + b4)
};

AssessForward run_forward(const AssessWeights& w, const RowGraph& g,
                          const Matrix& features, std::span<const double> base) {
  AssessForward fw;
  const std::size_t n = g.n;
  fw.p1 = gcn_propagate(g, features);
  fw.a1 = matmul(fw.p1, w.gcn1);
  fw.h1 = fw.a1;
  for (double& v : fw.h1.data()) v = v > 0.0 ? v : 0.0;
  fw.p2 = gcn_propagate(g, fw.h1);
  fw.a2 = matmul(fw.p2, w.gcn2);

  fw.u = Matrix(n, w.gcn2.cols() + base.size());
  for (std::size_t r = 0; r < n; ++r) {
    auto urow = fw.u.row(r);
    const auto arow = fw.a2.row(r);
    std::copy(arow.begin(), arow.end(), urow.begin());
    std::copy(base.begin(), base.end(), urow.begin() + arow.size());
  }
  Matrix a3 = matmul(fw.u, w.fc1);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = a3.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += w.fc1_bias[c];
  }
  fw.h3 = a3;
  for (double& v : fw.h3.data()) v = std::tanh(v);

  Matrix a4 = matmul(fw.h3, w.fc2);
  fw.mask.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    fw.mask[r] = 1.0 / (1.0 + std::exp(-(a4(r, 0) + w.fc2_bias[0])));
  }
  return fw;
}

}  // namespace

std::vector<double> AssessModel::forward_mask(const RowGraph& g,
                                              const Matrix& features,
                                              std::span<const double> base) const {
  if (g.n == 0) return {};
  if (features.rows() != g.n || features.cols() != feature_width_) {
    throw ShapeError("forward_mask: feature matrix is " +
                     std::to_string(features.rows()) + "x" +
                     std::to_string(features.cols()) + ", expected " +
                     std::to_string(g.n) + "x" +
                     std::to_string(feature_width_));
  }
  if (base.size() != base_length_) {
    throw ShapeError("forward_mask: base vector length mismatch");
  }
  return run_forward(weights_, g, features, base).mask;
}

double AssessModel::batch_loss(std::span<const AssessItem> batch) const {
  if (batch.empty()) throw Error("assess batch is empty");
  double loss = 0.0;
  std::size_t total_rows = 0;
  for (const auto& item : batch) total_rows += item.graph->n;
  if (total_rows == 0) return 0.0;
  for (const auto& item : batch) {
    if (item.graph->n == 0) continue;
    const auto mask = forward_mask(*item.graph, *item.features, item.base);
    if (item.target_mask.size() != mask.size()) {
      throw ShapeError("target mask length mismatch");
    }
    for (std::size_t r = 0; r < mask.size(); ++r) {
      const double d = mask[r] - item.target_mask[r];
      loss += d * d;
    }
  }
  return loss / static_cast<double>(total_rows);
}

std::pair<double, std::vector<double>> AssessModel::batch_gradient(
    std::span<const AssessItem> batch) const {
  if (batch.empty()) throw Error("assess batch is empty");
  std::size_t total_rows = 0;
  for (const auto& item : batch) total_rows += item.graph->n;

  AssessWeights grads;
  grads.gcn1 = Matrix(weights_.gcn1.rows(), weights_.gcn1.cols());
  grads.gcn2 = Matrix(weights_.gcn2.rows(), weights_.gcn2.cols());
  grads.fc1 = Matrix(weights_.fc1.rows(), weights_.fc1.cols());
  grads.fc1_bias.assign(weights_.fc1_bias.size(), 0.0);
  grads.fc2 = Matrix(weights_.fc2.rows(), weights_.fc2.cols());
  grads.fc2_bias.assign(1, 0.0);
  double loss = 0.0;
  if (total_rows == 0) return {0.0, grads.flatten()};
  const double inv_rows = 1.0 / static_cast<double>(total_rows);

  for (const auto& item : batch) {
    const std::size_t n = item.graph->n;
    if (n == 0) continue;
    if (item.target_mask.size() != n) {
      throw ShapeError("target mask length mismatch");
    }
    const AssessForward fw =
        run_forward(weights_, *item.graph, *item.features, item.base);

    Matrix da4(n, 1);
    for (std::size_t r = 0; r < n; ++r) {
      const double m = fw.mask[r];
      const double d = m - item.target_mask[r];
      loss += d * d;
      da4(r, 0) = 2.0 * d * inv_rows * m * (1.0 - m);
    }
    grads.fc2.add_scaled(matmul_tn(fw.h3, da4), 1.0);
    for (std::size_t r = 0; r < n; ++r) grads.fc2_bias[0] += da4(r, 0);

    Matrix dh3 = matmul_nt(da4, weights_.fc2);
    for (std::size_t r = 0; r < n; ++r) {
      auto drow = dh3.row(r);
      const auto hrow = fw.h3.row(r);
      for (std::size_t c = 0; c < drow.size(); ++c) {
        drow[c] *= 1.0 - hrow[c] * hrow[c];
      }
    }
    grads.fc1.add_scaled(matmul_tn(fw.u, dh3), 1.0);
    for (std::size_t r = 0; r < n; ++r) {
      const auto drow = dh3.row(r);
      for (std::size_t c = 0; c < drow.size(); ++c) {
        grads.fc1_bias[c] += drow[c];
      }
    }

    Matrix du = matmul_nt(dh3, weights_.fc1);
    Matrix da2(n, weights_.gcn2.cols());
    for (std::size_t r = 0; r < n; ++r) {
      const auto drow = du.row(r);
      auto arow = da2.row(r);
      std::copy(drow.begin(), drow.begin() + arow.size(), arow.begin());
    }
    grads.gcn2.add_scaled(matmul_tn(fw.p2, da2), 1.0);

    Matrix dp2 = matmul_nt(da2, weights_.gcn2);
    Matrix dh1 = gcn_propagate(*item.graph, dp2);  // symmetric propagation
    for (std::size_t r = 0; r < n; ++r) {
      auto drow = dh1.row(r);
      const auto arow = fw.a1.row(r);
      for (std::size_t c = 0; c < drow.size(); ++c) {
        if (arow[c] <= 0.0) drow[c] = 0.0;
      }
    }
    grads.gcn1.add_scaled(matmul_tn(fw.p1, dh1), 1.0);
  }
  return {loss * inv_rows, grads.flatten()};
}

double AssessModel::train_step(std::span<const AssessItem> batch,
                               double learning_rate) {
  auto [loss, grads] = batch_gradient(batch);
  adam_.set_learning_rate(learning_rate);
  auto flat = weights_.flatten();
  adam_.step(flat, grads);
  weights_.unflatten(flat);
  return loss;
}

}  // namespace del
