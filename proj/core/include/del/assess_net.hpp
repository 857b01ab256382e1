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
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "del/graph.hpp"
#include "del/matrix.hpp"
#include "del/optim.hpp"
#include "del/rng.hpp"
#include "del/sample.hpp"

namespace del {

/// Training-set feature preprocessing: numeric sequence columns and the base
/// vector are standardized by mean/std, categorical columns are one-hot
/// encoded with a first-appearance vocabulary. Unseen categories encode to
/// all zeros.
struct FeatureCodec {
  std::vector<std::size_t> numeric_cols;
  std::vector<double> numeric_mean;
  std::vector<double> numeric_std;
  std::vector<std::size_t> categorical_cols;
  std::vector<std::vector<std::string>> vocab;  // per categorical column
  std::vector<double> base_mean;
  std::vector<double> base_std;

  static FeatureCodec fit(const Dataset& dataset);

  std::size_t feature_width() const;
  Matrix encode_seq(const Sample& sample, const Schema& schema) const;
  std::vector<double> encode_base(const Sample& sample) const;
  /// Column layout / kind compatibility with a dataset schema.
  void check_compatible(const Schema& schema) const;

  nlohmann::json to_json() const;
  static FeatureCodec from_json(const nlohmann::json& j);

  bool operator==(const FeatureCodec&) const = default;
};

struct AssessConfig {
  std::size_t gcn_width1 = 64;
  std::size_t gcn_width2 = 32;
  std::size_t fc_hidden = 32;
};

/// All trainable tensors of the data assessing model H.
struct AssessWeights {
  Matrix gcn1;  // feature_width x 64
  Matrix gcn2;  // 64 x 32
  Matrix fc1;   // (32 + base_len) x hidden
  std::vector<double> fc1_bias;
  Matrix fc2;   // hidden x 1
  std::vector<double> fc2_bias;

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);
  bool operator==(const AssessWeights&) const = default;
};

/// One training pair for H: an encoded sample and its target mask.
struct AssessItem {
  const RowGraph* graph;
  const Matrix* features;               // n x feature_width
  std::span<const double> base;         // standardized x_base
  std::span<const double> target_mask;  // length n
};

/// Graph encoder (two GCN layers, ReLU then identity) followed by per-row
/// concatenation with the base vector and a two-layer head (tanh, sigmoid).
/// Output is a per-row mask strictly inside (0,1); an all-zero network emits
/// the constant 0.5 mask.
class AssessModel {
 public:
  AssessModel(std::size_t feature_width, std::size_t base_length,
              AssessConfig config, Rng& init_rng);
  /// Restores a model from saved weights.
  AssessModel(std::size_t feature_width, std::size_t base_length,
              AssessConfig config, AssessWeights weights);

  std::size_t feature_width() const { return feature_width_; }
  std::size_t base_length() const { return base_length_; }
  const AssessConfig& config() const { return config_; }
  const AssessWeights& weights() const { return weights_; }
  void set_weights(AssessWeights weights);

  std::vector<double> forward_mask(const RowGraph& g, const Matrix& features,
                                   std::span<const double> base) const;

  /// Mean squared error over all rows of the batch.
  double batch_loss(std::span<const AssessItem> batch) const;
  /// Backpropagated gradient in flattened weight order, plus the loss.
  std::pair<double, std::vector<double>> batch_gradient(
      std::span<const AssessItem> batch) const;
  /// One Adam update at the given learning rate; returns the batch loss.
  double train_step(std::span<const AssessItem> batch, double learning_rate);

 private:
  void validate() const;

  std::size_t feature_width_;
  std::size_t base_length_;
  AssessConfig config_;
  AssessWeights weights_;
  AdamState adam_;
};

}  // namespace del
