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

#include "del/prepared.hpp"

namespace del {

PreparedSample prepare_sample(const Sample& sample, const Schema& schema,
                              std::span<const Measurement> measurements,
                              const FeatureCodec* codec) {
  PreparedSample prepared;
  prepared.sample = &sample;
  prepared.graph = build_graph(sample, schema, schema.distance_threshold);
  if (codec != nullptr) {
    prepared.features = codec->encode_seq(sample, schema);
    prepared.base = codec->encode_base(sample);
  } else {
    prepared.base = sample.x_base;
  }
  const auto ones = all_ones_mask(sample.rows());
  prepared.raw_f = evaluate_all(measurements, masked(sample, ones), schema);
  return prepared;
}

std::vector<PreparedSample> prepare_dataset(
    const Dataset& dataset, std::span<const Measurement> measurements,
    const FeatureCodec* codec) {
  std::vector<PreparedSample> prepared;
  prepared.reserve(dataset.samples.size());
  for (const auto& sample : dataset.samples) {
    prepared.push_back(
        prepare_sample(sample, dataset.schema, measurements, codec));
  }
  return prepared;
}

}  // namespace del
