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

#include <vector>

#include "del/assess_net.hpp"
#include "del/graph.hpp"
#include "del/measure.hpp"
#include "del/sample.hpp"

namespace del {

/// Per-sample artifacts that never change during a run: the row graph, the
/// encoded features for the assess model, the standardized base vector, and
/// the raw (all-rows) measurement values.
struct PreparedSample {
  const Sample* sample = nullptr;
  RowGraph graph;
  Matrix features;           // empty when prepared without a codec
  std::vector<double> base;  // standardized; raw copy when no codec
  EvalAllResult raw_f;
};

PreparedSample prepare_sample(const Sample& sample, const Schema& schema,
                              std::span<const Measurement> measurements,
                              const FeatureCodec* codec);

std::vector<PreparedSample> prepare_dataset(
    const Dataset& dataset, std::span<const Measurement> measurements,
    const FeatureCodec* codec);

}  // namespace del
