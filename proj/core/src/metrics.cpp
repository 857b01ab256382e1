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

#include "del/metrics.hpp"

#include <nlohmann/json.hpp>

#include "del/error.hpp"
#include "del/log.hpp"

namespace del {

double recall_prime_of(double recall, double accuracy, double acc_threshold) {
  return accuracy >= acc_threshold ? recall : -recall;
}

Metrics compute_metrics(std::span<const PredictionOutcome> outcomes,
                        double acc_threshold) {
  if (outcomes.empty()) throw Error("compute_metrics: no outcomes");
  Metrics m;
  m.n_samples = outcomes.size();
  std::size_t correct = 0;
  std::size_t true_pos = 0;
  std::size_t with_feat = 0;
  std::size_t critical_miss = 0;
  for (const auto& o : outcomes) {
    if (o.y == +1) {
      ++m.n_positive;
      if (o.predicted == +1) {
        ++true_pos;
      } else {
        ++m.false_neg;
      }
    } else if (o.predicted == +1) {
      ++m.false_pos;
    }
    if (o.predicted == o.y) ++correct;
    if (o.has_y_feat) {
      ++with_feat;
      if (!o.critical_hit) ++critical_miss;
    }
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.n_samples);
  if (m.n_positive == 0) {
    m.recall = 1.0;
    m.recall_vacuous = true;
    log::warn("recall is vacuous: no positive samples in the evaluation set");
  } else {
    m.recall =
        static_cast<double>(true_pos) / static_cast<double>(m.n_positive);
  }
  m.recall_prime = recall_prime_of(m.recall, m.accuracy, acc_threshold);
  m.false_critical_ratio =
      with_feat == 0 ? 0.0
                     : static_cast<double>(critical_miss) /
                           static_cast<double>(with_feat);
  return m;
}

nlohmann::json Metrics::to_json() const {
  return nlohmann::json{{"accuracy", accuracy},
                        {"recall", recall},
                        {"recall_prime", recall_prime},
                        {"false_critical_ratio", false_critical_ratio},
                        {"false_neg", false_neg},
                        {"false_pos", false_pos},
                        {"n_samples", n_samples},
                        {"n_positive", n_positive},
                        {"recall_vacuous", recall_vacuous}};
}

Metrics Metrics::from_json(const nlohmann::json& j) {
  Metrics m;
  m.accuracy = j.at("accuracy").get<double>();
  m.recall = j.at("recall").get<double>();
  m.recall_prime = j.at("recall_prime").get<double>();
  m.false_critical_ratio = j.at("false_critical_ratio").get<double>();
  m.false_neg = j.at("false_neg").get<std::size_t>();
  m.false_pos = j.at("false_pos").get<std::size_t>();
  m.n_samples = j.at("n_samples").get<std::size_t>();
  m.n_positive = j.at("n_positive").get<std::size_t>();
  m.recall_vacuous = j.at("recall_vacuous").get<bool>();
  return m;
}

}  // namespace del
