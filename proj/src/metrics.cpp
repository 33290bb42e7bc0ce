// Copyright 2026 The DPBoost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpboost/metrics.h"

#include <cmath>
#include <stdexcept>

namespace dpboost {

double classification_error(const GbdtModel& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("empty evaluation set");
  int wrong = 0;
  for (int i = 0; i < data.size(); ++i) {
    const double truth = data.label(i) < 0.0 ? -1.0 : 1.0;
    if (model.predict_label(data.instance(i)) != truth) ++wrong;
  }
  return static_cast<double>(wrong) / data.size();
}

double regression_rmse(const GbdtModel& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("empty evaluation set");
  double sum_sq = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    const double diff = model.predict_value(data.instance(i)) - data.raw_label(i);
    sum_sq += diff * diff;
  }
  return std::sqrt(sum_sq / data.size());
}

double evaluate(const GbdtModel& model, const Dataset& data) {
  return data.task() == Task::kClassification ? classification_error(model, data)
                                              : regression_rmse(model, data);
}

double mean_training_loss(const GbdtModel& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("empty evaluation set");
  double sum = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    const double diff = model.raw_score(data.instance(i)) - data.label(i);
    sum += 0.5 * diff * diff;
  }
  return sum / data.size();
}

}  // namespace dpboost
