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

#ifndef DPBOOST_METRICS_H_
#define DPBOOST_METRICS_H_

#include "dpboost/data.h"
#include "dpboost/gbdt.h"

namespace dpboost {

// Fraction of instances whose predicted sign differs from the label.
double classification_error(const GbdtModel& model, const Dataset& data);

// RMSE in the original label units (predictions and labels are both mapped
// back through the label scale).
double regression_rmse(const GbdtModel& model, const Dataset& data);

// Task-appropriate metric: error for classification, RMSE for regression.
double evaluate(const GbdtModel& model, const Dataset& data);

// Mean square-loss training objective sum(1/2 (raw - y)^2) / n on the
// scaled labels; used by monotonicity checks.
double mean_training_loss(const GbdtModel& model, const Dataset& data);

}  // namespace dpboost

#endif  // DPBOOST_METRICS_H_
