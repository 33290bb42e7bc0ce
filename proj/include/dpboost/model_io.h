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

#ifndef DPBOOST_MODEL_IO_H_
#define DPBOOST_MODEL_IO_H_

#include <string>

#include <json.hpp>

#include "dpboost/gbdt.h"

namespace dpboost {

inline constexpr int kModelFormatVersion = 1;

// Versioned model JSON:
// {version, task, eta, lambda, loss, label_scale, ledger,
//  trees: [{nodes: [{feature, threshold, left, right} | {leaf}]}]}.
// Children are node-array indices. Serialization is deterministic
// (sorted keys), so equal models dump byte-identically.
nlohmann::json model_to_json(const GbdtModel& model);
GbdtModel model_from_json(const nlohmann::json& j);

void save_model(const GbdtModel& model, const std::string& path);
GbdtModel load_model(const std::string& path);

}  // namespace dpboost

#endif  // DPBOOST_MODEL_IO_H_
