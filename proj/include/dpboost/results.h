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

#ifndef DPBOOST_RESULTS_H_
#define DPBOOST_RESULTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dpboost {

// One training/evaluation run (single split or k-fold) in a form that can be
// emitted as a JSON line and aggregated into error-vs-eps curves.
struct RunResult {
  std::string mode;    // dpboost | seq | para | np
  std::string task;    // classification | regression
  std::string metric;  // error | rmse
  double eps = 0.0;    // 0 for np
  int trees = 0;
  int ensemble_size = 0;  // 0 when the mode has no ensembles
  uint64_t seed = 0;
  std::vector<uint64_t> fold_seeds;    // empty for single-split runs
  std::vector<double> fold_metrics;    // one entry per evaluation
  double mean = 0.0;
  double stddev = 0.0;
  double seconds_per_tree = 0.0;
  nlohmann::json ledger;  // audit block of the trained model (first fold)

  nlohmann::json to_json() const;
  static RunResult from_json(const nlohmann::json& j);

  // Fills mean/stddev from fold_metrics (population standard deviation).
  void finalize_stats();
};

// Appends "eps,mean,std" rows suitable for plotting; writes the header only
// when the file does not exist yet or is empty.
void append_csv_row(const std::string& path, const RunResult& result);

}  // namespace dpboost

#endif  // DPBOOST_RESULTS_H_
