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

#include "dpboost/results.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dpboost {

using nlohmann::json;

void RunResult::finalize_stats() {
  if (fold_metrics.empty()) {
    mean = 0.0;
    stddev = 0.0;
    return;
  }
  double sum = 0.0;
  for (double m : fold_metrics) sum += m;
  mean = sum / fold_metrics.size();
  double sum_sq = 0.0;
  for (double m : fold_metrics) sum_sq += (m - mean) * (m - mean);
  stddev = std::sqrt(sum_sq / fold_metrics.size());
}

json RunResult::to_json() const {
  return json{{"mode", mode},
              {"task", task},
              {"metric", metric},
              {"eps", eps},
              {"trees", trees},
              {"ensemble_size", ensemble_size},
              {"seed", seed},
              {"fold_seeds", fold_seeds},
              {"fold_metrics", fold_metrics},
              {"mean", mean},
              {"stddev", stddev},
              {"seconds_per_tree", seconds_per_tree},
              {"ledger", ledger}};
}

RunResult RunResult::from_json(const json& j) {
  RunResult r;
  r.mode = j.at("mode").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.metric = j.at("metric").get<std::string>();
  r.eps = j.at("eps").get<double>();
  r.trees = j.at("trees").get<int>();
  r.ensemble_size = j.at("ensemble_size").get<int>();
  r.seed = j.at("seed").get<uint64_t>();
  r.fold_seeds = j.at("fold_seeds").get<std::vector<uint64_t>>();
  r.fold_metrics = j.at("fold_metrics").get<std::vector<double>>();
  r.mean = j.at("mean").get<double>();
  r.stddev = j.at("stddev").get<double>();
  r.seconds_per_tree = j.at("seconds_per_tree").get<double>();
  r.ledger = j.at("ledger");
  return r;
}

void append_csv_row(const std::string& path, const RunResult& result) {
  bool need_header = true;
  {
    std::ifstream probe(path);
    if (probe && probe.peek() != std::ifstream::traits_type::eof()) need_header = false;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  if (need_header) out << "eps,mean,std\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", result.eps, result.mean,
                result.stddev);
  out << buf;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dpboost
