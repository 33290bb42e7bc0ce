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

#ifndef DPBOOST_BOOSTING_H_
#define DPBOOST_BOOSTING_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dpboost/data.h"
#include "dpboost/dp_tree.h"
#include "dpboost/gbdt.h"

namespace dpboost {

enum class TrainMode { kDpboost, kSeq, kPara, kNp };

// How the geometric-clipping exponent advances: reset at each ensemble
// (default; keeps bounds usable for long runs) or grow with the global tree
// index for the whole run.
enum class GlcIndexMode { kEnsembleLocal, kGlobal };

struct PrivacyConfig {
  double total_eps = 0.0;
  int trees = 0;          // T
  int ensemble_size = 0;  // T_e
  GlcIndexMode glc_index_mode = GlcIndexMode::kEnsembleLocal;

  int n_ensembles() const;      // ceil(T / T_e)
  double eps_per_tree() const;  // total_eps / n_ensembles()
  void validate() const;        // throws on eps <= 0 or T_e outside [1, T]
};

// Outcome of one gradient-based filtering pass: the fraction filtered out,
// the mean gradient of the filtered-out instances, and the resulting bound
// p * (|mean| + g_star) on the leaf-value approximation error.
struct FilterReport {
  double p = 0.0;
  double mean_filtered_gradient = 0.0;
  double error_bound = 0.0;
};

// Keep the rows with |g| <= g_star; report on the rest.
std::pair<std::vector<int>, FilterReport> gdf_filter(std::span<const int> rows,
                                                     std::span<const double> gradients,
                                                     double g_star);

// Clip threshold for the tree at 1-based index t: g_star * (1 - eta)^(t-1).
double glc_bound(int tree_index, double eta, double g_star);

// Symmetric clip; bound must be positive (infinity passes everything through).
double glc_clip(double value, double bound);

// Leaf sensitivity for the tree at index t:
// min(g_star/(1 + lambda), 2 * g_star * (1 - eta)^(t-1)).
double leaf_sensitivity(int tree_index, double eta, double g_star, double lambda);

// Subset sizes for one ensemble: size_j proportional to eta*(1-eta)^(j-1),
// largest first, floored, with the rounding remainder added to the last
// entry so the sizes sum exactly to n_total.
std::vector<int> subset_schedule(int n_total, double eta, int ensemble_size);

struct BoostParams {
  int depth_max = 6;
  double lambda = 0.1;
  double eta = 0.1;
  int max_bins = 32;
  uint64_t seed = 0;
  bool use_glc = true;  // dpboost only; baselines never clip
};

// Per-tree training diagnostics.
struct TreeDiag {
  int tree_index = 0;     // 1-based over the whole run
  int ensemble = 0;       // 0-based; always 0 for seq/para/np
  int position = 0;       // 1-based within the ensemble
  int subset_size = 0;    // rows drawn before filtering
  int trained_size = 0;   // rows remaining after filtering
  std::vector<int> subset_rows;  // the drawn rows (sorted)
  FilterReport filter;
  double eps_t = 0.0;
  double clip_bound = 0.0;
  double noise_scale = 0.0;  // Laplace scale applied to this tree's leaves
  std::vector<LeafAudit> leaves;
};

struct TrainReport {
  GbdtModel model;
  std::vector<TreeDiag> trees;
  double seconds_per_tree = 0.0;
};

// Ensemble-of-ensembles trainer: trees inside an ensemble train on disjoint
// scheduled subsets (parallel composition at eps_per_tree); ensembles compose
// sequentially, so the ledger totals exactly total_eps.
TrainReport train_dpboost(const Dataset& data, const PrivacyConfig& config,
                          const BoostParams& params);

// Baseline: every tree sees the full dataset at eps/T (sequential composition).
TrainReport train_seq(const Dataset& data, double eps, int trees,
                      const BoostParams& params);

// Baseline: each tree takes half of the remaining pool at full eps (parallel
// composition); stops once fewer than 2 instances remain.
TrainReport train_para(const Dataset& data, double eps, int trees,
                       const BoostParams& params);

// Non-private greedy baseline; empty ledger.
TrainReport train_np(const Dataset& data, int trees, const BoostParams& params);

// Dispatch on mode; eps is ignored for kNp.
TrainReport train(const Dataset& data, TrainMode mode, const PrivacyConfig& config,
                  const BoostParams& params);

}  // namespace dpboost

#endif  // DPBOOST_BOOSTING_H_
