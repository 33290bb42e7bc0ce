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

#ifndef DPBOOST_DP_TREE_H_
#define DPBOOST_DP_TREE_H_

#include <limits>
#include <span>
#include <vector>

#include "dpboost/data.h"
#include "dpboost/gbdt.h"
#include "dpboost/mechanisms.h"

namespace dpboost {

// Per-tree budget split: half to the leaves, the rest spread evenly over the
// depth_max internal levels, so eps_leaf + depth_max * eps_nleaf = eps_t.
struct TreeBudget {
  double eps_t = 0.0;
  double eps_leaf = 0.0;
  double eps_nleaf = 0.0;
  int depth_max = 0;
};

TreeBudget split_budget(double eps_t, int depth_max);

// Leaf bookkeeping for audits: the exact value, the value after clipping,
// and the stored (noised) value.
struct LeafAudit {
  int node = -1;
  int n_instances = 0;
  double raw_value = 0.0;
  double clipped_value = 0.0;
  double noised_value = 0.0;
};

struct DpTreeOptions {
  double lambda = 0.1;
  int max_bins = 32;
  // Leaf values are clipped to [-clip_bound, clip_bound] before noise;
  // infinity disables clipping.
  double clip_bound = std::numeric_limits<double>::infinity();
};

struct DpTreeResult {
  Tree tree;
  std::vector<LeafAudit> leaves;
  // One parallel group per internal level plus one for the leaves;
  // total() == eps_t by construction.
  BudgetLedger ledger;
};

// Train one differentially private tree on the (already filtered) rows.
// Each internal node picks its split with the exponential mechanism at
// (eps_nleaf, delta_g); each leaf stores clip(V) + Laplace(delta_v/eps_leaf).
// delta_v = 0 disables leaf noise (test mode only — not private).
// Every level is charged even when no node splits there, and every leaf is
// charged, so the per-tree ledger always totals eps_t.
DpTreeResult train_single_tree(const Dataset& data, std::span<const int> rows,
                               std::span<const double> gradients,
                               const TreeBudget& budget, double delta_g,
                               double delta_v, const Rng& rng,
                               const DpTreeOptions& options);

}  // namespace dpboost

#endif  // DPBOOST_DP_TREE_H_
