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

#include "dpboost/dp_tree.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "dpboost/boosting.h"

namespace dpboost {

TreeBudget split_budget(double eps_t, int depth_max) {
  if (!(eps_t > 0.0) || !std::isfinite(eps_t)) {
    throw std::invalid_argument("split_budget: eps_t must be positive and finite");
  }
  if (depth_max < 1) throw std::invalid_argument("split_budget: depth_max < 1");
  TreeBudget budget;
  budget.eps_t = eps_t;
  budget.eps_leaf = eps_t / 2.0;
  budget.eps_nleaf = eps_t / (2.0 * depth_max);
  budget.depth_max = depth_max;
  return budget;
}

namespace {

struct PendingNode {
  int id;
  std::vector<int> rows;
};

constexpr uint64_t kSplitStream = 1;
constexpr uint64_t kLeafStream = 2;

}  // namespace

DpTreeResult train_single_tree(const Dataset& data, std::span<const int> rows,
                               std::span<const double> gradients,
                               const TreeBudget& budget, double delta_g,
                               double delta_v, const Rng& rng,
                               const DpTreeOptions& options) {
  if (!(delta_g > 0.0)) throw std::invalid_argument("train_single_tree: delta_g <= 0");
  if (delta_v < 0.0) throw std::invalid_argument("train_single_tree: delta_v < 0");
  if (!(options.clip_bound > 0.0)) {
    throw std::invalid_argument("train_single_tree: clip_bound <= 0");
  }

  DpTreeResult result;
  result.tree.nodes.emplace_back();
  std::vector<PendingNode> frontier;
  frontier.push_back({0, std::vector<int>(rows.begin(), rows.end())});
  std::vector<PendingNode> settled;  // nodes that became leaves early

  for (int level = 1; level <= budget.depth_max; ++level) {
    const std::string scope = "level_" + std::to_string(level);
    std::vector<PendingNode> next;
    int splits_at_level = 0;
    for (PendingNode& node : frontier) {
      bool split_done = false;
      if (node.rows.size() >= 2) {
        const auto candidates =
            enumerate_candidates(data, node.rows, gradients, options.lambda,
                                 options.max_bins);
        if (!candidates.empty()) {
          std::vector<ScoredCandidate> scored;
          scored.reserve(candidates.size());
          for (size_t i = 0; i < candidates.size(); ++i) {
            scored.push_back({static_cast<int>(i), candidates[i].gain});
          }
          Rng node_rng = rng.child(kSplitStream, static_cast<uint64_t>(level),
                                   static_cast<uint64_t>(node.id));
          const int pick =
              exp_mechanism_select(node_rng, scored, budget.eps_nleaf, delta_g);
          result.ledger.record(scope, budget.eps_nleaf, Composition::kParallel);
          ++splits_at_level;

          const SplitCandidate& chosen = candidates[pick];
          auto parts =
              partition_by_split(data, node.rows, chosen.feature, chosen.threshold);
          const int left_id = static_cast<int>(result.tree.nodes.size());
          result.tree.nodes.emplace_back();
          result.tree.nodes.emplace_back();
          TreeNode& internal = result.tree.nodes[node.id];
          internal.is_leaf = false;
          internal.feature = chosen.feature;
          internal.threshold = chosen.threshold;
          internal.left = left_id;
          internal.right = left_id + 1;
          next.push_back({left_id, std::move(parts.left)});
          next.push_back({left_id + 1, std::move(parts.right)});
          split_done = true;
        }
      }
      if (!split_done) settled.push_back(std::move(node));
    }
    // A level with no splits still consumes its share of the budget.
    if (splits_at_level == 0) {
      result.ledger.record(scope, budget.eps_nleaf, Composition::kParallel);
    }
    frontier = std::move(next);
  }
  for (PendingNode& node : frontier) settled.push_back(std::move(node));

  for (const PendingNode& node : settled) {
    double sum_g = 0.0;
    for (int row : node.rows) sum_g += gradients[row];
    const int n = static_cast<int>(node.rows.size());

    LeafAudit audit;
    audit.node = node.id;
    audit.n_instances = n;
    audit.raw_value = (n == 0) ? 0.0 : leaf_value(sum_g, n, options.lambda);
    audit.clipped_value = glc_clip(audit.raw_value, options.clip_bound);
    audit.noised_value = audit.clipped_value;
    if (delta_v > 0.0) {
      Rng leaf_rng = rng.child(kLeafStream, static_cast<uint64_t>(node.id));
      audit.noised_value += laplace_sample(leaf_rng, delta_v / budget.eps_leaf);
    }
    result.ledger.record("leaves", budget.eps_leaf, Composition::kParallel);

    result.tree.nodes[node.id].value = audit.noised_value;
    result.leaves.push_back(audit);
  }
  return result;
}

}  // namespace dpboost
