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

#ifndef DPBOOST_GBDT_H_
#define DPBOOST_GBDT_H_

#include <limits>
#include <span>
#include <vector>

#include "dpboost/data.h"
#include "dpboost/mechanisms.h"

namespace dpboost {

// Only square loss l(yhat, y) = 1/2 (yhat - y)^2 is supported. Its maximum
// initial 1-norm gradient over labels in [-1, 1] is 1, independent of data.
enum class LossKind { kSquare };

double max_initial_gradient(LossKind loss);

// A tree is a flat arena of nodes; nodes[0] is the root, children are
// referenced by index. Leaf values are stored unshrunk; shrinkage is
// applied at prediction time.
struct TreeNode {
  bool is_leaf = true;
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  bool empty() const { return nodes.empty(); }
  // Index of the leaf the instance is routed to (predicate x[f] <= threshold
  // goes left). Tree must be non-empty.
  int leaf_index(const Instance& x) const;
  double value_at(const Instance& x) const;
  int n_leaves() const;
  int depth() const;
};

struct GbdtModel {
  Task task = Task::kClassification;
  double eta = 0.1;
  double lambda = 0.1;
  LossKind loss = LossKind::kSquare;
  LabelScale label_scale;
  BudgetLedger ledger;
  std::vector<Tree> trees;

  // Sum over trees of eta * leaf value reached; empty model scores 0.
  double raw_score(const Instance& x) const;
  // Classification: sign of the raw score, ties resolved to +1.
  double predict_label(const Instance& x) const;
  // Regression: raw score clamped to [-1, 1], then mapped back to the
  // original label units.
  double predict_value(const Instance& x) const;
};

// First-order gradients of square loss at the model's current predictions:
// g_i = raw_score(x_i) - y_i. With no trees this is -y_i.
std::vector<double> compute_gradients(const GbdtModel& model, const Dataset& data);

// Gain of a split: sum_L^2/(n_L + lambda) + sum_R^2/(n_R + lambda).
// An empty side with lambda = 0 contributes 0 by convention.
double split_gain(double sum_g_left, int n_left, double sum_g_right, int n_right,
                  double lambda);

// Optimal leaf value -sum_g/(n + lambda); n = 0 requires lambda > 0.
double leaf_value(double sum_g, int n, double lambda);

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

inline constexpr int kNoBinLimit = std::numeric_limits<int>::max();

// Candidate splits for one node: per feature, thresholds are the boundaries
// of up-to-max_bins quantile bins over the node's values (every distinct
// value when their count fits). Candidates that would leave one side empty
// are dropped. Gradients are indexed by dataset row.
std::vector<SplitCandidate> enumerate_candidates(const Dataset& data,
                                                 std::span<const int> node_rows,
                                                 std::span<const double> gradients,
                                                 double lambda, int max_bins);

// Partition node rows by the predicate x[feature] <= threshold.
struct SplitPartition {
  std::vector<int> left;
  std::vector<int> right;
};
SplitPartition partition_by_split(const Dataset& data, std::span<const int> node_rows,
                                  int feature, double threshold);

// Greedy max-gain tree: recurse to depth_max, stop early on nodes with fewer
// than 2 instances or no candidates; exact optimal leaves, no noise.
Tree train_greedy_tree(const Dataset& data, std::span<const int> rows,
                       std::span<const double> gradients, int depth_max,
                       double lambda, int max_bins);

}  // namespace dpboost

#endif  // DPBOOST_GBDT_H_
