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

#include "dpboost/gbdt.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpboost {

double max_initial_gradient(LossKind loss) {
  switch (loss) {
    case LossKind::kSquare:
      return 1.0;
  }
  throw std::invalid_argument("unknown loss");
}

int Tree::leaf_index(const Instance& x) const {
  if (nodes.empty()) throw std::logic_error("leaf_index on empty tree");
  int i = 0;
  while (!nodes[i].is_leaf) {
    const TreeNode& node = nodes[i];
    i = (x.feature(node.feature) <= node.threshold) ? node.left : node.right;
  }
  return i;
}

double Tree::value_at(const Instance& x) const { return nodes[leaf_index(x)].value; }

int Tree::n_leaves() const {
  int count = 0;
  for (const TreeNode& node : nodes) count += node.is_leaf ? 1 : 0;
  return count;
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> depth_of(nodes.size(), 0);
  int deepest = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, depth_of[i]);
    if (!nodes[i].is_leaf) {
      depth_of[nodes[i].left] = depth_of[i] + 1;
      depth_of[nodes[i].right] = depth_of[i] + 1;
    }
  }
  return deepest;
}

double GbdtModel::raw_score(const Instance& x) const {
  double score = 0.0;
  for (const Tree& tree : trees) score += eta * tree.value_at(x);
  return score;
}

double GbdtModel::predict_label(const Instance& x) const {
  return raw_score(x) < 0.0 ? -1.0 : 1.0;
}

double GbdtModel::predict_value(const Instance& x) const {
  const double clamped = std::clamp(raw_score(x), -1.0, 1.0);
  return label_scale.to_raw(clamped);
}

std::vector<double> compute_gradients(const GbdtModel& model, const Dataset& data) {
  std::vector<double> gradients(data.size());
  for (int i = 0; i < data.size(); ++i) {
    gradients[i] = model.raw_score(data.instance(i)) - data.label(i);
  }
  return gradients;
}

double split_gain(double sum_g_left, int n_left, double sum_g_right, int n_right,
                  double lambda) {
  double gain = 0.0;
  if (n_left > 0 || lambda > 0.0) gain += sum_g_left * sum_g_left / (n_left + lambda);
  if (n_right > 0 || lambda > 0.0) gain += sum_g_right * sum_g_right / (n_right + lambda);
  return gain;
}

double leaf_value(double sum_g, int n, double lambda) {
  if (n == 0 && lambda == 0.0) {
    throw std::invalid_argument("leaf_value: empty leaf with lambda = 0");
  }
  return -sum_g / (n + lambda);
}

namespace {

// Sorted (value, gradient) column for one feature over the node's rows.
struct Column {
  std::vector<double> values;   // ascending
  std::vector<double> prefix_g; // prefix_g[k] = sum of first k gradients
};

Column build_column(const Dataset& data, std::span<const int> rows,
                    std::span<const double> gradients, int feature) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(rows.size());
  for (int row : rows) {
    pairs.emplace_back(data.instance(row).feature(feature), gradients[row]);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Column col;
  col.values.reserve(pairs.size());
  col.prefix_g.reserve(pairs.size() + 1);
  col.prefix_g.push_back(0.0);
  for (const auto& [value, g] : pairs) {
    col.values.push_back(value);
    col.prefix_g.push_back(col.prefix_g.back() + g);
  }
  return col;
}

// Threshold values for this column: every distinct value except the largest
// when they fit in max_bins, otherwise quantile-rank boundaries.
std::vector<double> column_thresholds(const Column& col, int max_bins) {
  const size_t n = col.values.size();
  std::vector<double> distinct;
  for (size_t i = 0; i < n; ++i) {
    if (distinct.empty() || col.values[i] != distinct.back()) {
      distinct.push_back(col.values[i]);
    }
    if (max_bins != kNoBinLimit && distinct.size() > static_cast<size_t>(max_bins)) break;
  }
  if (distinct.size() < 2) return {};  // constant feature

  if (max_bins == kNoBinLimit || distinct.size() <= static_cast<size_t>(max_bins)) {
    distinct.pop_back();  // x <= max keeps the right side empty
    return distinct;
  }

  std::vector<double> thresholds;
  for (int b = 1; b < max_bins; ++b) {
    const size_t rank = n * static_cast<size_t>(b) / static_cast<size_t>(max_bins);
    if (rank == 0) continue;
    const double t = col.values[rank - 1];
    if (t >= col.values[n - 1]) continue;  // empty right side
    if (thresholds.empty() || t != thresholds.back()) thresholds.push_back(t);
  }
  return thresholds;
}

}  // namespace

std::vector<SplitCandidate> enumerate_candidates(const Dataset& data,
                                                 std::span<const int> node_rows,
                                                 std::span<const double> gradients,
                                                 double lambda, int max_bins) {
  if (node_rows.empty()) throw std::invalid_argument("enumerate_candidates: empty node");
  std::vector<SplitCandidate> candidates;
  const int n = static_cast<int>(node_rows.size());
  for (int f = 0; f < data.n_features(); ++f) {
    const Column col = build_column(data, node_rows, gradients, f);
    const double total_g = col.prefix_g.back();
    for (double t : column_thresholds(col, max_bins)) {
      // Count of values <= t; thresholds are observed values so 0 < k < n.
      const auto split = std::upper_bound(col.values.begin(), col.values.end(), t);
      const int k = static_cast<int>(split - col.values.begin());
      const double sum_left = col.prefix_g[k];
      candidates.push_back(
          {f, t, split_gain(sum_left, k, total_g - sum_left, n - k, lambda)});
    }
  }
  return candidates;
}

SplitPartition partition_by_split(const Dataset& data, std::span<const int> node_rows,
                                  int feature, double threshold) {
  SplitPartition out;
  for (int row : node_rows) {
    if (data.instance(row).feature(feature) <= threshold) {
      out.left.push_back(row);
    } else {
      out.right.push_back(row);
    }
  }
  return out;
}

namespace {

int grow_greedy(Tree& tree, const Dataset& data, std::vector<int> rows,
                std::span<const double> gradients, int depth, int depth_max,
                double lambda, int max_bins) {
  double sum_g = 0.0;
  for (int row : rows) sum_g += gradients[row];
  const int n = static_cast<int>(rows.size());

  auto make_leaf = [&]() {
    const int id = static_cast<int>(tree.nodes.size());
    TreeNode leaf;
    leaf.value = (n == 0) ? 0.0 : leaf_value(sum_g, n, lambda);
    tree.nodes.push_back(leaf);
    return id;
  };

  if (depth >= depth_max || n < 2) return make_leaf();
  const auto candidates = enumerate_candidates(data, rows, gradients, lambda, max_bins);
  if (candidates.empty()) return make_leaf();

  const SplitCandidate* best = &candidates[0];
  for (const SplitCandidate& c : candidates) {
    if (c.gain > best->gain) best = &c;
  }

  const int id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();  // placeholder; children are appended after it
  auto parts = partition_by_split(data, rows, best->feature, best->threshold);
  const int feature = best->feature;
  const double threshold = best->threshold;
  rows.clear();
  rows.shrink_to_fit();
  const int left = grow_greedy(tree, data, std::move(parts.left), gradients, depth + 1,
                               depth_max, lambda, max_bins);
  const int right = grow_greedy(tree, data, std::move(parts.right), gradients, depth + 1,
                                depth_max, lambda, max_bins);
  TreeNode& node = tree.nodes[id];
  node.is_leaf = false;
  node.feature = feature;
  node.threshold = threshold;
  node.left = left;
  node.right = right;
  return id;
}

}  // namespace

Tree train_greedy_tree(const Dataset& data, std::span<const int> rows,
                       std::span<const double> gradients, int depth_max,
                       double lambda, int max_bins) {
  if (depth_max < 1) throw std::invalid_argument("train_greedy_tree: depth_max < 1");
  Tree tree;
  grow_greedy(tree, data, std::vector<int>(rows.begin(), rows.end()), gradients, 0,
              depth_max, lambda, max_bins);
  return tree;
}

}  // namespace dpboost
