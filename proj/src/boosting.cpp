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

#include "dpboost/boosting.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpboost {

int PrivacyConfig::n_ensembles() const {
  return (trees + ensemble_size - 1) / ensemble_size;
}

double PrivacyConfig::eps_per_tree() const { return total_eps / n_ensembles(); }

void PrivacyConfig::validate() const {
  if (!(total_eps > 0.0) || !std::isfinite(total_eps)) {
    throw std::invalid_argument("privacy budget must be positive and finite");
  }
  if (trees < 1) throw std::invalid_argument("need at least one tree");
  if (ensemble_size < 1 || ensemble_size > trees) {
    throw std::invalid_argument("ensemble size must be in [1, trees]");
  }
}

std::pair<std::vector<int>, FilterReport> gdf_filter(std::span<const int> rows,
                                                     std::span<const double> gradients,
                                                     double g_star) {
  std::vector<int> kept;
  kept.reserve(rows.size());
  double filtered_sum = 0.0;
  int filtered_count = 0;
  for (int row : rows) {
    if (std::abs(gradients[row]) <= g_star) {
      kept.push_back(row);
    } else {
      filtered_sum += gradients[row];
      ++filtered_count;
    }
  }
  FilterReport report;
  if (!rows.empty()) {
    report.p = static_cast<double>(filtered_count) / static_cast<double>(rows.size());
  }
  if (filtered_count > 0) {
    report.mean_filtered_gradient = filtered_sum / filtered_count;
  }
  report.error_bound = report.p * (std::abs(report.mean_filtered_gradient) + g_star);
  return {std::move(kept), report};
}

double glc_bound(int tree_index, double eta, double g_star) {
  if (tree_index < 1) throw std::invalid_argument("glc_bound: index < 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("glc_bound: eta outside (0,1)");
  return g_star * std::pow(1.0 - eta, tree_index - 1);
}

double glc_clip(double value, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("glc_clip: bound <= 0");
  if (value > bound) return bound;
  if (value < -bound) return -bound;
  return value;
}

double leaf_sensitivity(int tree_index, double eta, double g_star, double lambda) {
  return std::min(g_star / (1.0 + lambda), 2.0 * glc_bound(tree_index, eta, g_star));
}

std::vector<int> subset_schedule(int n_total, double eta, int ensemble_size) {
  if (n_total < 0) throw std::invalid_argument("subset_schedule: negative n_total");
  if (ensemble_size < 1) throw std::invalid_argument("subset_schedule: T_e < 1");
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("subset_schedule: eta outside (0,1)");
  }
  // Fractions eta*(1-eta)^(j-1) over j=1..T_e sum to 1 - (1-eta)^T_e.
  const double normalizer = 1.0 - std::pow(1.0 - eta, ensemble_size);
  std::vector<int> sizes(ensemble_size);
  int assigned = 0;
  for (int j = 1; j <= ensemble_size; ++j) {
    const double fraction = eta * std::pow(1.0 - eta, j - 1) / normalizer;
    sizes[j - 1] = static_cast<int>(std::floor(n_total * fraction));
    assigned += sizes[j - 1];
  }
  sizes.back() += n_total - assigned;  // flooring remainder
  return sizes;
}

namespace {

void check_labels(const Dataset& data) {
  for (int i = 0; i < data.size(); ++i) {
    if (std::abs(data.label(i)) > 1.0) {
      throw std::invalid_argument("training labels must lie in [-1, 1]");
    }
  }
}

// Raw-score cache: prediction sums are maintained incrementally so each new
// tree costs one traversal per instance instead of re-walking the model.
struct Booster {
  const Dataset& data;
  GbdtModel model;
  std::vector<double> raw;

  Booster(const Dataset& data, const BoostParams& params)
      : data(data), raw(data.size(), 0.0) {
    check_labels(data);
    if (!(params.eta > 0.0 && params.eta <= 1.0)) {
      throw std::invalid_argument("eta must be in (0, 1]");
    }
    if (params.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    model.task = data.task();
    model.eta = params.eta;
    model.lambda = params.lambda;
    model.loss = LossKind::kSquare;
    model.label_scale = data.label_scale();
  }

  std::vector<double> gradients() const {
    std::vector<double> g(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) g[i] = raw[i] - data.label(i);
    return g;
  }

  void append(Tree tree) {
    for (int i = 0; i < data.size(); ++i) {
      raw[i] += model.eta * tree.value_at(data.instance(i));
    }
    model.trees.push_back(std::move(tree));
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TrainReport train_dpboost(const Dataset& data, const PrivacyConfig& config,
                          const BoostParams& params) {
  config.validate();
  Booster booster(data, params);
  TrainReport report;
  const auto start = std::chrono::steady_clock::now();

  const double g_star = max_initial_gradient(booster.model.loss);
  const double delta_g = 3.0 * g_star * g_star;
  const int n_ensembles = config.n_ensembles();
  const double eps_t = config.eps_per_tree();
  const Rng root(params.seed);

  int global_t = 0;
  for (int e = 0; e < n_ensembles && global_t < config.trees; ++e) {
    std::vector<int> pool = data.all_indices();
    const std::vector<int> schedule =
        subset_schedule(data.size(), params.eta, config.ensemble_size);
    const std::string scope = "ensemble_" + std::to_string(e);

    for (int pos = 1; pos <= config.ensemble_size && global_t < config.trees; ++pos) {
      ++global_t;
      const std::vector<double> gradients = booster.gradients();
      const int want = schedule[pos - 1];
      const int take = std::min<int>(want, static_cast<int>(pool.size()));
      const Rng draw_rng = root.child(1, static_cast<uint64_t>(e),
                                     static_cast<uint64_t>(pos));
      DisjointDraw draw = sample_disjoint(pool, take, draw_rng.seed());
      pool = std::move(draw.remaining);

      auto [kept, filter] = gdf_filter(draw.picked, gradients, g_star);
      const int glc_index =
          (config.glc_index_mode == GlcIndexMode::kEnsembleLocal) ? pos : global_t;
      const double clip = params.use_glc
                              ? glc_bound(glc_index, params.eta, g_star)
                              : std::numeric_limits<double>::infinity();
      const double delta_v =
          params.use_glc ? leaf_sensitivity(glc_index, params.eta, g_star, params.lambda)
                         : g_star / (1.0 + params.lambda);

      const TreeBudget budget = split_budget(eps_t, params.depth_max);
      const Rng tree_rng = root.child(2, static_cast<uint64_t>(e),
                                      static_cast<uint64_t>(pos));
      DpTreeResult trained =
          train_single_tree(data, kept, gradients, budget, delta_g, delta_v, tree_rng,
                            {params.lambda, params.max_bins, clip});
      booster.model.ledger.record(scope, eps_t, Composition::kParallel);

      TreeDiag diag;
      diag.tree_index = global_t;
      diag.ensemble = e;
      diag.position = pos;
      diag.subset_size = static_cast<int>(draw.picked.size());
      diag.trained_size = static_cast<int>(kept.size());
      diag.subset_rows = std::move(draw.picked);
      diag.filter = filter;
      diag.eps_t = eps_t;
      diag.clip_bound = clip;
      diag.noise_scale = delta_v / budget.eps_leaf;
      diag.leaves = std::move(trained.leaves);
      report.trees.push_back(std::move(diag));
      booster.append(std::move(trained.tree));
    }
  }

  report.model = std::move(booster.model);
  report.seconds_per_tree = seconds_since(start) / std::max(1, global_t);
  return report;
}

TrainReport train_seq(const Dataset& data, double eps, int trees,
                      const BoostParams& params) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("privacy budget must be positive and finite");
  }
  if (trees < 1) throw std::invalid_argument("need at least one tree");
  Booster booster(data, params);
  TrainReport report;
  const auto start = std::chrono::steady_clock::now();

  const double g_star = max_initial_gradient(booster.model.loss);
  const double delta_g = 3.0 * g_star * g_star;
  const double eps_t = eps / trees;
  const double delta_v = g_star / (1.0 + params.lambda);
  const std::vector<int> all = data.all_indices();
  const Rng root(params.seed);

  for (int t = 1; t <= trees; ++t) {
    const std::vector<double> gradients = booster.gradients();
    auto [kept, filter] = gdf_filter(all, gradients, g_star);
    const TreeBudget budget = split_budget(eps_t, params.depth_max);
    const Rng tree_rng = root.child(2, 0, static_cast<uint64_t>(t));
    DpTreeResult trained = train_single_tree(
        data, kept, gradients, budget, delta_g, delta_v, tree_rng,
        {params.lambda, params.max_bins, std::numeric_limits<double>::infinity()});
    booster.model.ledger.record("tree_" + std::to_string(t), eps_t,
                                Composition::kSequential);

    TreeDiag diag;
    diag.tree_index = t;
    diag.position = t;
    diag.subset_size = data.size();
    diag.trained_size = static_cast<int>(kept.size());
    diag.filter = filter;
    diag.eps_t = eps_t;
    diag.clip_bound = std::numeric_limits<double>::infinity();
    diag.noise_scale = delta_v / budget.eps_leaf;
    diag.leaves = std::move(trained.leaves);
    report.trees.push_back(std::move(diag));
    booster.append(std::move(trained.tree));
  }

  report.model = std::move(booster.model);
  report.seconds_per_tree = seconds_since(start) / trees;
  return report;
}

TrainReport train_para(const Dataset& data, double eps, int trees,
                       const BoostParams& params) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("privacy budget must be positive and finite");
  }
  if (trees < 1) throw std::invalid_argument("need at least one tree");
  Booster booster(data, params);
  TrainReport report;
  const auto start = std::chrono::steady_clock::now();

  const double g_star = max_initial_gradient(booster.model.loss);
  const double delta_g = 3.0 * g_star * g_star;
  const double delta_v = g_star / (1.0 + params.lambda);
  const Rng root(params.seed);

  std::vector<int> pool = data.all_indices();
  int trained_count = 0;
  for (int t = 1; t <= trees && pool.size() >= 2; ++t) {
    const std::vector<double> gradients = booster.gradients();
    const int take = static_cast<int>((pool.size() + 1) / 2);
    const Rng draw_rng = root.child(1, 0, static_cast<uint64_t>(t));
    DisjointDraw draw = sample_disjoint(pool, take, draw_rng.seed());
    pool = std::move(draw.remaining);

    auto [kept, filter] = gdf_filter(draw.picked, gradients, g_star);
    const TreeBudget budget = split_budget(eps, params.depth_max);
    const Rng tree_rng = root.child(2, 0, static_cast<uint64_t>(t));
    DpTreeResult trained = train_single_tree(
        data, kept, gradients, budget, delta_g, delta_v, tree_rng,
        {params.lambda, params.max_bins, std::numeric_limits<double>::infinity()});
    booster.model.ledger.record("trees", eps, Composition::kParallel);
    ++trained_count;

    TreeDiag diag;
    diag.tree_index = t;
    diag.position = t;
    diag.subset_size = static_cast<int>(draw.picked.size());
    diag.trained_size = static_cast<int>(kept.size());
    diag.subset_rows = std::move(draw.picked);
    diag.filter = filter;
    diag.eps_t = eps;
    diag.clip_bound = std::numeric_limits<double>::infinity();
    diag.noise_scale = delta_v / budget.eps_leaf;
    diag.leaves = std::move(trained.leaves);
    report.trees.push_back(std::move(diag));
    booster.append(std::move(trained.tree));
  }

  report.model = std::move(booster.model);
  report.seconds_per_tree = seconds_since(start) / std::max(1, trained_count);
  return report;
}

TrainReport train_np(const Dataset& data, int trees, const BoostParams& params) {
  if (trees < 1) throw std::invalid_argument("need at least one tree");
  Booster booster(data, params);
  TrainReport report;
  const auto start = std::chrono::steady_clock::now();

  const std::vector<int> all = data.all_indices();
  for (int t = 1; t <= trees; ++t) {
    const std::vector<double> gradients = booster.gradients();
    Tree tree = train_greedy_tree(data, all, gradients, params.depth_max,
                                  params.lambda, params.max_bins);
    TreeDiag diag;
    diag.tree_index = t;
    diag.position = t;
    diag.subset_size = data.size();
    diag.trained_size = data.size();
    report.trees.push_back(std::move(diag));
    booster.append(std::move(tree));
  }

  report.model = std::move(booster.model);
  report.seconds_per_tree = seconds_since(start) / trees;
  return report;
}

TrainReport train(const Dataset& data, TrainMode mode, const PrivacyConfig& config,
                  const BoostParams& params) {
  switch (mode) {
    case TrainMode::kDpboost:
      return train_dpboost(data, config, params);
    case TrainMode::kSeq:
      return train_seq(data, config.total_eps, config.trees, params);
    case TrainMode::kPara:
      return train_para(data, config.total_eps, config.trees, params);
    case TrainMode::kNp:
      return train_np(data, config.trees, params);
  }
  throw std::invalid_argument("unknown training mode");
}

}  // namespace dpboost
