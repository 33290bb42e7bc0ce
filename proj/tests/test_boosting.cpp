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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "dpboost/boosting.h"
#include "dpboost/model_io.h"
#include "support/synthetic.h"

using namespace dpboost;
using testsupport::make_classification;
using testsupport::make_regression;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoostParams quick_params(uint64_t seed, int depth = 2) {
  BoostParams params;
  params.depth_max = depth;
  params.seed = seed;
  return params;
}

}  // namespace

TEST_CASE("gdf_filter splits rows at |g| = g_star and reports the leftovers") {
  const std::vector<int> rows = {0, 1, 2};
  const std::vector<double> g = {0.5, -0.3, 1.2};
  const auto [kept, report] = gdf_filter(rows, g, 1.0);
  CHECK(kept == std::vector<int>{0, 1});
  CHECK_EQ(report.p, doctest::Approx(1.0 / 3.0));
  CHECK_EQ(report.mean_filtered_gradient, doctest::Approx(1.2));
  CHECK_EQ(report.error_bound, doctest::Approx((1.0 / 3.0) * (1.2 + 1.0)));
}

TEST_CASE("gdf_filter with nothing to drop reports a zero bound") {
  const std::vector<int> rows = {0, 1};
  const std::vector<double> g = {1.0, -1.0};  // boundary |g| = g_star is kept
  const auto [kept, report] = gdf_filter(rows, g, 1.0);
  CHECK_EQ(kept.size(), 2);
  CHECK_EQ(report.p, 0.0);
  CHECK_EQ(report.error_bound, 0.0);
}

TEST_CASE("glc_bound decays geometrically from g_star") {
  CHECK_EQ(glc_bound(1, 0.1, 1.0), doctest::Approx(1.0));
  CHECK_EQ(glc_bound(3, 0.1, 1.0), doctest::Approx(0.81));
  CHECK_EQ(glc_bound(20, 0.1, 1.0), doctest::Approx(std::pow(0.9, 19)));
  for (int t = 2; t <= 30; ++t) {
    CHECK_LT(glc_bound(t, 0.2, 1.0), glc_bound(t - 1, 0.2, 1.0));
  }
  CHECK_THROWS_AS(glc_bound(0, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(glc_bound(1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(glc_bound(1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("glc_clip clamps symmetrically and passes infinity through") {
  CHECK_EQ(glc_clip(0.7, 0.5), 0.5);
  CHECK_EQ(glc_clip(-0.7, 0.5), -0.5);
  CHECK_EQ(glc_clip(0.3, 0.5), 0.3);
  CHECK_EQ(glc_clip(123.0, kInf), 123.0);
  CHECK_THROWS_AS(glc_clip(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(glc_clip(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("leaf_sensitivity takes the smaller of the two bounds") {
  // Early trees: the 1/(1+lambda) term wins. Late trees: the geometric term.
  CHECK_EQ(leaf_sensitivity(1, 0.1, 1.0, 0.1), doctest::Approx(1.0 / 1.1));
  CHECK_EQ(leaf_sensitivity(20, 0.1, 1.0, 0.1),
           doctest::Approx(2.0 * std::pow(0.9, 19)));
  for (int t = 2; t <= 40; ++t) {
    CHECK_LE(leaf_sensitivity(t, 0.1, 1.0, 0.1), leaf_sensitivity(t - 1, 0.1, 1.0, 0.1));
  }
}

TEST_CASE("subset_schedule: geometric sizes, floors, remainder to the last slot") {
  CHECK(subset_schedule(1000, 0.1, 2) == std::vector<int>{526, 474});
  CHECK(subset_schedule(500, 0.3, 1) == std::vector<int>{500});
  CHECK(subset_schedule(0, 0.1, 3) == std::vector<int>{0, 0, 0});

  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng.below(5000));
    const double eta = 0.05 + 0.9 * rng.uniform01();
    const int size = 1 + static_cast<int>(rng.below(60));
    const auto sizes = subset_schedule(n, eta, size);
    CHECK_EQ(std::accumulate(sizes.begin(), sizes.end(), 0), n);
    for (size_t j = 0; j + 2 < sizes.size(); ++j) CHECK_GE(sizes[j], sizes[j + 1]);
  }

  CHECK_THROWS_AS(subset_schedule(10, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(subset_schedule(10, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(subset_schedule(-1, 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(subset_schedule(10, 0.1, 0), std::invalid_argument);
}

TEST_CASE("PrivacyConfig arithmetic and validation") {
  PrivacyConfig config;
  config.total_eps = 10.0;
  config.trees = 100;
  config.ensemble_size = 30;
  CHECK_EQ(config.n_ensembles(), 4);  // ceil(100/30)
  CHECK_EQ(config.eps_per_tree(), doctest::Approx(2.5));
  config.validate();

  config.ensemble_size = 50;
  CHECK_EQ(config.n_ensembles(), 2);
  CHECK_EQ(config.eps_per_tree(), doctest::Approx(5.0));

  PrivacyConfig bad = config;
  bad.total_eps = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.ensemble_size = 101;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.ensemble_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.trees = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("dpboost: ledger totals the advertised budget across ensembles") {
  const Dataset data = make_classification(400, 3, 1);

  PrivacyConfig config;
  config.total_eps = 10.0;
  config.trees = 100;
  config.ensemble_size = 10;
  const TrainReport report = train_dpboost(data, config, quick_params(5, 2));
  CHECK_EQ(report.model.ledger.total(), doctest::Approx(10.0).epsilon(1e-9));
  CHECK_EQ(report.trees.size(), 100);
  for (const auto& diag : report.trees) {
    CHECK_EQ(diag.eps_t, doctest::Approx(1.0));  // eps / n_ensembles
  }

  PrivacyConfig single;
  single.total_eps = 1.0;
  single.trees = 50;
  single.ensemble_size = 50;
  const TrainReport one = train_dpboost(data, single, quick_params(5, 2));
  CHECK_EQ(one.model.ledger.total(), doctest::Approx(1.0).epsilon(1e-9));

  // An uneven split still totals eps: ceil(5/2) = 3 ensembles.
  PrivacyConfig uneven;
  uneven.total_eps = 3.0;
  uneven.trees = 5;
  uneven.ensemble_size = 2;
  const TrainReport ragged = train_dpboost(data, uneven, quick_params(5, 2));
  CHECK_EQ(ragged.model.ledger.total(), doctest::Approx(3.0).epsilon(1e-9));
  CHECK_EQ(ragged.trees.back().ensemble, 2);
  CHECK_EQ(ragged.trees.back().position, 1);
}

TEST_CASE("dpboost: within an ensemble the drawn subsets are disjoint and scheduled") {
  const Dataset data = make_classification(600, 4, 9);
  PrivacyConfig config;
  config.total_eps = 4.0;
  config.trees = 20;
  config.ensemble_size = 10;
  const TrainReport report = train_dpboost(data, config, quick_params(31, 2));
  REQUIRE_EQ(report.trees.size(), 20);

  const auto schedule = subset_schedule(data.size(), 0.1, 10);
  for (int e = 0; e < 2; ++e) {
    std::set<int> seen;
    int covered = 0;
    for (const auto& diag : report.trees) {
      if (diag.ensemble != e) continue;
      CHECK_EQ(diag.subset_size, schedule[diag.position - 1]);
      CHECK_EQ(diag.subset_size, static_cast<int>(diag.subset_rows.size()));
      CHECK_LE(diag.trained_size, diag.subset_size);
      for (int row : diag.subset_rows) {
        const bool fresh = seen.insert(row).second;
        CHECK(fresh);
      }
      covered += diag.subset_size;
    }
    CHECK_EQ(covered, std::accumulate(schedule.begin(), schedule.end(), 0));
    CHECK_EQ(static_cast<int>(seen.size()), covered);
  }
}

TEST_CASE("dpboost honours the geometric clip bound on every stored leaf") {
  const Dataset data = make_regression(500, 4, 2026);
  PrivacyConfig config;
  config.total_eps = 2.0;
  config.trees = 20;
  config.ensemble_size = 20;
  const TrainReport report = train_dpboost(data, config, quick_params(8, 3));

  for (const auto& diag : report.trees) {
    CHECK_EQ(diag.clip_bound, doctest::Approx(glc_bound(diag.position, 0.1, 1.0)));
    for (const auto& leaf : diag.leaves) {
      CHECK_LE(std::abs(leaf.clipped_value), diag.clip_bound + 1e-12);
    }
  }
}

TEST_CASE("glc index mode switches between per-ensemble and global decay") {
  const Dataset data = make_classification(300, 3, 3);
  PrivacyConfig config;
  config.total_eps = 2.0;
  config.trees = 10;
  config.ensemble_size = 5;  // 2 ensembles

  const TrainReport local = train_dpboost(data, config, quick_params(4, 2));
  config.glc_index_mode = GlcIndexMode::kGlobal;
  const TrainReport global = train_dpboost(data, config, quick_params(4, 2));

  for (int t = 0; t < 10; ++t) {
    const auto& ld = local.trees[t];
    const auto& gd = global.trees[t];
    CHECK_EQ(ld.clip_bound, doctest::Approx(glc_bound(ld.position, 0.1, 1.0)));
    CHECK_EQ(gd.clip_bound, doctest::Approx(glc_bound(gd.tree_index, 0.1, 1.0)));
  }
  // Second ensemble: position restarts locally but not globally.
  CHECK_GT(local.trees[5].clip_bound, global.trees[5].clip_bound);
}

TEST_CASE("disabling clipping widens the bound and the noise") {
  const Dataset data = make_regression(300, 3, 14);
  PrivacyConfig config;
  config.total_eps = 2.0;
  config.trees = 10;
  config.ensemble_size = 10;
  BoostParams params = quick_params(6, 2);
  params.use_glc = false;
  const TrainReport report = train_dpboost(data, config, params);
  const TreeBudget budget = split_budget(2.0, 2);
  for (const auto& diag : report.trees) {
    CHECK_EQ(diag.clip_bound, kInf);
    CHECK_EQ(diag.noise_scale, doctest::Approx((1.0 / 1.1) / budget.eps_leaf));
  }
}

TEST_CASE("gradient filtering: the first tree never filters, later reports are consistent") {
  const Dataset data = make_regression(400, 4, 77);
  PrivacyConfig config;
  config.total_eps = 5.0;
  config.trees = 30;
  config.ensemble_size = 30;
  const TrainReport report = train_dpboost(data, config, quick_params(12, 3));

  CHECK_EQ(report.trees.front().filter.p, 0.0);
  CHECK_EQ(report.trees.front().filter.error_bound, 0.0);
  for (const auto& diag : report.trees) {
    CHECK_GE(diag.filter.p, 0.0);
    CHECK_LE(diag.filter.p, 1.0);
    CHECK_EQ(diag.filter.error_bound,
             doctest::Approx(diag.filter.p *
                             (std::abs(diag.filter.mean_filtered_gradient) + 1.0)));
    CHECK_EQ(diag.trained_size,
             diag.subset_size - static_cast<int>(std::lround(diag.filter.p *
                                                             diag.subset_size)));
  }
}

TEST_CASE("seq baseline: even budget split under sequential composition") {
  const Dataset data = make_classification(200, 3, 44);
  const TrainReport report = train_seq(data, 1.0, 10, quick_params(15, 2));
  CHECK_EQ(report.trees.size(), 10);
  CHECK_EQ(report.model.ledger.total(), doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& entry : report.model.ledger.entries()) {
    CHECK_EQ(entry.kind, Composition::kSequential);
  }
  for (const auto& diag : report.trees) {
    CHECK_EQ(diag.eps_t, doctest::Approx(0.1));
    CHECK_EQ(diag.subset_size, data.size());
    CHECK_EQ(diag.clip_bound, kInf);
    // delta_v / eps_leaf = (1/(1+lambda)) / (eps/(2T))
    CHECK_EQ(diag.noise_scale, doctest::Approx(2.0 * 10 / (1.1 * 1.0)));
  }
}

TEST_CASE("para baseline: halving pool, full budget per tree, early stop") {
  const Dataset data = make_classification(1000, 3, 10);
  const TrainReport report = train_para(data, 1.0, 20, quick_params(16, 2));

  const std::vector<int> expected_sizes = {500, 250, 125, 63, 31, 16, 8, 4, 2};
  REQUIRE_EQ(report.trees.size(), expected_sizes.size());
  std::set<int> seen;
  for (size_t t = 0; t < expected_sizes.size(); ++t) {
    const auto& diag = report.trees[t];
    CHECK_EQ(diag.subset_size, expected_sizes[t]);
    CHECK_EQ(diag.eps_t, doctest::Approx(1.0));
    for (int row : diag.subset_rows) {
      const bool fresh = seen.insert(row).second;
      CHECK(fresh);  // disjoint across the whole run
    }
  }
  CHECK_EQ(report.model.ledger.total(), doctest::Approx(1.0).epsilon(1e-9));
  CHECK_EQ(static_cast<int>(report.model.trees.size()), 9);
}

TEST_CASE("np baseline: exact greedy boosting with an empty ledger") {
  const Dataset data = make_classification(300, 3, 123);
  BoostParams params = quick_params(0, 3);
  params.max_bins = kNoBinLimit;
  const TrainReport report = train_np(data, 2, params);
  CHECK(report.model.ledger.empty());
  CHECK_EQ(report.trees.size(), 2);
  for (const auto& diag : report.trees) {
    CHECK_EQ(diag.eps_t, 0.0);
    CHECK_EQ(diag.noise_scale, 0.0);
    CHECK(diag.leaves.empty());
  }

  // The incremental raw-score cache matches a from-scratch gradient pass:
  // tree 2 equals the greedy tree built on the one-tree model's gradients.
  GbdtModel partial = report.model;
  partial.trees.resize(1);
  const auto g1 = compute_gradients(partial, data);
  const std::vector<int> all = data.all_indices();
  const Tree rebuilt = train_greedy_tree(data, all, g1, 3, params.lambda, params.max_bins);
  const Tree& second = report.model.trees[1];
  REQUIRE_EQ(rebuilt.nodes.size(), second.nodes.size());
  for (size_t i = 0; i < rebuilt.nodes.size(); ++i) {
    CHECK_EQ(rebuilt.nodes[i].is_leaf, second.nodes[i].is_leaf);
    CHECK_EQ(rebuilt.nodes[i].feature, second.nodes[i].feature);
    CHECK_EQ(rebuilt.nodes[i].threshold, second.nodes[i].threshold);
    CHECK_EQ(rebuilt.nodes[i].value, doctest::Approx(second.nodes[i].value).epsilon(1e-12));
  }
}

TEST_CASE("training is deterministic in the seed, and the seed matters") {
  const Dataset data = make_classification(250, 3, 8);
  PrivacyConfig config;
  config.total_eps = 2.0;
  config.trees = 10;
  config.ensemble_size = 5;

  const TrainReport a = train_dpboost(data, config, quick_params(99, 2));
  const TrainReport b = train_dpboost(data, config, quick_params(99, 2));
  const TrainReport c = train_dpboost(data, config, quick_params(100, 2));
  CHECK_EQ(model_to_json(a.model).dump(), model_to_json(b.model).dump());
  CHECK_NE(model_to_json(a.model).dump(), model_to_json(c.model).dump());
}

TEST_CASE("the dispatcher routes to the matching trainer and np ignores eps") {
  const Dataset data = make_classification(150, 3, 88);
  PrivacyConfig config;
  config.total_eps = 1.0;
  config.trees = 5;
  config.ensemble_size = 5;
  const BoostParams params = quick_params(3, 2);

  CHECK_EQ(model_to_json(train(data, TrainMode::kDpboost, config, params).model).dump(),
           model_to_json(train_dpboost(data, config, params).model).dump());
  CHECK_EQ(model_to_json(train(data, TrainMode::kSeq, config, params).model).dump(),
           model_to_json(train_seq(data, 1.0, 5, params).model).dump());
  CHECK_EQ(model_to_json(train(data, TrainMode::kPara, config, params).model).dump(),
           model_to_json(train_para(data, 1.0, 5, params).model).dump());

  PrivacyConfig ignored = config;
  ignored.total_eps = -5.0;  // np never reads it
  CHECK_EQ(model_to_json(train(data, TrainMode::kNp, ignored, params).model).dump(),
           model_to_json(train_np(data, 5, params).model).dump());
}

TEST_CASE("labels outside [-1, 1] are rejected up front") {
  std::vector<Instance> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].features = {{0, static_cast<double>(i)}};
    rows[i].label = 0.5;
  }
  rows[2].label = 1.5;
  const Dataset data(std::move(rows), 1, Task::kRegression, LabelScale{});
  CHECK_THROWS_AS(train_np(data, 2, quick_params(0)), std::invalid_argument);
}

TEST_CASE("eta and lambda parameter validation") {
  const Dataset data = make_classification(50, 3, 5);
  BoostParams params = quick_params(0);
  params.eta = 0.0;
  CHECK_THROWS_AS(train_np(data, 1, params), std::invalid_argument);
  params.eta = 1.5;
  CHECK_THROWS_AS(train_np(data, 1, params), std::invalid_argument);
  params.eta = 0.1;
  params.lambda = -0.1;
  CHECK_THROWS_AS(train_np(data, 1, params), std::invalid_argument);
}
