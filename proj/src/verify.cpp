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

#include "dpboost/verify.h"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "dpboost/boosting.h"
#include "dpboost/data.h"
#include "dpboost/mechanisms.h"
#include "dpboost/stats.h"

namespace dpboost {

namespace {

constexpr double kGStar = 1.0;
constexpr double kSlack = 1e-12;  // absorbs rounding at exact-equality extremes
constexpr std::array<double, 3> kLambdas = {0.0, 0.1, 1.0};

double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform01();
}

// Gain of one side, written out independently of the library's split_gain.
double side_term(double sum_g, int n, double lambda) {
  if (n == 0 && lambda == 0.0) return 0.0;
  return (sum_g * sum_g) / (n + lambda);
}

}  // namespace

VerifyResult verify_sensitivity_gain(long trials, uint64_t seed) {
  VerifyResult result;
  result.name = "sensitivity-gain";
  result.trials = trials;
  Rng rng(seed);
  const double bound = 3.0 * kGStar * kGStar;
  double worst_ratio = 0.0;

  for (long trial = 0; trial < trials; ++trial) {
    const double lambda = kLambdas[trial % kLambdas.size()];
    const int n = 1 + static_cast<int>(rng.below(50));
    double sum_left = 0.0, sum_right = 0.0;
    int n_left = 0, n_right = 0;
    for (int i = 0; i < n; ++i) {
      const double g = uniform_in(rng, -kGStar, kGStar);
      if (rng.below(2) == 0) {
        sum_left += g;
        ++n_left;
      } else {
        sum_right += g;
        ++n_right;
      }
    }
    const double gain1 = side_term(sum_left, n_left, lambda) +
                         side_term(sum_right, n_right, lambda);

    const double g_new = uniform_in(rng, -kGStar, kGStar);
    double gain2;
    if (rng.below(2) == 0) {
      gain2 = side_term(sum_left + g_new, n_left + 1, lambda) +
              side_term(sum_right, n_right, lambda);
    } else {
      gain2 = side_term(sum_left, n_left, lambda) +
              side_term(sum_right + g_new, n_right + 1, lambda);
    }

    const double delta = std::abs(gain2 - gain1);
    worst_ratio = std::max(worst_ratio, delta / bound);
    if (delta > bound + kSlack) ++result.violations;
  }

  result.passed = result.violations == 0;
  std::ostringstream details;
  details << "max |dG| / (3 g*^2) observed = " << worst_ratio;
  result.details = details.str();
  return result;
}

VerifyResult verify_sensitivity_leaf(long trials, uint64_t seed) {
  VerifyResult result;
  result.name = "sensitivity-leaf";
  result.trials = trials;
  Rng rng(seed);
  double worst_ratio = 0.0;

  for (long trial = 0; trial < trials; ++trial) {
    const double lambda = kLambdas[trial % kLambdas.size()];
    const double bound = kGStar / (1.0 + lambda);
    const int n = 1 + static_cast<int>(rng.below(50));
    double sum_g = 0.0;
    for (int i = 0; i < n; ++i) sum_g += uniform_in(rng, -kGStar, kGStar);

    const double v1 = -sum_g / (n + lambda);
    const double g_new = uniform_in(rng, -kGStar, kGStar);
    const double v2 = -(sum_g + g_new) / (n + 1 + lambda);
    const double delta = std::abs(v2 - v1);
    worst_ratio = std::max(worst_ratio, delta / bound);
    if (delta > bound + kSlack) ++result.violations;
  }

  // Worst case from the bound's derivation: every existing gradient at
  // -g_star, added gradient +g_star. At n=1, lambda=0 this meets the bound.
  double extremal_ratio_n1 = 0.0;
  for (double lambda : kLambdas) {
    const double bound = kGStar / (1.0 + lambda);
    for (int n = 1; n <= 50; ++n) {
      const double v1 = static_cast<double>(n) * kGStar / (n + lambda);
      const double v2 = (n - 1.0) * kGStar / (n + 1 + lambda);
      const double delta = std::abs(v1 - v2);
      if (delta > bound + kSlack) ++result.violations;
      if (n == 1 && lambda == 0.0) extremal_ratio_n1 = delta / bound;
    }
  }

  result.passed = result.violations == 0 && extremal_ratio_n1 >= 0.95;
  std::ostringstream details;
  details << "max |dV| (1+lambda) / g* observed = " << worst_ratio
          << "; extremal ratio at n=1, lambda=0 = " << extremal_ratio_n1;
  result.details = details.str();
  return result;
}

VerifyResult verify_gdf_bound(long trials, uint64_t seed) {
  VerifyResult result;
  result.name = "gdf-bound";
  result.trials = trials;
  Rng rng(seed);
  double worst_margin = 0.0;  // largest xi / bound with bound > 0

  for (long trial = 0; trial < trials; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(50));
    std::vector<double> gradients(n);
    std::vector<int> rows(n);
    for (int i = 0; i < n; ++i) {
      gradients[i] = uniform_in(rng, -2.5, 2.5);
      rows[i] = i;
    }
    double lambda = kLambdas[trial % kLambdas.size()];

    auto [kept, report] = gdf_filter(rows, gradients, kGStar);
    if (kept.empty() && lambda == 0.0) lambda = 0.1;  // keep V(kept) defined

    double sum_all = 0.0, sum_kept = 0.0;
    for (double g : gradients) sum_all += g;
    for (int row : kept) sum_kept += gradients[row];
    const double v_all = -sum_all / (n + lambda);
    const double v_kept = -sum_kept / (static_cast<double>(kept.size()) + lambda);
    const double xi = std::abs(v_all - v_kept);

    if (xi > report.error_bound + kSlack) ++result.violations;
    if (report.error_bound > 0.0) {
      worst_margin = std::max(worst_margin, xi / report.error_bound);
    } else if (xi > kSlack) {
      ++result.violations;  // nothing filtered must mean no shift at all
    }
  }

  result.passed = result.violations == 0;
  std::ostringstream details;
  details << "max xi / bound observed = " << worst_margin;
  result.details = details.str();
  return result;
}

VerifyResult verify_laplace(long draws, uint64_t seed) {
  VerifyResult result;
  result.name = "laplace";
  result.trials = draws;
  Rng rng(seed);
  const double scale = 1.0;
  const double tail_cut = std::log(100.0);

  std::vector<double> samples;
  samples.reserve(draws);
  double sum = 0.0, sum_sq = 0.0;
  long tail_count = 0;
  for (long i = 0; i < draws; ++i) {
    const double x = laplace_sample(rng, scale);
    samples.push_back(x);
    sum += x;
    sum_sq += x * x;
    if (std::abs(x) > tail_cut) ++tail_count;
  }
  const double mean = sum / draws;
  const double variance = sum_sq / draws - mean * mean;
  const double tail_freq = static_cast<double>(tail_count) / draws;
  const double ks = ks_statistic_laplace(std::move(samples), scale);

  // Gates pinned at the 10^6-draw scale: 2b^2 = 2 within 2%, tail mass
  // e^{-ln 100} = 0.01 within 0.002, KS < 0.005.
  if (!(std::abs(mean) <= 0.01)) ++result.violations;
  if (!(variance >= 1.96 && variance <= 2.04)) ++result.violations;
  if (!(std::abs(tail_freq - 0.01) <= 0.002)) ++result.violations;
  if (!(ks < 0.005)) ++result.violations;

  result.passed = result.violations == 0;
  std::ostringstream details;
  details << "mean = " << mean << ", variance = " << variance
          << ", tail freq = " << tail_freq << ", KS = " << ks;
  result.details = details.str();
  return result;
}

VerifyResult verify_expmech(long draws, uint64_t seed) {
  VerifyResult result;
  result.name = "expmech";
  result.trials = draws;
  Rng rng(seed);
  std::ostringstream details;

  // Scaled scores eps*u/(2*sens) = {0, ln 2, ln 4} -> probabilities 1:2:4.
  {
    const double eps = 2.0, sens = 1.0;
    const std::vector<ScoredCandidate> fixture = {
        {0, 0.0}, {1, std::log(2.0)}, {2, std::log(4.0)}};
    const std::array<double, 3> expected = {1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0};
    std::array<long, 3> counts = {0, 0, 0};
    for (long i = 0; i < draws; ++i) {
      ++counts[static_cast<size_t>(exp_mechanism_select(rng, fixture, eps, sens))];
    }
    details << "freqs = {";
    for (size_t k = 0; k < counts.size(); ++k) {
      const double freq = static_cast<double>(counts[k]) / draws;
      if (std::abs(freq - expected[k]) > 0.01) ++result.violations;
      details << (k ? ", " : "") << freq;
    }
    details << "}";
    const double p = chi_square_gof_pvalue(counts, expected);
    details << ", gof p = " << p;
    if (!(p > 0.001)) ++result.violations;
  }

  // Equal utilities: symmetry.
  {
    const std::vector<ScoredCandidate> fixture = {{0, 3.0}, {1, 3.0}};
    long first = 0;
    for (long i = 0; i < draws; ++i) {
      if (exp_mechanism_select(rng, fixture, 1.0, 1.0) == 0) ++first;
    }
    const double freq = static_cast<double>(first) / draws;
    details << "; equal-utility freq = " << freq;
    if (std::abs(freq - 0.5) > 0.01) ++result.violations;
  }

  // Huge eps: argmax dominates.
  {
    const std::vector<ScoredCandidate> fixture = {{0, 0.0}, {1, 1.0}, {2, 2.0}};
    const long argmax_draws = 10000;
    long top = 0;
    for (long i = 0; i < argmax_draws; ++i) {
      if (exp_mechanism_select(rng, fixture, 1e6, 1.0) == 2) ++top;
    }
    const double freq = static_cast<double>(top) / argmax_draws;
    details << "; argmax freq at eps=1e6 = " << freq;
    if (!(freq >= 0.999)) ++result.violations;
  }

  result.passed = result.violations == 0;
  result.details = details.str();
  return result;
}

namespace {

// Tiny deterministic classification set: three features, label by sign of a
// linear score, labels in {-1, +1}.
Dataset tiny_classification(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<Instance> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    Instance x;
    double score = 0.0;
    for (int f = 0; f < 3; ++f) {
      const double value = 2.0 * rng.uniform01() - 1.0;
      x.features.emplace_back(f, value);
      score += (f + 1) * value;
    }
    x.label = score >= 0.0 ? 1.0 : -1.0;
    rows.push_back(std::move(x));
  }
  return Dataset(std::move(rows), 3, Task::kClassification, LabelScale{});
}

}  // namespace

VerifyResult verify_ledger() {
  VerifyResult result;
  result.name = "ledger";
  const Dataset data = tiny_classification(60, 7);
  BoostParams params;
  params.depth_max = 2;
  params.seed = 11;

  struct Config {
    double eps;
    int trees;
    int ensemble_size;
  };
  const std::array<Config, 3> configs = {{{1.0, 50, 50}, {100.0, 1000, 50}, {5.0, 20, 20}}};

  std::ostringstream details;
  for (const Config& c : configs) {
    PrivacyConfig pc;
    pc.total_eps = c.eps;
    pc.trees = c.trees;
    pc.ensemble_size = c.ensemble_size;
    const double dp_total = train_dpboost(data, pc, params).model.ledger.total();
    const double seq_total = train_seq(data, c.eps, c.trees, params).model.ledger.total();
    const double para_total =
        train_para(data, c.eps, c.trees, params).model.ledger.total();
    result.trials += 3;
    if (std::abs(dp_total - c.eps) > 1e-9) ++result.violations;
    if (std::abs(seq_total - c.eps) > 1e-9) ++result.violations;
    if (std::abs(para_total - c.eps) > 1e-9) ++result.violations;
    details << "(eps=" << c.eps << ", T=" << c.trees << ", T_e=" << c.ensemble_size
            << "): dpboost=" << dp_total << " seq=" << seq_total
            << " para=" << para_total << "; ";
  }

  result.passed = result.violations == 0;
  result.details = details.str();
  return result;
}

}  // namespace dpboost
