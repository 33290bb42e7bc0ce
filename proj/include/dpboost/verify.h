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

#ifndef DPBOOST_VERIFY_H_
#define DPBOOST_VERIFY_H_

#include <cstdint>
#include <string>

namespace dpboost {

struct VerifyResult {
  std::string name;
  bool passed = false;
  long trials = 0;
  long violations = 0;
  std::string details;
};

// Brute-force check that one added instance never moves the split gain by
// more than 3*g_star^2, over random instance sets (n <= 50, |g| <= 1,
// lambda in {0, 0.1, 1}, extra instance on either side).
VerifyResult verify_sensitivity_gain(long trials, uint64_t seed);

// Same regime for leaf values: one added instance never moves -sum_g/(n+lambda)
// by more than g_star/(1+lambda). Also checks that the worst-case
// configuration (added gradient +g_star against a set at -g_star each)
// reaches at least 95% of the bound at n=1, lambda=0.
VerifyResult verify_sensitivity_leaf(long trials, uint64_t seed);

// Random sets with gradients beyond the filter threshold: the leaf-value
// shift caused by filtering stays within p * (|mean filtered g| + g_star).
VerifyResult verify_gdf_bound(long trials, uint64_t seed);

// Laplace sampler calibration at scale 1. Gates are pinned for draws = 1e6:
// |mean| <= 0.01, variance in [1.96, 2.04], P(|X| > ln 100) within 0.01 +/-
// 0.002, Kolmogorov-Smirnov statistic < 0.005.
VerifyResult verify_laplace(long draws, uint64_t seed);

// Exponential-mechanism calibration: softmax frequencies on a three-candidate
// fixture within 0.01 with chi-square GOF p > 0.001, equal-utility symmetry,
// and argmax dominance at huge eps.
VerifyResult verify_expmech(long draws, uint64_t seed);

// Budget exactness: real trainings on a tiny dataset for the pinned
// (eps, trees, ensemble_size) configurations; composed ledger totals must
// equal the requested eps within 1e-9 for dpboost, seq and para.
VerifyResult verify_ledger();

}  // namespace dpboost

#endif  // DPBOOST_VERIFY_H_
