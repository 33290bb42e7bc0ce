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

#ifndef DPBOOST_STATS_H_
#define DPBOOST_STATS_H_

#include <span>
#include <vector>

namespace dpboost {

// CDF of Laplace(0, scale) at x.
double laplace_cdf(double x, double scale);

// Upper tail P(X >= statistic) for a chi-square distribution.
double chi_square_survival(double statistic, int dof);

// Pearson chi-square goodness-of-fit p-value for observed counts against
// expected probabilities (counts and probs must align; probs sum to 1).
double chi_square_gof_pvalue(std::span<const long> observed,
                             std::span<const double> expected_probs);

// Kolmogorov-Smirnov statistic of samples against the Laplace(0, scale) CDF.
// Sorts a copy of the samples.
double ks_statistic_laplace(std::vector<double> samples, double scale);

}  // namespace dpboost

#endif  // DPBOOST_STATS_H_
