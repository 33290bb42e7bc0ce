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

#include "dpboost/stats.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace dpboost {

double laplace_cdf(double x, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace_cdf: scale <= 0");
  if (x < 0.0) return 0.5 * std::exp(x / scale);
  return 1.0 - 0.5 * std::exp(-x / scale);
}

double chi_square_survival(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_survival: dof < 1");
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double chi_square_gof_pvalue(std::span<const long> observed,
                             std::span<const double> expected_probs) {
  if (observed.size() != expected_probs.size() || observed.size() < 2) {
    throw std::invalid_argument("chi_square_gof_pvalue: need aligned bins (>= 2)");
  }
  long total = 0;
  for (long count : observed) total += count;
  if (total <= 0) throw std::invalid_argument("chi_square_gof_pvalue: no observations");
  double statistic = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    const double expected = total * expected_probs[i];
    if (!(expected > 0.0)) {
      throw std::invalid_argument("chi_square_gof_pvalue: non-positive expected count");
    }
    const double diff = observed[i] - expected;
    statistic += diff * diff / expected;
  }
  return chi_square_survival(statistic, static_cast<int>(observed.size()) - 1);
}

double ks_statistic_laplace(std::vector<double> samples, double scale) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic_laplace: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double cdf = laplace_cdf(samples[i], scale);
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return ks;
}

}  // namespace dpboost
