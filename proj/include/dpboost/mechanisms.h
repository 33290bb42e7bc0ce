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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace dpboost {

/**
 * Deterministic random stream. One root seed drives a whole training run;
 * child streams are derived from (seed, ids) rather than from generator
 * state, so the draw order of one stream never affects another.
 */
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  // Uniform double in the open interval (0, 1).
  double uniform01();
  // Uniform integer in [0, bound). bound must be positive.
  uint64_t below(uint64_t bound);

  // Derived stream keyed by up to three ids (e.g. tree index, node id,
  // purpose tag). Pure function of (seed, a, b, c).
  Rng child(uint64_t a, uint64_t b = 0, uint64_t c = 0) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

// One draw from Laplace(0, scale) via inverse CDF. scale must be positive
// and finite.
double laplace_sample(Rng& rng, double scale);

struct ScoredCandidate {
  int id = 0;
  double utility = 0.0;  // the gain G of this candidate
};

// Selection probabilities exp(eps*u_i / (2*sensitivity)) / sum_j(...),
// computed with max-score subtraction.
std::vector<double> exp_mechanism_probabilities(
    const std::vector<ScoredCandidate>& candidates, double eps,
    double sensitivity);

// Samples one candidate id with the probabilities above.
int exp_mechanism_select(Rng& rng, const std::vector<ScoredCandidate>& candidates,
                         double eps, double sensitivity);

enum class Composition { kSequential, kParallel };

struct LedgerEntry {
  std::string scope;
  double eps = 0.0;
  Composition kind = Composition::kSequential;
};

/**
 * Auditable record of privacy budget consumption. Entries sharing a scope
 * label form one group; a parallel group contributes the max of its
 * members, a sequential group the sum, and groups compose sequentially
 * (their contributions add).
 */
class BudgetLedger {
 public:
  void record(const std::string& scope, double eps, Composition kind);
  double total() const;

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  nlohmann::json to_json() const;
  static BudgetLedger from_json(const nlohmann::json& j);

 private:
  std::vector<LedgerEntry> entries_;
};

}  // namespace dpboost
