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

#include "dpboost/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dpboost {

namespace {

// splitmix64 finalizer; used to mix seeds for child streams.
uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform01() {
  // 53-bit mantissa, offset by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Rejection sampling to avoid modulo bias.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

Rng Rng::child(uint64_t a, uint64_t b, uint64_t c) const {
  uint64_t s = seed_;
  s = mix64(s ^ mix64(a));
  s = mix64(s ^ mix64(b));
  s = mix64(s ^ mix64(c));
  return Rng(s);
}

double laplace_sample(Rng& rng, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("laplace_sample: scale must be positive and finite");
  }
  // Inverse CDF on u in (-0.5, 0.5): x = -b * sign(u) * ln(1 - 2|u|).
  const double u = rng.uniform01() - 0.5;
  return -scale * std::copysign(1.0, u) * std::log(1.0 - 2.0 * std::abs(u));
}

std::vector<double> exp_mechanism_probabilities(
    const std::vector<ScoredCandidate>& candidates, double eps,
    double sensitivity) {
  if (candidates.empty()) {
    throw std::invalid_argument("exp_mechanism: empty candidate list");
  }
  if (!(eps > 0.0) || !(sensitivity > 0.0)) {
    throw std::invalid_argument("exp_mechanism: eps and sensitivity must be positive");
  }
  std::vector<double> scores(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (!std::isfinite(candidates[i].utility)) {
      throw std::invalid_argument("exp_mechanism: non-finite utility");
    }
    scores[i] = eps * candidates[i].utility / (2.0 * sensitivity);
  }
  const double max_score = *std::max_element(scores.begin(), scores.end());
  double norm = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    norm += s;
  }
  for (double& s : scores) s /= norm;
  return scores;
}

int exp_mechanism_select(Rng& rng, const std::vector<ScoredCandidate>& candidates,
                         double eps, double sensitivity) {
  const std::vector<double> probs =
      exp_mechanism_probabilities(candidates, eps, sensitivity);
  const double r = rng.uniform01();
  double cumulative = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (r <= cumulative) return candidates[i].id;
  }
  return candidates.back().id;  // guard against rounding in the cumulative sum
}

void BudgetLedger::record(const std::string& scope, double eps, Composition kind) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("BudgetLedger::record: eps must be positive and finite");
  }
  entries_.push_back({scope, eps, kind});
}

double BudgetLedger::total() const {
  // Group contributions accumulate in first-appearance order so the result
  // is deterministic for a given entry list.
  std::vector<std::string> order;
  std::map<std::string, std::pair<Composition, double>> groups;
  for (const LedgerEntry& e : entries_) {
    auto it = groups.find(e.scope);
    if (it == groups.end()) {
      order.push_back(e.scope);
      groups.emplace(e.scope, std::make_pair(e.kind, e.eps));
      continue;
    }
    if (it->second.first != e.kind) {
      throw std::logic_error("BudgetLedger: mixed composition kinds in scope '" +
                             e.scope + "'");
    }
    if (e.kind == Composition::kParallel) {
      it->second.second = std::max(it->second.second, e.eps);
    } else {
      it->second.second += e.eps;
    }
  }
  double total = 0.0;
  for (const std::string& scope : order) total += groups.at(scope).second;
  return total;
}

nlohmann::json BudgetLedger::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const LedgerEntry& e : entries_) {
    entries.push_back({{"scope", e.scope},
                       {"eps", e.eps},
                       {"kind", e.kind == Composition::kParallel ? "parallel"
                                                                 : "sequential"}});
  }
  return {{"entries", entries}, {"total", entries_.empty() ? 0.0 : total()}};
}

BudgetLedger BudgetLedger::from_json(const nlohmann::json& j) {
  BudgetLedger ledger;
  for (const auto& e : j.at("entries")) {
    const std::string kind = e.at("kind").get<std::string>();
    if (kind != "parallel" && kind != "sequential") {
      throw std::runtime_error("BudgetLedger: unknown composition kind '" + kind + "'");
    }
    ledger.record(e.at("scope").get<std::string>(), e.at("eps").get<double>(),
                  kind == "parallel" ? Composition::kParallel
                                     : Composition::kSequential);
  }
  return ledger;
}

}  // namespace dpboost
