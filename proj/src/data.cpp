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

#include "dpboost/data.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dpboost/mechanisms.h"

namespace dpboost {

double Instance::feature(int index) const {
  auto it = std::lower_bound(
      features.begin(), features.end(), index,
      [](const std::pair<int, double>& f, int idx) { return f.first < idx; });
  if (it != features.end() && it->first == index) return it->second;
  return 0.0;
}

Dataset::Dataset(std::vector<Instance> instances, int n_features, Task task,
                 LabelScale label_scale)
    : instances_(std::move(instances)),
      n_features_(n_features),
      task_(task),
      label_scale_(label_scale) {}

std::vector<int> Dataset::all_indices() const {
  std::vector<int> indices(instances_.size());
  std::iota(indices.begin(), indices.end(), 0);
  return indices;
}

LabelScale scale_labels_to_unit(std::vector<Instance>& instances) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Instance& x : instances) {
    lo = std::min(lo, x.label);
    hi = std::max(hi, x.label);
  }
  if (lo == -1.0 && hi == 1.0) return LabelScale{};  // already spanning [-1,1]
  if (lo == hi) {
    for (Instance& x : instances) x.label = 0.0;
    return LabelScale{lo, 1.0};
  }
  const double range = hi - lo;
  for (Instance& x : instances) {
    // Maps lo to exactly -1 and hi to exactly +1.
    x.label = -1.0 + 2.0 * ((x.label - lo) / range);
  }
  return LabelScale{(lo + hi) / 2.0, range / 2.0};
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, long line_no,
                             const std::string& what) {
  std::ostringstream msg;
  msg << path << ": parse error at line " << line_no << ": " << what;
  throw std::runtime_error(msg.str());
}

}  // namespace

Dataset load_libsvm(const std::string& path, Task task) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::vector<Instance> instances;
  std::string line;
  long line_no = 0;
  int min_index = std::numeric_limits<int>::max();
  int max_index = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;

    std::istringstream fields(line);
    Instance x;
    if (!(fields >> x.label)) parse_fail(path, line_no, "missing or malformed label");

    if (task == Task::kClassification) {
      if (x.label == 0.0 || x.label == -1.0) {
        x.label = -1.0;
      } else if (x.label == 1.0) {
        x.label = 1.0;
      } else {
        parse_fail(path, line_no, "classification label must be 0, 1, -1 or +1");
      }
    }

    std::string token;
    int prev_index = -1;
    while (fields >> token) {
      const size_t colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
        parse_fail(path, line_no, "malformed feature token '" + token + "'");
      }
      int index;
      double value;
      size_t idx_end, val_end;
      try {
        index = std::stoi(token.substr(0, colon), &idx_end);
        value = std::stod(token.substr(colon + 1), &val_end);
      } catch (const std::exception&) {
        parse_fail(path, line_no, "malformed feature token '" + token + "'");
      }
      if (idx_end != colon || val_end != token.size() - colon - 1) {
        parse_fail(path, line_no, "malformed feature token '" + token + "'");
      }
      if (index < 0) parse_fail(path, line_no, "negative feature index");
      if (index <= prev_index) {
        parse_fail(path, line_no, "feature indices must be strictly increasing");
      }
      prev_index = index;
      min_index = std::min(min_index, index);
      max_index = std::max(max_index, index);
      x.features.emplace_back(index, value);
    }
    instances.push_back(std::move(x));
  }

  if (instances.empty()) throw std::runtime_error(path + ": empty dataset");

  // 1-based files are shifted down; a file that ever uses index 0 is 0-based.
  const int base = (max_index >= 0 && min_index == 0) ? 0 : 1;
  int n_features = 0;
  if (max_index >= 0) {
    n_features = max_index - base + 1;
    if (base != 0) {
      for (Instance& x : instances) {
        for (auto& f : x.features) f.first -= base;
      }
    }
  }

  LabelScale scale;
  if (task == Task::kRegression) scale = scale_labels_to_unit(instances);
  return Dataset(std::move(instances), n_features, task, scale);
}

void save_libsvm(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  char buf[64];
  for (int i = 0; i < dataset.size(); ++i) {
    const Instance& x = dataset.instance(i);
    std::snprintf(buf, sizeof(buf), "%.17g", x.label);
    out << buf;
    for (const auto& [index, value] : x.features) {
      std::snprintf(buf, sizeof(buf), " %d:%.17g", index + 1, value);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset take_subset(const Dataset& dataset, std::span<const int> indices) {
  std::vector<Instance> rows;
  rows.reserve(indices.size());
  for (int i : indices) rows.push_back(dataset.instance(i));
  return Dataset(std::move(rows), dataset.n_features(), dataset.task(),
                 dataset.label_scale());
}

Dataset rescale_on(const Dataset& dataset, std::span<const int> reference_indices) {
  if (dataset.task() == Task::kClassification) return dataset;
  if (reference_indices.empty()) {
    throw std::invalid_argument("rescale_on: empty reference set");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i : reference_indices) {
    const double raw = dataset.raw_label(i);
    lo = std::min(lo, raw);
    hi = std::max(hi, raw);
  }

  LabelScale scale{(lo + hi) / 2.0, (hi - lo) / 2.0};
  if (lo == hi) scale = LabelScale{lo, 1.0};
  const double range = hi - lo;

  std::vector<Instance> rows = dataset.instances();
  for (int i = 0; i < dataset.size(); ++i) {
    const double raw = dataset.raw_label(i);
    rows[i].label = (range == 0.0) ? raw - lo : -1.0 + 2.0 * ((raw - lo) / range);
  }
  return Dataset(std::move(rows), dataset.n_features(), dataset.task(), scale);
}

Dataset apply_label_scale(const Dataset& dataset, const LabelScale& scale) {
  if (dataset.task() == Task::kClassification) return dataset;
  if (scale.factor == 0.0) throw std::invalid_argument("apply_label_scale: zero factor");
  std::vector<Instance> rows = dataset.instances();
  for (int i = 0; i < dataset.size(); ++i) {
    rows[i].label = (dataset.raw_label(i) - scale.offset) / scale.factor;
  }
  return Dataset(std::move(rows), dataset.n_features(), dataset.task(), scale);
}

std::vector<int> FoldSplit::fold_indices(int fold) const {
  std::vector<int> out;
  for (size_t i = 0; i < fold_assignments.size(); ++i) {
    if (fold_assignments[i] == fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> FoldSplit::complement_indices(int fold) const {
  std::vector<int> out;
  for (size_t i = 0; i < fold_assignments.size(); ++i) {
    if (fold_assignments[i] != fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

FoldSplit kfold_split(const Dataset& dataset, int k, uint64_t seed) {
  const int n = dataset.size();
  if (k < 2) throw std::invalid_argument("kfold_split: k must be at least 2");
  if (k > n) throw std::invalid_argument("kfold_split: k exceeds dataset size");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }

  FoldSplit split;
  split.k = k;
  split.fold_assignments.resize(n);
  for (int pos = 0; pos < n; ++pos) split.fold_assignments[perm[pos]] = pos % k;
  return split;
}

DisjointDraw sample_disjoint(std::span<const int> pool, int count, uint64_t seed) {
  if (count < 0 || static_cast<size_t>(count) > pool.size()) {
    throw std::invalid_argument("sample_disjoint: count exceeds pool size");
  }
  std::vector<int> items(pool.begin(), pool.end());
  Rng rng(seed);
  const size_t m = items.size();
  for (int j = 0; j < count; ++j) {
    const size_t idx = j + rng.below(m - j);
    std::swap(items[j], items[idx]);
  }
  DisjointDraw draw;
  draw.picked.assign(items.begin(), items.begin() + count);
  draw.remaining.assign(items.begin() + count, items.end());
  std::sort(draw.picked.begin(), draw.picked.end());
  std::sort(draw.remaining.begin(), draw.remaining.end());
  return draw;
}

}  // namespace dpboost
