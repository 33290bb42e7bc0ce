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
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dpboost {

enum class Task { kClassification, kRegression };

// Affine map applied to raw labels: scaled = (raw - offset) / factor.
struct LabelScale {
  double offset = 0.0;
  double factor = 1.0;

  bool is_identity() const { return offset == 0.0 && factor == 1.0; }
  double to_raw(double scaled) const { return scaled * factor + offset; }
};

struct Instance {
  // Sparse features sorted by index; absent index means value 0.0.
  std::vector<std::pair<int, double>> features;
  double label = 0.0;

  double feature(int index) const;
};

/**
 * Immutable in-memory dataset. Instance order is the file order of the
 * source; labels are already scaled (classification in {-1,+1}, regression
 * in [-1,1] with the applied map recorded).
 */
class Dataset {
 public:
  Dataset(std::vector<Instance> instances, int n_features, Task task,
          LabelScale label_scale);

  int size() const { return static_cast<int>(instances_.size()); }
  int n_features() const { return n_features_; }
  Task task() const { return task_; }
  const Instance& instance(int i) const { return instances_[i]; }
  const std::vector<Instance>& instances() const { return instances_; }
  double label(int i) const { return instances_[i].label; }
  double raw_label(int i) const { return label_scale_.to_raw(instances_[i].label); }
  const LabelScale& label_scale() const { return label_scale_; }

  std::vector<int> all_indices() const;

 private:
  std::vector<Instance> instances_;
  int n_features_;
  Task task_;
  LabelScale label_scale_;
};

// Scales labels (treated as raw values) into [-1,1] by the min/max of the
// list and returns the applied map. A list already spanning exactly [-1,1]
// passes through unchanged; a constant list maps to 0 with factor 1.
LabelScale scale_labels_to_unit(std::vector<Instance>& instances);

// Loads a LIBSVM-format file (`label idx:val idx:val ...`, indices strictly
// increasing per line; 0- or 1-based detected from the minimum index seen).
// Classification labels must be in {0,1,-1,+1} and are mapped to {-1,+1};
// regression labels are scaled into [-1,1]. Throws on malformed input, with
// the offending line number in the message.
Dataset load_libsvm(const std::string& path, Task task);

// Writes in LIBSVM format with 1-based feature indices and round-trip-exact
// number formatting. Labels are written as stored (i.e. after any scaling),
// so a save/load cycle is the identity on the training view of the data.
void save_libsvm(const Dataset& dataset, const std::string& path);

// New dataset holding the given rows (label scale carried over unchanged).
Dataset take_subset(const Dataset& dataset, std::span<const int> indices);

// Re-derives the regression label map from the raw labels of the given rows
// and applies it to every row; rows outside the reference min/max may end up
// outside [-1,1]. Classification datasets pass through unchanged.
Dataset rescale_on(const Dataset& dataset, std::span<const int> reference_indices);

// Re-express the labels under a caller-supplied scale (e.g. evaluate a
// held-out file under the training set's map). Classification passes through.
// Labels outside the scale's source range land outside [-1, 1]; that is fine
// for evaluation but not for training.
Dataset apply_label_scale(const Dataset& dataset, const LabelScale& scale);

struct FoldSplit {
  int k = 0;
  std::vector<int> fold_assignments;  // per-instance fold in [0, k)

  std::vector<int> fold_indices(int fold) const;
  std::vector<int> complement_indices(int fold) const;
};

// Seeded permutation dealt round-robin into k folds; sizes differ by at
// most one. Pure function of (seed, n, k).
FoldSplit kfold_split(const Dataset& dataset, int k, uint64_t seed);

struct DisjointDraw {
  std::vector<int> picked;
  std::vector<int> remaining;
};

// Uniform draw of `count` elements without replacement; picked and
// remaining partition the pool. Pure function of (pool, count, seed).
DisjointDraw sample_disjoint(std::span<const int> pool, int count, uint64_t seed);

}  // namespace dpboost
