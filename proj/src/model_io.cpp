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

#include "dpboost/model_io.h"

#include <fstream>
#include <stdexcept>

namespace dpboost {

using nlohmann::json;

namespace {

json node_to_json(const TreeNode& node) {
  if (node.is_leaf) return json{{"leaf", node.value}};
  return json{{"feature", node.feature},
              {"threshold", node.threshold},
              {"left", node.left},
              {"right", node.right}};
}

TreeNode node_from_json(const json& j) {
  TreeNode node;
  if (j.contains("leaf")) {
    node.value = j.at("leaf").get<double>();
    return node;
  }
  node.is_leaf = false;
  node.feature = j.at("feature").get<int>();
  node.threshold = j.at("threshold").get<double>();
  node.left = j.at("left").get<int>();
  node.right = j.at("right").get<int>();
  return node;
}

}  // namespace

json model_to_json(const GbdtModel& model) {
  json trees = json::array();
  for (const Tree& tree : model.trees) {
    json nodes = json::array();
    for (const TreeNode& node : tree.nodes) nodes.push_back(node_to_json(node));
    trees.push_back(json{{"nodes", std::move(nodes)}});
  }
  return json{{"version", kModelFormatVersion},
              {"task", model.task == Task::kClassification ? "classification"
                                                           : "regression"},
              {"eta", model.eta},
              {"lambda", model.lambda},
              {"loss", "square"},
              {"label_scale", {{"offset", model.label_scale.offset},
                               {"factor", model.label_scale.factor}}},
              {"ledger", model.ledger.to_json()},
              {"trees", std::move(trees)}};
}

GbdtModel model_from_json(const json& j) {
  const int version = j.at("version").get<int>();
  if (version != kModelFormatVersion) {
    throw std::runtime_error("unsupported model format version " +
                             std::to_string(version));
  }
  GbdtModel model;
  const std::string task = j.at("task").get<std::string>();
  if (task == "classification") {
    model.task = Task::kClassification;
  } else if (task == "regression") {
    model.task = Task::kRegression;
  } else {
    throw std::runtime_error("unknown task '" + task + "'");
  }
  model.eta = j.at("eta").get<double>();
  model.lambda = j.at("lambda").get<double>();
  if (j.at("loss").get<std::string>() != "square") {
    throw std::runtime_error("unknown loss in model file");
  }
  model.loss = LossKind::kSquare;
  model.label_scale.offset = j.at("label_scale").at("offset").get<double>();
  model.label_scale.factor = j.at("label_scale").at("factor").get<double>();
  model.ledger = BudgetLedger::from_json(j.at("ledger"));
  for (const json& jt : j.at("trees")) {
    Tree tree;
    for (const json& jn : jt.at("nodes")) tree.nodes.push_back(node_from_json(jn));
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf) continue;
      const int size = static_cast<int>(tree.nodes.size());
      if (node.left < 0 || node.left >= size || node.right < 0 || node.right >= size) {
        throw std::runtime_error("model file has out-of-range child index");
      }
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

void save_model(const GbdtModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

GbdtModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace dpboost
