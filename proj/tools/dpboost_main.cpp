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

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpboost/boosting.h"
#include "dpboost/data.h"
#include "dpboost/metrics.h"
#include "dpboost/model_io.h"
#include "dpboost/results.h"
#include "dpboost/verify.h"

namespace {

using namespace dpboost;

struct CommonOpts {
  std::string data_path;
  std::string task = "cls";
  std::string mode = "dpboost";
  double eps = 0.0;
  bool eps_given = false;
  int trees = 0;
  int ensemble_size = 0;  // 0 -> min(50, trees)
  int depth = 6;
  double lambda = 0.1;
  double eta = 0.1;
  int bins = 32;
  uint64_t seed = 0;
  std::string glc_index = "ensemble";
  bool no_glc = false;
  std::string csv_path;
};

void add_common_options(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--data", o.data_path, "training data in LIBSVM format")->required();
  sub->add_option("--task", o.task, "cls or reg")
      ->check(CLI::IsMember({"cls", "reg"}));
  sub->add_option("--mode", o.mode, "dpboost, seq, para or np")
      ->check(CLI::IsMember({"dpboost", "seq", "para", "np"}));
  sub->add_option("--eps", o.eps, "total privacy budget (required unless --mode np)");
  sub->add_option("--trees", o.trees, "number of boosting trees")->required();
  sub->add_option("--ensemble-size", o.ensemble_size,
                  "trees per ensemble for dpboost (default min(50, trees))");
  sub->add_option("--depth", o.depth, "maximum tree depth")->capture_default_str();
  sub->add_option("--lambda", o.lambda, "leaf regularization")->capture_default_str();
  sub->add_option("--eta", o.eta, "shrinkage (learning rate)")->capture_default_str();
  sub->add_option("--bins", o.bins, "histogram bins per feature")->capture_default_str();
  sub->add_option("--seed", o.seed, "root random seed")->capture_default_str();
  sub->add_option("--glc-index", o.glc_index,
                  "clip-exponent indexing: ensemble (reset per ensemble) or global")
      ->check(CLI::IsMember({"ensemble", "global"}));
  sub->add_flag("--no-glc", o.no_glc, "disable geometric leaf clipping (dpboost)");
  sub->add_option("--csv", o.csv_path, "append an eps,mean,std row to this file");
}

// Returns an error message, or empty when the combination is usable.
std::string check_opts(const CLI::App* sub, CommonOpts& o) {
  o.eps_given = sub->count("--eps") > 0;
  if (o.trees < 1) return "--trees must be at least 1";
  if (o.mode == "np") {
    if (o.eps_given) std::cerr << "note: --eps is ignored for --mode np\n";
  } else if (!o.eps_given) {
    return "--eps is required for --mode " + o.mode;
  } else if (!(o.eps > 0.0)) {
    return "--eps must be positive";
  }
  if (o.ensemble_size == 0) o.ensemble_size = std::min(50, o.trees);
  if (o.ensemble_size < 1 || o.ensemble_size > o.trees) {
    return "--ensemble-size must be between 1 and --trees";
  }
  if (o.depth < 1) return "--depth must be at least 1";
  if (o.bins < 2) return "--bins must be at least 2";
  return "";
}

TrainMode parse_mode(const std::string& mode) {
  if (mode == "dpboost") return TrainMode::kDpboost;
  if (mode == "seq") return TrainMode::kSeq;
  if (mode == "para") return TrainMode::kPara;
  return TrainMode::kNp;
}

PrivacyConfig make_config(const CommonOpts& o) {
  PrivacyConfig config;
  config.total_eps = o.eps;
  config.trees = o.trees;
  config.ensemble_size = o.ensemble_size;
  config.glc_index_mode = o.glc_index == "global" ? GlcIndexMode::kGlobal
                                                  : GlcIndexMode::kEnsembleLocal;
  return config;
}

BoostParams make_params(const CommonOpts& o, uint64_t seed) {
  BoostParams params;
  params.depth_max = o.depth;
  params.lambda = o.lambda;
  params.eta = o.eta;
  params.max_bins = o.bins;
  params.seed = seed;
  params.use_glc = !o.no_glc;
  return params;
}

RunResult make_result(const CommonOpts& o, Task task) {
  RunResult result;
  result.mode = o.mode;
  result.task = task == Task::kClassification ? "classification" : "regression";
  result.metric = task == Task::kClassification ? "error" : "rmse";
  result.eps = o.mode == "np" ? 0.0 : o.eps;
  result.trees = o.trees;
  result.ensemble_size = o.mode == "dpboost" ? o.ensemble_size : 0;
  result.seed = o.seed;
  return result;
}

void emit(const RunResult& result, const CommonOpts& o) {
  std::cout << result.to_json().dump() << "\n";
  if (!o.csv_path.empty()) append_csv_row(o.csv_path, result);
}

int run_train(const CommonOpts& o, const std::string& model_path,
              const std::string& valid_path) {
  const Task task = o.task == "cls" ? Task::kClassification : Task::kRegression;
  const Dataset data = load_libsvm(o.data_path, task);
  std::cerr << "loaded " << data.size() << " instances, " << data.n_features()
            << " features from " << o.data_path << "\n";

  const TrainReport report =
      train(data, parse_mode(o.mode), make_config(o), make_params(o, o.seed));
  std::cerr << "trained " << report.model.trees.size() << " trees ("
            << report.seconds_per_tree << " s/tree)\n";
  save_model(report.model, model_path);
  std::cerr << "model written to " << model_path << "\n";

  RunResult result = make_result(o, task);
  result.seconds_per_tree = report.seconds_per_tree;
  result.ledger = report.model.ledger.to_json();
  if (!valid_path.empty()) {
    Dataset valid = load_libsvm(valid_path, task);
    valid = apply_label_scale(valid, data.label_scale());
    result.fold_metrics.push_back(evaluate(report.model, valid));
    std::cerr << result.metric << " on " << valid_path << " = "
              << result.fold_metrics.back() << "\n";
  }
  result.finalize_stats();
  emit(result, o);
  return 0;
}

int run_cv(const CommonOpts& o, int folds) {
  const Task task = o.task == "cls" ? Task::kClassification : Task::kRegression;
  const Dataset data = load_libsvm(o.data_path, task);
  std::cerr << "loaded " << data.size() << " instances, " << data.n_features()
            << " features from " << o.data_path << "\n";

  const Rng root(o.seed);
  const FoldSplit split = kfold_split(data, folds, root.child(99).seed());
  RunResult result = make_result(o, task);
  double seconds_sum = 0.0;

  for (int fold = 0; fold < folds; ++fold) {
    const std::vector<int> train_idx = split.complement_indices(fold);
    const std::vector<int> test_idx = split.fold_indices(fold);
    const Dataset rescaled =
        task == Task::kRegression ? rescale_on(data, train_idx) : data;
    const Dataset train_data = take_subset(rescaled, train_idx);
    const Dataset test_data = take_subset(rescaled, test_idx);

    const uint64_t fold_seed = root.child(100, static_cast<uint64_t>(fold)).seed();
    result.fold_seeds.push_back(fold_seed);
    const TrainReport report = train(train_data, parse_mode(o.mode), make_config(o),
                                     make_params(o, fold_seed));
    seconds_sum += report.seconds_per_tree;
    if (fold == 0) result.ledger = report.model.ledger.to_json();
    result.fold_metrics.push_back(evaluate(report.model, test_data));
    std::cerr << "fold " << (fold + 1) << "/" << folds << ": " << result.metric
              << " = " << result.fold_metrics.back() << "\n";
  }

  result.seconds_per_tree = seconds_sum / folds;
  result.finalize_stats();
  std::cerr << "mean " << result.metric << " = " << result.mean << " +/- "
            << result.stddev << "\n";
  emit(result, o);
  return 0;
}

int run_verify(const std::string& which, long trials, bool trials_given,
               uint64_t seed) {
  VerifyResult result;
  if (which == "sensitivity-gain") {
    result = verify_sensitivity_gain(trials_given ? trials : 100000, seed);
  } else if (which == "sensitivity-leaf") {
    result = verify_sensitivity_leaf(trials_given ? trials : 100000, seed);
  } else if (which == "gdf-bound") {
    result = verify_gdf_bound(trials_given ? trials : 10000, seed);
  } else if (which == "laplace") {
    result = verify_laplace(trials_given ? trials : 1000000, seed);
  } else if (which == "expmech") {
    result = verify_expmech(trials_given ? trials : 100000, seed);
  } else {
    result = verify_ledger();
  }

  nlohmann::json j{{"name", result.name},
                   {"passed", result.passed},
                   {"trials", result.trials},
                   {"violations", result.violations},
                   {"details", result.details}};
  std::cout << j.dump() << "\n";
  std::cerr << result.name << ": " << (result.passed ? "PASS" : "FAIL") << " ("
            << result.details << ")\n";
  return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private gradient boosted decision trees"};
  app.require_subcommand(1);

  CommonOpts train_opts;
  std::string model_path;
  std::string valid_path;
  CLI::App* train_sub = app.add_subcommand("train", "train a model on one file");
  add_common_options(train_sub, train_opts);
  train_sub->add_option("--model", model_path, "output model path")->required();
  train_sub->add_option("--valid", valid_path, "held-out file to evaluate");

  CommonOpts cv_opts;
  int folds = 5;
  CLI::App* cv_sub = app.add_subcommand("cv", "k-fold cross-validation");
  add_common_options(cv_sub, cv_opts);
  cv_sub->add_option("--folds", folds, "number of folds")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000));

  std::string verify_which;
  long verify_trials = 0;
  uint64_t verify_seed = 42;
  CLI::App* verify_sub = app.add_subcommand("verify", "run a built-in checker");
  verify_sub
      ->add_option("check", verify_which,
                   "one of: sensitivity-gain, sensitivity-leaf, gdf-bound, "
                   "laplace, expmech, ledger")
      ->required()
      ->check(CLI::IsMember({"sensitivity-gain", "sensitivity-leaf", "gdf-bound",
                             "laplace", "expmech", "ledger"}));
  verify_sub->add_option("--trials", verify_trials, "trial/draw count override");
  verify_sub->add_option("--seed", verify_seed, "seed for the checker")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_sub->parsed()) {
      const std::string problem = check_opts(train_sub, train_opts);
      if (!problem.empty()) {
        std::cerr << "error: " << problem << "\n";
        return 2;
      }
      return run_train(train_opts, model_path, valid_path);
    }
    if (cv_sub->parsed()) {
      const std::string problem = check_opts(cv_sub, cv_opts);
      if (!problem.empty()) {
        std::cerr << "error: " << problem << "\n";
        return 2;
      }
      return run_cv(cv_opts, folds);
    }
    return run_verify(verify_which, verify_trials, verify_sub->count("--trials") > 0,
                      verify_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
