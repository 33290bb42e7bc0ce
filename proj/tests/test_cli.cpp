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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpboost/mechanisms.h"
#include "dpboost/model_io.h"
#include "dpboost/results.h"

using nlohmann::json;

namespace {

struct RunOutput {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

RunOutput run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "cli_out_" + std::to_string(counter) + ".txt";
  const std::string err_path = "cli_err_" + std::to_string(counter) + ".txt";
  ++counter;
  const std::string cmd =
      std::string("\"") + DPBOOST_CLI_PATH + "\" " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunOutput result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

// Synthetic files written with raw (unscaled) labels, as a user would supply.
void write_classification_file(const std::string& path, int n, uint64_t seed) {
  dpboost::Rng rng(seed);
  std::ofstream out(path);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * rng.uniform01() - 1.0;
    const double b = 2.0 * rng.uniform01() - 1.0;
    const double c = 2.0 * rng.uniform01() - 1.0;
    const int label = (a + 0.5 * b > 0.0) ? 1 : -1;
    out << label << " 1:" << a << " 2:" << b << " 3:" << c << "\n";
  }
}

void write_regression_file(const std::string& path, int n, uint64_t seed) {
  dpboost::Rng rng(seed);
  std::ofstream out(path);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * rng.uniform01() - 1.0;
    const double b = 2.0 * rng.uniform01() - 1.0;
    const double y = 100.0 * a + 10.0 * b + (2.0 * rng.uniform01() - 1.0);
    out << y << " 1:" << a << " 2:" << b << "\n";
  }
}

struct TempPath {
  std::string path;
  explicit TempPath(std::string p) : path(std::move(p)) {}
  ~TempPath() { std::remove(path.c_str()); }
};

json parse_result_line(const std::string& stdout_text) {
  REQUIRE_FALSE(stdout_text.empty());
  return json::parse(stdout_text);
}

}  // namespace

TEST_CASE("train np: model on disk, empty ledger, result line on stdout") {
  TempPath data("cli_np.libsvm"), model("cli_np.model.json");
  write_classification_file(data.path, 200, 1);
  const RunOutput run = run_cli("train --data " + data.path + " --task cls --mode np" +
                                " --trees 5 --depth 3 --model " + model.path);
  CHECK_EQ(run.exit_code, 0);

  const dpboost::GbdtModel model_obj = dpboost::load_model(model.path);
  CHECK_EQ(model_obj.trees.size(), 5);
  CHECK(model_obj.ledger.empty());

  const json line = parse_result_line(run.out);
  CHECK_EQ(line.at("mode"), "np");
  CHECK_EQ(line.at("task"), "classification");
  CHECK_EQ(line.at("metric"), "error");
  CHECK_EQ(line.at("eps"), 0.0);
  CHECK_EQ(line.at("trees"), 5);
}

TEST_CASE("train is reproducible: same seed gives byte-identical model files") {
  TempPath data("cli_rep.libsvm"), m1("cli_rep1.json"), m2("cli_rep2.json"),
      m3("cli_rep3.json");
  write_classification_file(data.path, 150, 2);
  const std::string base = "train --data " + data.path +
                           " --mode dpboost --eps 2 --trees 8 --ensemble-size 4" +
                           " --depth 2 --model ";
  CHECK_EQ(run_cli(base + m1.path + " --seed 7").exit_code, 0);
  CHECK_EQ(run_cli(base + m2.path + " --seed 7").exit_code, 0);
  CHECK_EQ(run_cli(base + m3.path + " --seed 8").exit_code, 0);
  CHECK_EQ(slurp(m1.path), slurp(m2.path));
  CHECK_NE(slurp(m1.path), slurp(m3.path));
}

TEST_CASE("missing --eps for a private mode exits 2 with a clear message") {
  TempPath data("cli_noeps.libsvm"), model("cli_noeps.json");
  write_classification_file(data.path, 50, 3);
  const RunOutput run = run_cli("train --data " + data.path +
                                " --mode dpboost --trees 4 --model " + model.path);
  CHECK_EQ(run.exit_code, 2);
  CHECK_NE(run.err.find("--eps"), std::string::npos);
}

TEST_CASE("--ensemble-size larger than --trees exits 2") {
  TempPath data("cli_bad_te.libsvm"), model("cli_bad_te.json");
  write_classification_file(data.path, 50, 4);
  const RunOutput run =
      run_cli("train --data " + data.path + " --mode dpboost --eps 1 --trees 4" +
              " --ensemble-size 9 --model " + model.path);
  CHECK_EQ(run.exit_code, 2);
  CHECK_NE(run.err.find("--ensemble-size"), std::string::npos);
}

TEST_CASE("np ignores --eps but says so on stderr") {
  TempPath data("cli_np_eps.libsvm"), model("cli_np_eps.json");
  write_classification_file(data.path, 50, 5);
  const RunOutput run = run_cli("train --data " + data.path + " --mode np --eps 3" +
                                " --trees 2 --model " + model.path);
  CHECK_EQ(run.exit_code, 0);
  CHECK_NE(run.err.find("ignored"), std::string::npos);
}

TEST_CASE("unknown mode is rejected by argument parsing") {
  TempPath data("cli_badmode.libsvm"), model("cli_badmode.json");
  write_classification_file(data.path, 50, 6);
  const RunOutput run = run_cli("train --data " + data.path + " --mode banana" +
                                " --trees 2 --model " + model.path);
  CHECK_NE(run.exit_code, 0);
}

TEST_CASE("a missing data file exits 1 with an error line") {
  const RunOutput run = run_cli(
      "train --data does_not_exist.libsvm --mode np --trees 2 --model x.json");
  CHECK_EQ(run.exit_code, 1);
  CHECK_NE(run.err.find("error:"), std::string::npos);
}

TEST_CASE("cv emits one metric per fold and the line round-trips") {
  TempPath data("cli_cv.libsvm");
  write_classification_file(data.path, 240, 7);
  const RunOutput run = run_cli("cv --data " + data.path +
                                " --mode dpboost --eps 5 --trees 6 --ensemble-size 3" +
                                " --depth 2 --folds 4 --seed 11");
  CHECK_EQ(run.exit_code, 0);
  const json line = parse_result_line(run.out);
  CHECK_EQ(line.at("fold_metrics").size(), 4);
  CHECK_EQ(line.at("fold_seeds").size(), 4);
  CHECK_EQ(line.at("ensemble_size"), 3);
  CHECK_FALSE(line.at("ledger").at("entries").empty());

  const dpboost::RunResult parsed = dpboost::RunResult::from_json(line);
  CHECK_EQ(parsed.to_json().dump(), line.dump());

  double sum = 0.0;
  for (double m : parsed.fold_metrics) sum += m;
  CHECK_EQ(parsed.mean, doctest::Approx(sum / 4).epsilon(1e-12));
}

TEST_CASE("regression metrics are reported in the original label units") {
  TempPath train_file("cli_reg_train.libsvm"), valid_file("cli_reg_valid.libsvm"),
      model("cli_reg.json");
  write_regression_file(train_file.path, 500, 8);
  write_regression_file(valid_file.path, 200, 9);
  const RunOutput run = run_cli("train --data " + train_file.path + " --task reg" +
                                " --mode np --trees 40 --depth 4 --eta 0.3" +
                                " --model " + model.path + " --valid " + valid_file.path);
  CHECK_EQ(run.exit_code, 0);
  const json line = parse_result_line(run.out);
  CHECK_EQ(line.at("metric"), "rmse");
  const double rmse = line.at("fold_metrics").at(0).get<double>();
  // Labels span roughly [-110, 110]; a scaled-units mistake would be < 0.5.
  CHECK_GT(rmse, 0.5);
  CHECK_LT(rmse, 30.0);
}

TEST_CASE("cv works for regression with per-fold label rescaling") {
  TempPath data("cli_reg_cv.libsvm");
  write_regression_file(data.path, 300, 10);
  const RunOutput run = run_cli("cv --data " + data.path + " --task reg --mode np" +
                                " --trees 20 --depth 3 --eta 0.3 --folds 3");
  CHECK_EQ(run.exit_code, 0);
  const json line = parse_result_line(run.out);
  CHECK_EQ(line.at("fold_metrics").size(), 3);
  for (const auto& m : line.at("fold_metrics")) {
    CHECK_GT(m.get<double>(), 0.0);
    CHECK_LT(m.get<double>(), 40.0);
  }
}

TEST_CASE("--csv writes one header and appends one row per run") {
  TempPath data("cli_csv.libsvm"), csv("cli_curve.csv"), model("cli_csv_model.json");
  write_classification_file(data.path, 100, 12);
  const std::string base = "train --data " + data.path +
                           " --mode seq --trees 3 --depth 2 --model " + model.path +
                           " --csv " + csv.path + " --eps ";
  CHECK_EQ(run_cli(base + "1").exit_code, 0);
  CHECK_EQ(run_cli(base + "2").exit_code, 0);

  std::ifstream in(csv.path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE_EQ(lines.size(), 3);
  CHECK_EQ(lines[0], "eps,mean,std");
  CHECK_EQ(lines[1].substr(0, 2), "1,");
  CHECK_EQ(lines[2].substr(0, 2), "2,");
}

TEST_CASE("verify subcommand reports machine- and human-readable status") {
  const RunOutput run = run_cli("verify ledger");
  CHECK_EQ(run.exit_code, 0);
  const json line = parse_result_line(run.out);
  CHECK_EQ(line.at("name"), "ledger");
  CHECK_EQ(line.at("passed"), true);
  CHECK_NE(run.err.find("PASS"), std::string::npos);

  const RunOutput quick = run_cli("verify expmech --trials 20000 --seed 9");
  CHECK_EQ(quick.exit_code, 0);
}

TEST_CASE("verify rejects unknown checker names") {
  CHECK_NE(run_cli("verify banana").exit_code, 0);
}
