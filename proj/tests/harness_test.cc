//
// Copyright 2026 The dplinear Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dplinear/harness.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dplinear/data_io.h"
#include "dplinear/error.h"

namespace dplinear {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json Doc(double margin = 3.0) {
  json doc = json::parse(R"({
    "method": "least_squares",
    "epsilon": 1.0,
    "lambda": 1.0,
    "data": {"synthetic": {"n": 500, "d": 6, "m": 4, "noise": 0.5, "seed": 9}}
  })");
  doc["data"]["synthetic"]["margin"] = margin;
  return doc;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

// --- Config parsing ---

TEST(ParseRunConfigTest, Fields) {
  json doc = Doc();
  doc["iters"] = 7;
  doc["eta"] = 0.3;
  doc["clip"] = {{"feature", 2.0}, {"gradient", 0.5}};
  doc["method_params"] = {
      {"newton", {{"iters", 2}}},
      {"first_order", {{"bias", {{"enabled", true}, {"init", -3.0}}}}}};
  const RunConfig c = ParseRunConfig(doc);
  EXPECT_EQ(c.method, Method::kLeastSquares);
  EXPECT_EQ(c.epsilon, 1.0);
  EXPECT_EQ(c.delta, 1e-5);
  EXPECT_EQ(c.solver.iterations, 7);
  EXPECT_EQ(c.solver.gradient_clip, 0.5);
  ASSERT_TRUE(c.data.synthetic.has_value());
  EXPECT_EQ(c.data.synthetic->m, 4);

  const SolverConfig newton = ResolveSolverConfig(c, Method::kNewton, 3);
  EXPECT_EQ(newton.iterations, 2);
  EXPECT_EQ(newton.seed, 3u);
  EXPECT_EQ(newton.learning_rate, 0.3);
  EXPECT_FALSE(newton.use_bias);
  const SolverConfig fo = ResolveSolverConfig(c, Method::kFirstOrder, 0);
  EXPECT_EQ(fo.iterations, 7);
  EXPECT_TRUE(fo.use_bias);
  EXPECT_EQ(fo.bias_init, -3.0);
  EXPECT_EQ(fo.clip.feature_clip, 2.0);
}

TEST(ParseRunConfigTest, Rejections) {
  auto bad = [](json doc) {
    return CodeOf([&] { ParseRunConfig(doc); });
  };
  json doc = Doc();
  doc["bogus"] = 1;
  EXPECT_EQ(bad(doc), ErrorCode::kInvalidArgument);
  doc = Doc();
  doc["clip"] = {{"features", 1.0}};
  EXPECT_EQ(bad(doc), ErrorCode::kInvalidArgument);
  doc = Doc();
  doc["iters"] = "ten";
  EXPECT_EQ(bad(doc), ErrorCode::kInvalidArgument);
  doc = Doc();
  doc["method"] = "sgdd";
  EXPECT_EQ(bad(doc), ErrorCode::kInvalidArgument);
  doc = Doc();
  doc["grid"] = {{"lambda", json::array()}};
  EXPECT_EQ(bad(doc), ErrorCode::kInvalidArgument);
  doc = Doc();
  doc["data"]["format"] = "parquet";
  EXPECT_EQ(bad(doc), ErrorCode::kInvalidArgument);
}

TEST(ParseRunConfigTest, InfiniteEpsilonIsReference) {
  json doc = Doc();
  doc["epsilon"] = "inf";
  const SolverConfig s =
      ResolveSolverConfig(ParseRunConfig(doc), Method::kLeastSquares, 0);
  EXPECT_FALSE(s.sanitize);
}

TEST(ParseRunConfigTest, ExactlyOneOfEpsilonAndSigma) {
  json doc = Doc();
  doc["sigma"] = 2.0;
  EXPECT_EQ(CodeOf([&] {
              ResolveSolverConfig(ParseRunConfig(doc), Method::kNewton, 0);
            }),
            ErrorCode::kInvalidArgument);
  doc.erase("epsilon");
  doc.erase("sigma");
  EXPECT_EQ(CodeOf([&] {
              ResolveSolverConfig(ParseRunConfig(doc), Method::kNewton, 0);
            }),
            ErrorCode::kInvalidArgument);
  doc["sigma"] = 2.0;
  const SolverConfig s =
      ResolveSolverConfig(ParseRunConfig(doc), Method::kNewton, 0);
  EXPECT_TRUE(s.sanitize);
  EXPECT_EQ(s.sigma, 2.0);
}

TEST(ParseRunConfigTest, BadDeltaRejected) {
  json doc = Doc();
  doc["delta"] = 1.0;
  EXPECT_EQ(CodeOf([&] {
              ResolveSolverConfig(ParseRunConfig(doc), Method::kNewton, 0);
            }),
            ErrorCode::kInvalidArgument);
}

TEST(ParseRunConfigTest, LogRangeAxis) {
  json doc = Doc();
  doc["grid"] = {{"lambda", {{"log_range", {1e-2, 1e2}}, {"points", 5}}},
                 {"eta", {{"points", 17}}}};
  const RunConfig c = ParseRunConfig(doc);
  ASSERT_EQ(c.grid.lambdas.size(), 5u);
  EXPECT_NEAR(c.grid.lambdas[1], 0.1, 1e-15);
  ASSERT_EQ(c.grid.learning_rates.size(), 17u);
  EXPECT_NEAR(c.grid.learning_rates.front(), 1e-8, 1e-22);
  EXPECT_NEAR(c.grid.learning_rates.back(), 1e8, 1e-6);
}

TEST(LogGridTest, Examples) {
  const auto g = LogGrid(1e-3, 1e3, 7);
  ASSERT_EQ(g.size(), 7u);
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(std::log10(g[i]), i - 3, 1e-12);
  }
  EXPECT_EQ(LogGrid(5.0, 5.0, 1), std::vector<double>{5.0});
}

// --- Calibration ---

TEST(CalibrateTest, LeastSquaresExample) {
  const Calibration c = Calibrate({1.0, 1e-5}, Method::kLeastSquares, 1);
  EXPECT_NEAR(c.sigma, std::sqrt(1.5 / c.rho), 1e-12);
  EXPECT_NEAR(c.sigma, 8.488, 1e-3);
  EXPECT_EQ(c.coefficient, 1.5);
}

TEST(CalibrateTest, NewtonSigmaDoublesFromOneToFourSteps) {
  const Calibration a = Calibrate({1.0, 1e-5}, Method::kNewton, 1);
  const Calibration b = Calibrate({1.0, 1e-5}, Method::kNewton, 4);
  EXPECT_NEAR(b.sigma / a.sigma, 2.0, 1e-14);
}

TEST(CalibrateProperty, TripleIsConsistent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const double eps = std::exp(std::uniform_real_distribution<>(-5, 3)(rng));
    const double delta =
        std::exp(std::uniform_real_distribution<>(-30, -2)(rng));
    const Method method = static_cast<Method>(rng() % 4);
    const std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 100);
    const Calibration c = Calibrate({eps, delta}, method, t);
    const double rho_from_sigma = c.coefficient / (c.sigma * c.sigma);
    EXPECT_NEAR(rho_from_sigma / c.rho, 1.0, 1e-8);
    EXPECT_NEAR(EpsilonFromRho(rho_from_sigma, delta) / eps, 1.0, 1e-8);
  }
}

TEST(CalibrateTest, DeltaOneRejected) {
  EXPECT_EQ(CodeOf([] { Calibrate({1.0, 1.0}, Method::kNewton, 1); }),
            ErrorCode::kInvalidArgument);
}

// --- Train ---

TEST(RunTrainTest, WideMarginReferenceRun) {
  json doc = Doc(10.0);
  doc["epsilon"] = "inf";
  doc["lambda"] = 0.0;
  doc["append_bias_feature"] = true;
  const RunConfig c = ParseRunConfig(doc);
  const Splits s = LoadSplits(c);
  EXPECT_EQ(s.train.num_features(), 7);
  const TrainOutcome o = RunTrain(c, s, Method::kLeastSquares, 0);
  EXPECT_GE(o.test_top1, 0.99);
  EXPECT_EQ(o.result.report.total_rho, 0.0);
  const json j = ToJson(o);
  EXPECT_EQ(j["privacy"]["epsilon_target"], "inf");
}

TEST(RunTrainTest, ReportsAreIdenticalApartFromWallTime) {
  json doc = Doc();
  doc["method"] = "first_order";
  doc["iters"] = 5;
  const RunConfig c = ParseRunConfig(doc);
  const Splits s = LoadSplits(c);
  json a = ToJson(RunTrain(c, s, Method::kFirstOrder, 4));
  json b = ToJson(RunTrain(c, s, Method::kFirstOrder, 4));
  a.erase("wall_time_seconds");
  b.erase("wall_time_seconds");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(RunTrainTest, PrivacyBlockMatchesAccountant) {
  const RunConfig c = ParseRunConfig(Doc());
  const TrainOutcome o = RunTrain(c, LoadSplits(c), Method::kLeastSquares, 0);
  EXPECT_NEAR(o.result.report.total_rho / RhoFromEpsilonDelta({1.0, 1e-5}),
              1.0, 1e-10);
  EXPECT_NEAR(o.result.report.epsilon, 1.0, 1e-8);
}

TEST(LoadSplitsTest, MissingFileIsIoError) {
  json doc = Doc();
  doc["data"] = {{"train_features", "/nonexistent/x.bin"},
                 {"train_labels", "/nonexistent/y.bin"},
                 {"test_features", "/nonexistent/x.bin"},
                 {"test_labels", "/nonexistent/y.bin"}};
  EXPECT_EQ(CodeOf([&] { LoadSplits(ParseRunConfig(doc)); }), ErrorCode::kIo);
}

// --- Sweep ---

TEST(RunSweepTest, DegenerateSweepMatchesTrain) {
  const RunConfig c = ParseRunConfig(Doc());
  const Splits s = LoadSplits(c);
  const SweepResult sweep = RunSweep(c, s);
  ASSERT_EQ(sweep.rows.size(), 1u);
  EXPECT_EQ(sweep.rows[0].mean_accuracy,
            RunTrain(c, s, Method::kLeastSquares, 0).test_top1);
  EXPECT_EQ(sweep.rows[0].std_accuracy, 0.0);
}

TEST(RunSweepTest, RowsSortedAndConsistent) {
  json doc = Doc();
  doc["iters"] = 3;
  doc["eta"] = 0.1;
  doc["sweep"] = {{"epsilons", {8.0, 0.5, "inf"}},
                  {"seeds", {1, 2, 3, 4}},
                  {"methods", {"newton", "least_squares", "first_order"}}};
  const RunConfig c = ParseRunConfig(doc);
  const SweepResult sweep = RunSweep(c, LoadSplits(c));
  ASSERT_EQ(sweep.rows.size(), 9u);
  EXPECT_EQ(sweep.cells.size(), 36u);
  for (size_t i = 0; i < sweep.rows.size(); ++i) {
    const SweepRow& r = sweep.rows[i];
    if (i > 0) {
      const SweepRow& p = sweep.rows[i - 1];
      EXPECT_TRUE(MethodName(p.method) < MethodName(r.method) ||
                  (p.method == r.method && p.epsilon < r.epsilon));
    }
    ASSERT_EQ(r.accuracies.size(), 4u);
    // Recompute mean and sample std from the stored per-seed values.
    double mean = 0;
    for (double a : r.accuracies) mean += a / 4;
    double ss = 0;
    for (double a : r.accuracies) ss += (a - mean) * (a - mean);
    EXPECT_NEAR(r.mean_accuracy, mean, 1e-15);
    EXPECT_NEAR(r.std_accuracy, std::sqrt(ss / 3), 1e-15);
    if (std::isinf(r.epsilon)) {
      EXPECT_EQ(r.rho, 0.0);
    } else {
      EXPECT_NEAR(r.rho / RhoFromEpsilonDelta({r.epsilon, 1e-5}), 1.0, 1e-10);
    }
  }
}

TEST(RunSweepTest, FailuresAreRecordedPerCell) {
  json doc = Doc();
  doc["sweep"] = {{"seeds", {0, 1}}, {"methods", {"newton", "least_squares"}}};
  doc["method_params"] = {{"newton", {{"bias", {{"enabled", true}}}}}};
  const RunConfig c = ParseRunConfig(doc);
  const SweepResult sweep = RunSweep(c, LoadSplits(c));
  ASSERT_EQ(sweep.rows.size(), 2u);
  EXPECT_EQ(sweep.rows[0].method, Method::kLeastSquares);
  EXPECT_EQ(sweep.rows[0].failures, 0u);
  EXPECT_EQ(sweep.rows[1].failures, 2u);
  EXPECT_NEAR(sweep.rows[1].rho / RhoFromEpsilonDelta({1.0, 1e-5}), 1.0,
              1e-12);
  EXPECT_TRUE(sweep.rows[1].accuracies.empty());
  int errors = 0;
  for (const SweepCell& cell : sweep.cells) errors += !cell.error.empty();
  EXPECT_EQ(errors, 2);
}

TEST(RunSweepTest, JsonIsDeterministic) {
  json doc = Doc();
  doc["sweep"] = {{"epsilons", {0.5, 2.0}}, {"seeds", {0, 1, 2}}};
  const RunConfig c = ParseRunConfig(doc);
  const Splits s = LoadSplits(c);
  EXPECT_EQ(ToJson(RunSweep(c, s)).dump(), ToJson(RunSweep(c, s)).dump());
}

TEST(RunSweepTest, SigmaRejected) {
  json doc = Doc();
  doc.erase("epsilon");
  doc["sigma"] = 1.0;
  doc["sweep"] = {{"epsilons", {1.0}}};
  const RunConfig c = ParseRunConfig(doc);
  EXPECT_EQ(CodeOf([&] { RunSweep(c, LoadSplits(c)); }),
            ErrorCode::kInvalidArgument);
}

// --- Grid ---

TEST(RunGridTest, SinglePoint) {
  json doc = Doc();
  doc["grid"] = {{"lambda", {0.25}}, {"eta", {1.0}}, {"alpha", {0.1}}};
  const RunConfig c = ParseRunConfig(doc);
  const GridResult g = RunGrid(c, LoadSplits(c));
  ASSERT_EQ(g.points.size(), 1u);
  EXPECT_EQ(g.best.lambda, 0.25);
  EXPECT_EQ(g.best.alpha, 0.1);
  EXPECT_TRUE(g.best.accuracy.has_value());
}

TEST(RunGridTest, BestIsArgmaxByExhaustiveRecomputation) {
  json doc = Doc(1.0);
  doc["epsilon"] = "inf";
  doc["grid"] = {{"lambda", {{"log_range", {1e-2, 1e4}}, {"points", 7}}}};
  const RunConfig c = ParseRunConfig(doc);
  const Splits s = LoadSplits(c);
  const GridResult g = RunGrid(c, s);
  ASSERT_EQ(g.points.size(), 7u);

  const Eigen::Index cut = s.train.num_examples() * 8 / 10;
  const FeatureDataset fit = s.train.Slice(0, cut);
  const FeatureDataset valid = s.train.Slice(cut, s.train.num_examples());
  double best_acc = -1, best_lambda = 0;
  for (double lambda : c.grid.lambdas) {
    SolverConfig sc = ResolveSolverConfig(c, Method::kLeastSquares, 0);
    sc.lambda = lambda;
    ZcdpLedger ledger;
    const double acc = EvaluateTop1(Train(fit, sc, ledger).weights, valid);
    if (acc > best_acc) {
      best_acc = acc;
      best_lambda = lambda;
    }
  }
  EXPECT_EQ(g.best.lambda, best_lambda);
  EXPECT_EQ(*g.best.accuracy, best_acc);
}

TEST(RunGridTest, TiesGoToSmallerLambdaThenEta) {
  json doc = Doc(20.0);
  doc["epsilon"] = "inf";
  doc["method"] = "feature_covariance";
  doc["iters"] = 3;
  doc["grid"] = {{"lambda", {4.0, 1.0, 2.0}}, {"eta", {0.9, 0.5, 0.7}}};
  const RunConfig c = ParseRunConfig(doc);
  const GridResult g = RunGrid(c, LoadSplits(c));
  for (const GridPoint& p : g.points) ASSERT_EQ(*p.accuracy, 1.0);
  EXPECT_EQ(g.best.lambda, 1.0);
  EXPECT_EQ(g.best.learning_rate, 0.5);
}

TEST(RunGridTest, Deterministic) {
  json doc = Doc();
  doc["method"] = "first_order";
  doc["iters"] = 4;
  doc["grid"] = {{"eta", {0.01, 0.1}}, {"seeds", {1, 2}}};
  const RunConfig c = ParseRunConfig(doc);
  const Splits s = LoadSplits(c);
  EXPECT_EQ(ToJson(RunGrid(c, s)).dump(), ToJson(RunGrid(c, s)).dump());
}

TEST(RunGridTest, AllPointsFailing) {
  json doc = Doc();
  doc["method"] = "newton";
  doc["bias"] = {{"enabled", true}};
  doc["grid"] = {{"lambda", {1.0, 2.0}}};
  const RunConfig c = ParseRunConfig(doc);
  const Splits s = LoadSplits(c);
  EXPECT_THROW(RunGrid(c, s), Error);
}

// --- Command line ---

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
#ifndef DPLINEAR_CLI_PATH
    GTEST_SKIP() << "command-line tool not built";
#endif
    dir_ = fs::temp_directory_path() /
           ("dplinear_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(const std::string& args, std::string* out = nullptr) {
    const fs::path stdout_path = dir_ / "stdout.txt";
#ifdef DPLINEAR_CLI_PATH
    const std::string cli = DPLINEAR_CLI_PATH;
#else
    const std::string cli = "false";
#endif
    const std::string cmd = cli + " " + args +
                            " > " + stdout_path.string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (out != nullptr) {
      std::ifstream in(stdout_path);
      std::stringstream ss;
      ss << in.rdbuf();
      *out = ss.str();
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string WriteConfig(const json& doc, const std::string& name) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump();
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, CalibrateJson) {
  std::string out;
  ASSERT_EQ(Run("calibrate --epsilon 1 --delta 1e-5 --method least_squares "
                "--json",
                &out),
            0);
  const json j = json::parse(out);
  EXPECT_NEAR(j["sigma"].get<double>(), 8.488, 1e-3);
  EXPECT_NEAR(j["rho"].get<double>(), 0.020820, 1e-6);
}

TEST_F(CliTest, CalibrateFromRho) {
  std::string out;
  ASSERT_EQ(Run("calibrate --rho 0.5 --method first_order --iters 8 --json",
                &out),
            0);
  const json j = json::parse(out);
  EXPECT_NEAR(j["rho"].get<double>(), 0.5, 1e-10);
  // T/2 = 4, so sigma = sqrt(4 / 0.5).
  EXPECT_NEAR(j["sigma"].get<double>(), std::sqrt(8.0), 1e-9);
  EXPECT_EQ(Run("calibrate --rho 0.5 --epsilon 1 --method newton"), 1);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Run("calibrate --epsilon 1 --delta 1 --method newton"), 1);
  EXPECT_EQ(Run("calibrate --epsilon 1 --method nope"), 1);
  EXPECT_EQ(Run("calibrate --epsilon abc --method newton"), 1);
  EXPECT_EQ(Run("frobnicate"), 1);
  EXPECT_EQ(Run(""), 1);
  const std::string cfg = WriteConfig(Doc(), "c.json");
  EXPECT_EQ(Run("train --config " + cfg + " --epsilon 1 --sigma 2"), 1);
  EXPECT_EQ(Run("train --config " + (dir_ / "missing.json").string()), 1);
  json bad = Doc();
  bad["unknown"] = true;
  EXPECT_EQ(Run("train --config " + WriteConfig(bad, "bad.json")), 1);
}

TEST_F(CliTest, TrainWritesReport) {
  json doc = Doc(10.0);
  const std::string cfg = WriteConfig(doc, "c.json");
  const std::string report = (dir_ / "r.json").string();
  ASSERT_EQ(Run("train --config " + cfg + " --epsilon inf --out " + report),
            0);
  std::ifstream in(report);
  const json j = json::parse(in);
  EXPECT_GE(j["test_top1"].get<double>(), 0.99);
  EXPECT_EQ(j["privacy"]["rho_spent"].get<double>(), 0.0);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  json doc = Doc();
  doc["data"] = {{"train_features", (dir_ / "nope.bin").string()},
                 {"train_labels", (dir_ / "nope.bin").string()},
                 {"test_features", (dir_ / "nope.bin").string()},
                 {"test_labels", (dir_ / "nope.bin").string()}};
  EXPECT_EQ(Run("train --config " + WriteConfig(doc, "c.json")), 2);

  std::ofstream(dir_ / "garbage.bin") << "not a dataset at all, no sir";
  doc["data"]["train_features"] = (dir_ / "garbage.bin").string();
  EXPECT_EQ(Run("train --config " + WriteConfig(doc, "c2.json")), 2);
}

TEST_F(CliTest, SingularSystemExitsThree) {
  // Two identical columns and no ridge: the normal equations are singular.
  std::ofstream(dir_ / "x.csv") << "1,1\n2,2\n3,3\n";
  std::ofstream(dir_ / "y.csv") << "0\n1\n0\n";
  json doc = Doc();
  doc["lambda"] = 0.0;
  doc["epsilon"] = "inf";
  doc["data"] = {{"format", "csv"},
                 {"train_features", (dir_ / "x.csv").string()},
                 {"train_labels", (dir_ / "y.csv").string()},
                 {"test_features", (dir_ / "x.csv").string()},
                 {"test_labels", (dir_ / "y.csv").string()}};
  EXPECT_EQ(Run("train --config " + WriteConfig(doc, "c.json")), 3);
}

TEST_F(CliTest, SynthThenTrainFromFiles) {
  ASSERT_EQ(Run("synth --n 400 --d 4 --m 3 --margin 8 --noise 0.2 --seed 3 "
                "--out " + (dir_ / "data").string()),
            0);
  json doc = Doc();
  doc["data"] = {{"train_features", (dir_ / "data/train_features.bin").string()},
                 {"train_labels", (dir_ / "data/train_labels.bin").string()},
                 {"test_features", (dir_ / "data/test_features.bin").string()},
                 {"test_labels", (dir_ / "data/test_labels.bin").string()}};
  std::string out;
  ASSERT_EQ(Run("train --json --epsilon inf --config " +
                    WriteConfig(doc, "c.json"),
                &out),
            0);
  EXPECT_GE(json::parse(out)["test_top1"].get<double>(), 0.95);
}

TEST_F(CliTest, SweepOutputIsByteIdentical) {
  json doc = Doc();
  doc["sweep"] = {{"epsilons", {0.5, 4.0}}, {"seeds", {0, 1}}};
  const std::string cfg = WriteConfig(doc, "c.json");
  const std::string a = (dir_ / "a.json").string();
  const std::string b = (dir_ / "b.json").string();
  ASSERT_EQ(Run("sweep --config " + cfg + " --out " + a), 0);
  ASSERT_EQ(Run("sweep --config " + cfg + " --out " + b), 0);
  std::ifstream ia(a), ib(b);
  std::stringstream sa, sb;
  sa << ia.rdbuf();
  sb << ib.rdbuf();
  EXPECT_FALSE(sa.str().empty());
  EXPECT_EQ(sa.str(), sb.str());
}

}  // namespace
}  // namespace dplinear
