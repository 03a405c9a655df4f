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

// Experiment driver behind the command-line tool: budget calibration, single
// runs, epsilon sweeps and hyperparameter grids, all configured from JSON.

#ifndef DPLINEAR_HARNESS_H_
#define DPLINEAR_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dplinear/accountant.h"
#include "dplinear/dataset.h"
#include "dplinear/solvers.h"
#include "dplinear/synthetic.h"

namespace dplinear {

// Solver fields that may be left unset and filled from method defaults or
// from a per-method override block.
struct SolverOverrides {
  std::optional<std::string> loss;
  std::optional<std::int64_t> iterations;
  std::optional<double> learning_rate;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<std::string> optimizer;
  std::optional<double> adam_beta1;
  std::optional<double> adam_beta2;
  std::optional<double> adam_epsilon;
  std::optional<double> feature_clip;
  std::optional<double> gradient_clip;
  std::optional<bool> use_bias;
  std::optional<double> bias_init;
  std::optional<bool> average_iterates;
  std::optional<bool> track_objective;

  // Fields set in `other` win.
  void MergeFrom(const SolverOverrides& other);
};

struct DataSource {
  std::optional<SyntheticSpec> synthetic;
  std::string format = "binary";  // or "csv"
  std::string train_features;
  std::string train_labels;
  std::string test_features;
  std::string test_labels;
  std::string valid_features;
  std::string valid_labels;
};

struct GridSpec {
  std::vector<double> learning_rates;
  std::vector<double> lambdas;
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds;
};

struct SweepSpec {
  std::vector<double> epsilons;
  std::vector<std::uint64_t> seeds;
  std::vector<Method> methods;
};

struct RunConfig {
  std::optional<Method> method;
  SolverOverrides solver;
  std::map<Method, SolverOverrides> method_overrides;
  DataSource data;
  // Exactly one of epsilon and sigma. epsilon = +inf is the non-private
  // reference: no clipping, no noise, nothing charged.
  std::optional<double> epsilon;
  double delta = 1e-5;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  // Appends a constant-1 feature (counts toward feature clipping).
  bool append_bias_feature = false;
  std::string output;
  SweepSpec sweep;
  GridSpec grid;
};

// Parses a config document. Throws Error(kInvalidArgument) on unknown keys,
// wrong types or bad values.
RunConfig ParseRunConfig(const nlohmann::json& doc);
RunConfig LoadRunConfig(const std::string& path);

// The solver configuration for `method` with `seed` and privacy resolved
// (sigma calibrated from epsilon when needed).
SolverConfig ResolveSolverConfig(const RunConfig& config, Method method,
                                 std::uint64_t seed);

struct Splits {
  FeatureDataset train;
  FeatureDataset test;
  std::optional<FeatureDataset> valid;
};

// Loads or generates the data, applying append_bias_feature.
Splits LoadSplits(const RunConfig& config);

struct Calibration {
  Method method = Method::kFirstOrder;
  std::int64_t iterations = 1;
  double epsilon = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double coefficient = 0.0;
  double sigma = 0.0;
};

Calibration Calibrate(const PrivacyBudget& budget, Method method,
                      std::int64_t iterations);
nlohmann::json ToJson(const Calibration& c);

struct TrainOutcome {
  TrainResult result;
  std::optional<double> epsilon_target;  // +inf for the reference run
  double delta = 0.0;
  double train_top1 = 0.0;
  double test_top1 = 0.0;
};

TrainOutcome RunTrain(const RunConfig& config, const Splits& splits,
                      Method method, std::uint64_t seed);

// Full report. wall_time_seconds is the only field that varies between
// identical runs.
nlohmann::json ToJson(const TrainOutcome& outcome, bool include_weights = true);

struct SweepCell {
  Method method = Method::kFirstOrder;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> accuracy;
  std::string error;
};

struct SweepRow {
  Method method = Method::kFirstOrder;
  double epsilon = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // sample standard deviation over seeds
  double sigma = 0.0;
  double rho = 0.0;
  std::vector<double> accuracies;  // successful seeds, in seed-list order
  std::size_t failures = 0;
};

struct SweepResult {
  double delta = 0.0;
  std::vector<SweepRow> rows;  // sorted by (method name, epsilon)
  std::vector<SweepCell> cells;
};

SweepResult RunSweep(const RunConfig& config, const Splits& splits);
nlohmann::json ToJson(const SweepResult& sweep);
std::string ToText(const SweepResult& sweep);

struct GridPoint {
  double learning_rate = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  std::optional<double> accuracy;  // mean validation accuracy over seeds
  std::string error;
};

struct GridResult {
  Method method = Method::kFirstOrder;
  std::vector<GridPoint> points;
  GridPoint best;
};

// Validation data is splits.valid when present, otherwise the last 20% of
// the training split (the rest is used for fitting). Ties go to the smaller
// lambda, then the smaller learning rate, then the smaller alpha.
GridResult RunGrid(const RunConfig& config, const Splits& splits);
nlohmann::json ToJson(const GridResult& grid);
std::string ToText(const GridResult& grid);

// count values spaced evenly in log10 between lo and hi inclusive.
std::vector<double> LogGrid(double lo, double hi, int count);

}  // namespace dplinear

#endif  // DPLINEAR_HARNESS_H_
