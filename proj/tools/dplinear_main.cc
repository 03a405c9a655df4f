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

// dplinear: calibrate, train, sweep, grid and synth subcommands.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dplinear/accountant.h"
#include "dplinear/data_io.h"
#include "dplinear/error.h"
#include "dplinear/harness.h"
#include "dplinear/synthetic.h"

namespace {

using dplinear::Error;
using dplinear::ErrorCode;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return kExitUsage;
    case ErrorCode::kNonFinite:
    case ErrorCode::kSingularMatrix:
      return kExitNumerical;
    default:
      return kExitData;
  }
}

// Flags shared by the config-driven subcommands.
struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> epsilon;
  std::optional<double> delta;
  std::optional<double> sigma;
  std::optional<std::string> method;
  std::optional<std::int64_t> iterations;
  std::string out;
  bool json = false;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Noise seed");
  cmd->add_option("--epsilon", f.epsilon, "Target epsilon (\"inf\" = off)");
  cmd->add_option("--delta", f.delta, "Target delta");
  cmd->add_option("--sigma", f.sigma, "Explicit noise multiplier");
  cmd->add_option("--method", f.method,
                  "first_order | newton | least_squares | feature_covariance");
  cmd->add_option("--iters", f.iterations,
                  "Iterations (full batch, so equal to epochs)");
  cmd->add_option("--out", f.out, "Write the JSON report here");
  cmd->add_flag("--json", f.json, "Print JSON instead of text");
}

double ParseEpsilon(const std::string& text) {
  if (text == "inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "--epsilon: not a number: '" + text + "'");
  }
  return value;
}

dplinear::RunConfig LoadWithFlags(const CommonFlags& f) {
  dplinear::RunConfig config = dplinear::LoadRunConfig(f.config_path);
  if (f.epsilon && f.sigma) {
    throw Error(ErrorCode::kInvalidArgument,
                "give at most one of --epsilon and --sigma");
  }
  if (f.epsilon) {
    config.epsilon = ParseEpsilon(*f.epsilon);
    config.sigma.reset();
  }
  if (f.sigma) {
    config.sigma = *f.sigma;
    config.epsilon.reset();
  }
  if (f.delta) config.delta = *f.delta;
  if (f.seed) config.seed = *f.seed;
  if (f.method) config.method = dplinear::ParseMethod(*f.method);
  if (f.iterations) config.solver.iterations = *f.iterations;
  if (!f.out.empty()) config.output = f.out;
  return config;
}

void WriteJson(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

std::string Fmt(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << std::setprecision(8) << x;
  return os.str();
}

// Exactly one of epsilon and rho. A rho target is converted to epsilon first.
int RunCalibrate(const std::string& epsilon, std::optional<double> rho,
                 double delta, const std::string& method,
                 std::int64_t iterations, bool as_json) {
  if (epsilon.empty() == !rho.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "give exactly one of --epsilon and --rho");
  }
  const double eps =
      rho ? dplinear::EpsilonFromRho(*rho, delta) : ParseEpsilon(epsilon);
  const dplinear::PrivacyBudget budget{eps, delta};
  const auto c =
      dplinear::Calibrate(budget, dplinear::ParseMethod(method), iterations);
  if (as_json) {
    std::cout << dplinear::ToJson(c).dump(2) << "\n";
  } else {
    std::cout << "method       " << dplinear::MethodName(c.method) << "\n"
              << "iters        " << c.iterations << "\n"
              << "epsilon      " << Fmt(c.epsilon) << "\n"
              << "delta        " << Fmt(c.delta) << "\n"
              << "rho          " << Fmt(c.rho) << "\n"
              << "coefficient  " << Fmt(c.coefficient) << "\n"
              << "sigma        " << Fmt(c.sigma) << "\n";
  }
  return kExitOk;
}

int RunTrainCommand(const CommonFlags& f) {
  const dplinear::RunConfig config = LoadWithFlags(f);
  if (!config.method) {
    throw Error(ErrorCode::kInvalidArgument, "train needs a method");
  }
  const dplinear::Splits splits = dplinear::LoadSplits(config);
  const auto outcome =
      dplinear::RunTrain(config, splits, *config.method, config.seed);
  const json report = dplinear::ToJson(outcome);
  if (!config.output.empty()) WriteJson(config.output, report);
  if (f.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    const auto& r = outcome.result.report;
    std::cout << "method         " << dplinear::MethodName(r.method) << "\n"
              << "sigma          " << Fmt(r.config.sigma) << "\n"
              << "rho spent      " << Fmt(r.total_rho) << "\n"
              << "epsilon spent  " << Fmt(r.epsilon) << " at delta "
              << Fmt(outcome.delta) << "\n"
              << "train top-1    " << Fmt(outcome.train_top1) << "\n"
              << "test top-1     " << Fmt(outcome.test_top1) << "\n";
  }
  return kExitOk;
}

int RunSweepCommand(const CommonFlags& f) {
  const dplinear::RunConfig config = LoadWithFlags(f);
  const dplinear::Splits splits = dplinear::LoadSplits(config);
  const auto sweep = dplinear::RunSweep(config, splits);
  const json doc = dplinear::ToJson(sweep);
  if (!config.output.empty()) WriteJson(config.output, doc);
  std::cout << (f.json ? doc.dump(2) + "\n" : dplinear::ToText(sweep));
  return kExitOk;
}

int RunGridCommand(const CommonFlags& f) {
  const dplinear::RunConfig config = LoadWithFlags(f);
  const dplinear::Splits splits = dplinear::LoadSplits(config);
  const auto grid = dplinear::RunGrid(config, splits);
  const json doc = dplinear::ToJson(grid);
  if (!config.output.empty()) WriteJson(config.output, doc);
  std::cout << (f.json ? doc.dump(2) + "\n" : dplinear::ToText(grid));
  return kExitOk;
}

int RunSynth(dplinear::SyntheticSpec spec, const std::string& out_dir,
             const std::string& format) {
  if (format != "binary" && format != "csv") {
    throw Error(ErrorCode::kInvalidArgument, "--format must be binary or csv");
  }
  const auto data = dplinear::GenerateSynthetic(spec);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  const std::string ext = format == "csv" ? ".csv" : ".bin";
  auto save = [&](const dplinear::FeatureDataset& ds, const std::string& name) {
    const auto features = dir / (name + "_features" + ext);
    const auto labels = dir / (name + "_labels" + ext);
    if (format == "csv") {
      dplinear::SaveCsv(features, labels, ds);
    } else {
      dplinear::SaveDataset(features, labels, ds);
    }
    std::cout << features.string() << "\n" << labels.string() << "\n";
  };
  save(data.train, "train");
  save(data.test, "test");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private linear heads on fixed features"};
  app.require_subcommand(1);

  std::string cal_epsilon;
  double cal_delta = 1e-5;
  std::string cal_method;
  std::int64_t cal_iters = 1;
  bool cal_json = false;
  auto* calibrate =
      app.add_subcommand("calibrate", "Noise multiplier for a budget");
  std::optional<double> cal_rho;
  calibrate->add_option("--epsilon", cal_epsilon, "Target epsilon");
  calibrate->add_option("--rho", cal_rho, "Target zCDP rho (instead of epsilon)");
  calibrate->add_option("--delta", cal_delta, "Target delta");
  calibrate->add_option("--method", cal_method, "Training method")
      ->required();
  calibrate->add_option("--iters", cal_iters, "Iterations");
  calibrate->add_flag("--json", cal_json, "Print JSON");

  CommonFlags train_flags;
  auto* train = app.add_subcommand("train", "Train one model");
  AddCommonFlags(train, train_flags);

  CommonFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Epsilon x seed x method sweep");
  AddCommonFlags(sweep, sweep_flags);

  CommonFlags grid_flags;
  auto* grid = app.add_subcommand("grid", "Hyperparameter grid search");
  AddCommonFlags(grid, grid_flags);

  dplinear::SyntheticSpec synth_spec;
  std::string synth_out;
  std::string synth_format = "binary";
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--n", synth_spec.n, "Examples (train + test)");
  synth->add_option("--d", synth_spec.d, "Feature dimension");
  synth->add_option("--m", synth_spec.m, "Classes");
  synth->add_option("--margin", synth_spec.margin, "Closest mean distance");
  synth->add_option("--noise", synth_spec.noise, "Per-coordinate noise std");
  synth->add_option("--seed", synth_spec.seed, "Generator seed");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--format", synth_format, "binary or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*calibrate) {
      return RunCalibrate(cal_epsilon, cal_rho, cal_delta, cal_method,
                          cal_iters, cal_json);
    }
    if (*train) return RunTrainCommand(train_flags);
    if (*sweep) return RunSweepCommand(sweep_flags);
    if (*grid) return RunGridCommand(grid_flags);
    if (*synth) return RunSynth(synth_spec, synth_out, synth_format);
  } catch (const Error& e) {
    std::cerr << "error (" << dplinear::ErrorCodeName(e.code())
              << "): " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
