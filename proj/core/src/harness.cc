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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "dplinear/data_io.h"
#include "dplinear/error.h"

namespace dplinear {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void Bad(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, "config: " + message);
}

void RequireKeys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  if (!obj.is_object()) Bad(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) Bad("unknown key '" + key + "' in " + where);
  }
}

double GetNumber(const json& v, const std::string& key) {
  if (!v.is_number()) Bad("'" + key + "' must be a number");
  return v.get<double>();
}

// A number, or one of the strings "inf" / "infinity".
double GetExtendedNumber(const json& v, const std::string& key) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInf;
    Bad("'" + key + "' must be a number or \"inf\"");
  }
  return GetNumber(v, key);
}

std::int64_t GetInt(const json& v, const std::string& key) {
  if (!v.is_number_integer()) Bad("'" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t GetUint(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    Bad("'" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool GetBool(const json& v, const std::string& key) {
  if (!v.is_boolean()) Bad("'" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string GetString(const json& v, const std::string& key) {
  if (!v.is_string()) Bad("'" + key + "' must be a string");
  return v.get<std::string>();
}

const std::set<std::string> kSolverKeys = {
    "loss",  "iters", "eta",  "lambda",           "alpha",
    "optimizer", "adam", "clip", "bias", "average_iterates",
    "track_objective"};

// Reads the solver keys present in `obj` (others are ignored here).
SolverOverrides ParseSolverOverrides(const json& obj) {
  SolverOverrides s;
  if (obj.contains("loss")) {
    s.loss = GetString(obj["loss"], "loss");
    ParseLossKind(*s.loss);
  }
  if (obj.contains("iters")) s.iterations = GetInt(obj["iters"], "iters");
  if (obj.contains("eta")) s.learning_rate = GetNumber(obj["eta"], "eta");
  if (obj.contains("lambda")) s.lambda = GetNumber(obj["lambda"], "lambda");
  if (obj.contains("alpha")) s.alpha = GetNumber(obj["alpha"], "alpha");
  if (obj.contains("optimizer")) {
    s.optimizer = GetString(obj["optimizer"], "optimizer");
    if (*s.optimizer != "adam" && *s.optimizer != "sgd") {
      Bad("optimizer must be \"adam\" or \"sgd\"");
    }
  }
  if (obj.contains("adam")) {
    const json& a = obj["adam"];
    RequireKeys(a, {"beta1", "beta2", "epsilon"}, "adam");
    if (a.contains("beta1")) s.adam_beta1 = GetNumber(a["beta1"], "beta1");
    if (a.contains("beta2")) s.adam_beta2 = GetNumber(a["beta2"], "beta2");
    if (a.contains("epsilon")) {
      s.adam_epsilon = GetNumber(a["epsilon"], "adam.epsilon");
    }
  }
  if (obj.contains("clip")) {
    const json& c = obj["clip"];
    RequireKeys(c, {"feature", "gradient"}, "clip");
    if (c.contains("feature")) {
      s.feature_clip = GetNumber(c["feature"], "clip.feature");
    }
    if (c.contains("gradient")) {
      s.gradient_clip = GetNumber(c["gradient"], "clip.gradient");
    }
  }
  if (obj.contains("bias")) {
    const json& b = obj["bias"];
    RequireKeys(b, {"enabled", "init"}, "bias");
    if (b.contains("enabled")) s.use_bias = GetBool(b["enabled"], "bias.enabled");
    if (b.contains("init")) s.bias_init = GetNumber(b["init"], "bias.init");
  }
  if (obj.contains("average_iterates")) {
    s.average_iterates = GetBool(obj["average_iterates"], "average_iterates");
  }
  if (obj.contains("track_objective")) {
    s.track_objective = GetBool(obj["track_objective"], "track_objective");
  }
  return s;
}

SyntheticSpec ParseSynthetic(const json& obj) {
  RequireKeys(obj, {"n", "d", "m", "margin", "noise", "seed"}, "synthetic");
  SyntheticSpec spec;
  if (obj.contains("n")) spec.n = GetInt(obj["n"], "synthetic.n");
  if (obj.contains("d")) spec.d = GetInt(obj["d"], "synthetic.d");
  if (obj.contains("m")) spec.m = GetInt(obj["m"], "synthetic.m");
  if (obj.contains("margin")) {
    spec.margin = GetNumber(obj["margin"], "synthetic.margin");
  }
  if (obj.contains("noise")) {
    spec.noise = GetNumber(obj["noise"], "synthetic.noise");
  }
  if (obj.contains("seed")) spec.seed = GetUint(obj["seed"], "synthetic.seed");
  return spec;
}

// Either a list of values or {"log_range": [lo, hi], "points": k}.
std::vector<double> ParseGridAxis(const json& v, const std::string& key) {
  if (v.is_array()) {
    if (v.empty()) Bad("grid axis '" + key + "' is empty");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(GetNumber(x, key));
    return out;
  }
  RequireKeys(v, {"log_range", "points"}, "grid." + key);
  double lo = 1e-8;
  double hi = 1e8;
  if (v.contains("log_range")) {
    const json& r = v["log_range"];
    if (!r.is_array() || r.size() != 2) Bad("log_range must be [lo, hi]");
    lo = GetNumber(r[0], "log_range");
    hi = GetNumber(r[1], "log_range");
  }
  if (!v.contains("points")) Bad("grid." + key + " needs 'points'");
  const auto points = GetInt(v["points"], "points");
  if (points < 1) Bad("grid axis '" + key + "' is empty");
  return LogGrid(lo, hi, static_cast<int>(points));
}

double Mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double SampleStd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = Mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

bool IsSingleLabel(const FeatureDataset& ds) {
  for (Eigen::Index i = 0; i < ds.num_examples(); ++i) {
    if (ds.positives(i).size() != 1) return false;
  }
  return true;
}

FeatureDataset AppendConstantFeature(const FeatureDataset& ds) {
  Matrix x(ds.num_examples(), ds.num_features() + 1);
  x.leftCols(ds.num_features()) = ds.features();
  x.col(ds.num_features()).setOnes();
  return ds.WithFeatures(std::move(x));
}

FeatureDataset LoadPair(const DataSource& data, const std::string& features,
                        const std::string& labels) {
  if (data.format == "csv") return LoadCsv(features, labels);
  return LoadDataset(features, labels);
}

json NumberOrNull(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json EpsilonJson(double eps) {
  if (std::isinf(eps)) return "inf";
  return eps;
}

json ToJson(const SolverConfig& c) {
  json j;
  j["method"] = std::string(MethodName(c.method));
  j["loss"] = c.method == Method::kLeastSquares
                  ? std::string("weighted_quadratic")
                  : std::string(LossKindName(c.loss.kind));
  j["iters"] = c.iterations;
  j["eta"] = c.learning_rate;
  j["lambda"] = c.lambda;
  j["alpha"] = c.alpha;
  j["optimizer"] = c.optimizer == Optimizer::kAdam ? "adam" : "sgd";
  j["adam"] = {{"beta1", c.adam_beta1},
               {"beta2", c.adam_beta2},
               {"epsilon", c.adam_epsilon}};
  j["clip"] = {{"feature", c.clip.feature_clip},
               {"gradient", c.clip.gradient_clip}};
  j["sigma"] = c.sigma;
  j["sanitize"] = c.sanitize;
  j["bias"] = {{"enabled", c.use_bias}, {"init", c.bias_init}};
  j["average_iterates"] = c.average_iterates;
  j["seed"] = c.seed;
  return j;
}

std::string FormatNumber(double x, int precision = 6) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

}  // namespace

void SolverOverrides::MergeFrom(const SolverOverrides& o) {
  if (o.loss) loss = o.loss;
  if (o.iterations) iterations = o.iterations;
  if (o.learning_rate) learning_rate = o.learning_rate;
  if (o.lambda) lambda = o.lambda;
  if (o.alpha) alpha = o.alpha;
  if (o.optimizer) optimizer = o.optimizer;
  if (o.adam_beta1) adam_beta1 = o.adam_beta1;
  if (o.adam_beta2) adam_beta2 = o.adam_beta2;
  if (o.adam_epsilon) adam_epsilon = o.adam_epsilon;
  if (o.feature_clip) feature_clip = o.feature_clip;
  if (o.gradient_clip) gradient_clip = o.gradient_clip;
  if (o.use_bias) use_bias = o.use_bias;
  if (o.bias_init) bias_init = o.bias_init;
  if (o.average_iterates) average_iterates = o.average_iterates;
  if (o.track_objective) track_objective = o.track_objective;
}

std::vector<double> LogGrid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) {
    Bad("log grid needs 0 < lo <= hi and at least one point");
  }
  if (count == 1) return {lo};
  std::vector<double> out;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
  }
  return out;
}

RunConfig ParseRunConfig(const json& doc) {
  std::set<std::string> allowed = kSolverKeys;
  allowed.insert({"method", "epsilon", "delta", "sigma", "seed",
                  "append_bias_feature", "data", "sweep", "method_params",
                  "grid", "out"});
  RequireKeys(doc, allowed, "config");

  RunConfig config;
  if (doc.contains("method")) {
    config.method = ParseMethod(GetString(doc["method"], "method"));
  }
  config.solver = ParseSolverOverrides(doc);
  if (doc.contains("epsilon")) {
    config.epsilon = GetExtendedNumber(doc["epsilon"], "epsilon");
  }
  if (doc.contains("delta")) config.delta = GetNumber(doc["delta"], "delta");
  if (doc.contains("sigma")) config.sigma = GetNumber(doc["sigma"], "sigma");
  if (doc.contains("seed")) config.seed = GetUint(doc["seed"], "seed");
  if (doc.contains("append_bias_feature")) {
    config.append_bias_feature =
        GetBool(doc["append_bias_feature"], "append_bias_feature");
  }
  if (doc.contains("out")) config.output = GetString(doc["out"], "out");

  if (doc.contains("data")) {
    const json& d = doc["data"];
    RequireKeys(d,
                {"synthetic", "format", "train_features", "train_labels",
                 "test_features", "test_labels", "valid_features",
                 "valid_labels"},
                "data");
    if (d.contains("synthetic")) {
      config.data.synthetic = ParseSynthetic(d["synthetic"]);
    }
    auto str = [&](const char* key, std::string& out) {
      if (d.contains(key)) out = GetString(d[key], key);
    };
    str("format", config.data.format);
    str("train_features", config.data.train_features);
    str("train_labels", config.data.train_labels);
    str("test_features", config.data.test_features);
    str("test_labels", config.data.test_labels);
    str("valid_features", config.data.valid_features);
    str("valid_labels", config.data.valid_labels);
    if (config.data.format != "binary" && config.data.format != "csv") {
      Bad("data.format must be \"binary\" or \"csv\"");
    }
  }

  if (doc.contains("method_params")) {
    const json& mp = doc["method_params"];
    if (!mp.is_object()) Bad("method_params must be an object");
    for (const auto& [name, block] : mp.items()) {
      RequireKeys(block, kSolverKeys, "method_params." + name);
      config.method_overrides[ParseMethod(name)] =
          ParseSolverOverrides(block);
    }
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    RequireKeys(s, {"epsilons", "seeds", "methods"}, "sweep");
    if (s.contains("epsilons")) {
      if (!s["epsilons"].is_array()) Bad("sweep.epsilons must be a list");
      for (const auto& e : s["epsilons"]) {
        config.sweep.epsilons.push_back(GetExtendedNumber(e, "epsilons"));
      }
    }
    if (s.contains("seeds")) {
      if (!s["seeds"].is_array()) Bad("sweep.seeds must be a list");
      for (const auto& e : s["seeds"]) {
        config.sweep.seeds.push_back(GetUint(e, "seeds"));
      }
    }
    if (s.contains("methods")) {
      if (!s["methods"].is_array()) Bad("sweep.methods must be a list");
      for (const auto& e : s["methods"]) {
        config.sweep.methods.push_back(ParseMethod(GetString(e, "methods")));
      }
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    RequireKeys(g, {"eta", "lambda", "alpha", "seeds"}, "grid");
    if (g.contains("eta")) {
      config.grid.learning_rates = ParseGridAxis(g["eta"], "eta");
    }
    if (g.contains("lambda")) {
      config.grid.lambdas = ParseGridAxis(g["lambda"], "lambda");
    }
    if (g.contains("alpha")) {
      config.grid.alphas = ParseGridAxis(g["alpha"], "alpha");
    }
    if (g.contains("seeds")) {
      if (!g["seeds"].is_array() || g["seeds"].empty()) {
        Bad("grid.seeds must be a non-empty list");
      }
      for (const auto& e : g["seeds"]) {
        config.grid.seeds.push_back(GetUint(e, "grid.seeds"));
      }
    }
  }
  return config;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    Bad(std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return ParseRunConfig(doc);
}

SolverConfig ResolveSolverConfig(const RunConfig& config, Method method,
                                 std::uint64_t seed) {
  SolverOverrides s = config.solver;
  if (auto it = config.method_overrides.find(method);
      it != config.method_overrides.end()) {
    s.MergeFrom(it->second);
  }
  SolverConfig out;
  out.method = method;
  out.seed = seed;
  out.report_delta = config.delta;
  out.loss.kind = ParseLossKind(s.loss.value_or("logistic"));
  // alpha = 0 would drop the negatives from the least-squares objective.
  out.alpha = s.alpha.value_or(1.0);
  if (out.loss.kind == LossKind::kWeightedQuadratic) out.loss.alpha = out.alpha;
  out.iterations = s.iterations.value_or(10);
  out.learning_rate =
      s.learning_rate.value_or(method == Method::kFirstOrder ? 0.01 : 1.0);
  out.lambda = s.lambda.value_or(0.0);
  out.optimizer = s.optimizer.value_or("adam") == "sgd" ? Optimizer::kSgd
                                                        : Optimizer::kAdam;
  out.adam_beta1 = s.adam_beta1.value_or(0.9);
  out.adam_beta2 = s.adam_beta2.value_or(0.999);
  out.adam_epsilon = s.adam_epsilon.value_or(1e-8);
  out.clip.feature_clip = s.feature_clip.value_or(1.0);
  out.clip.gradient_clip = s.gradient_clip.value_or(1.0);
  const bool first_order_like = method == Method::kFirstOrder ||
                                method == Method::kFeatureCovariance;
  out.use_bias = s.use_bias.value_or(first_order_like &&
                                     out.loss.kind == LossKind::kLogistic);
  out.bias_init = s.bias_init.value_or(-10.0);
  out.average_iterates = s.average_iterates.value_or(false);
  out.track_objective = s.track_objective.value_or(true);

  if (config.epsilon.has_value() == config.sigma.has_value()) {
    Bad("exactly one of epsilon and sigma must be given");
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    Bad("delta must lie in (0, 1)");
  }
  if (config.sigma) {
    out.sanitize = true;
    out.sigma = *config.sigma;
  } else if (std::isinf(*config.epsilon) && *config.epsilon > 0) {
    out.sanitize = false;
    out.sigma = 0.0;
  } else {
    out.sanitize = true;
    out.sigma = CalibrateSigma(MechanismCost{method, out.iterations},
                               PrivacyBudget{*config.epsilon, config.delta});
  }
  ValidateSolverConfig(out);
  return out;
}

Splits LoadSplits(const RunConfig& config) {
  const DataSource& data = config.data;
  std::optional<Splits> splits;
  if (data.synthetic) {
    if (!data.train_features.empty()) {
      Bad("data: give either synthetic or files, not both");
    }
    SyntheticData s = GenerateSynthetic(*data.synthetic);
    splits = Splits{std::move(s.train), std::move(s.test), std::nullopt};
  } else {
    if (data.train_features.empty() || data.train_labels.empty() ||
        data.test_features.empty() || data.test_labels.empty()) {
      Bad("data: train and test feature/label paths are required");
    }
    splits = Splits{LoadPair(data, data.train_features, data.train_labels),
                    LoadPair(data, data.test_features, data.test_labels),
                    std::nullopt};
    if (!data.valid_features.empty()) {
      splits->valid = LoadPair(data, data.valid_features, data.valid_labels);
    }
  }
  if (config.append_bias_feature) {
    splits->train = AppendConstantFeature(splits->train);
    splits->test = AppendConstantFeature(splits->test);
    if (splits->valid) splits->valid = AppendConstantFeature(*splits->valid);
  }
  return std::move(*splits);
}

Calibration Calibrate(const PrivacyBudget& budget, Method method,
                      std::int64_t iterations) {
  Calibration c;
  c.method = method;
  c.iterations = iterations;
  c.epsilon = budget.epsilon;
  c.delta = budget.delta;
  const MechanismCost cost{method, iterations};
  c.rho = RhoFromEpsilonDelta(budget);
  c.coefficient = cost.RhoCoefficient();
  c.sigma = CalibrateSigma(cost, c.rho);
  return c;
}

json ToJson(const Calibration& c) {
  return json{{"method", std::string(MethodName(c.method))},
              {"iters", c.iterations},
              {"epsilon", c.epsilon},
              {"delta", c.delta},
              {"rho", c.rho},
              {"rho_coefficient", c.coefficient},
              {"sigma", c.sigma}};
}

TrainOutcome RunTrain(const RunConfig& config, const Splits& splits,
                      Method method, std::uint64_t seed) {
  const SolverConfig solver = ResolveSolverConfig(config, method, seed);
  ZcdpLedger ledger;
  TrainOutcome outcome;
  outcome.result = Train(splits.train, solver, ledger);
  outcome.epsilon_target = config.epsilon;
  outcome.delta = config.delta;
  outcome.train_top1 = IsSingleLabel(splits.train)
                           ? EvaluateTop1(outcome.result.weights, splits.train)
                           : std::numeric_limits<double>::quiet_NaN();
  outcome.test_top1 = EvaluateTop1(outcome.result.weights, splits.test);
  return outcome;
}

json ToJson(const TrainOutcome& outcome, bool include_weights) {
  const TrainReport& r = outcome.result.report;
  json j;
  j["method"] = std::string(MethodName(r.method));
  j["seed"] = r.seed;
  j["config"] = ToJson(r.config);
  json privacy;
  privacy["epsilon_target"] =
      outcome.epsilon_target ? EpsilonJson(*outcome.epsilon_target) : json();
  privacy["delta"] = outcome.delta;
  privacy["sigma"] = r.config.sigma;
  privacy["non_private"] = !r.config.sanitize;
  privacy["rho_spent"] = NumberOrNull(r.total_rho);
  privacy["epsilon_spent"] = NumberOrNull(r.epsilon);
  privacy["releases"] = r.releases;
  j["privacy"] = privacy;
  j["objective"] = r.objective;
  j["train_top1"] = NumberOrNull(outcome.train_top1);
  j["test_top1"] = outcome.test_top1;
  if (include_weights) {
    const WeightMatrix& w = outcome.result.weights;
    json theta = json::array();
    for (Eigen::Index i = 0; i < w.theta.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < w.theta.cols(); ++c) row.push_back(w.theta(i, c));
      theta.push_back(std::move(row));
    }
    json weights{{"theta", std::move(theta)}};
    if (w.bias) {
      weights["bias"] = std::vector<double>(w.bias->data(),
                                            w.bias->data() + w.bias->size());
    } else {
      weights["bias"] = nullptr;
    }
    j["weights"] = std::move(weights);
  }
  j["wall_time_seconds"] = r.wall_seconds;
  return j;
}

SweepResult RunSweep(const RunConfig& config, const Splits& splits) {
  std::vector<Method> methods = config.sweep.methods;
  if (methods.empty() && config.method) methods.push_back(*config.method);
  std::vector<double> epsilons = config.sweep.epsilons;
  if (epsilons.empty() && config.epsilon) epsilons.push_back(*config.epsilon);
  std::vector<std::uint64_t> seeds = config.sweep.seeds;
  if (seeds.empty()) seeds.push_back(config.seed);
  if (methods.empty() || epsilons.empty()) {
    Bad("sweep needs at least one method and one epsilon");
  }
  if (config.sigma) Bad("sweep calibrates sigma from epsilon; drop 'sigma'");

  SweepResult sweep;
  sweep.delta = config.delta;
  for (Method method : methods) {
    for (double eps : epsilons) {
      RunConfig cell_config = config;
      cell_config.epsilon = eps;
      SweepRow row;
      row.method = method;
      row.epsilon = eps;
      bool have_privacy = false;
      for (std::uint64_t seed : seeds) {
        SweepCell cell{method, eps, seed, std::nullopt, ""};
        try {
          TrainOutcome outcome = RunTrain(cell_config, splits, method, seed);
          cell.accuracy = outcome.test_top1;
          row.accuracies.push_back(outcome.test_top1);
          if (!have_privacy) {
            row.sigma = outcome.result.report.config.sigma;
            row.rho = outcome.result.report.total_rho;
            have_privacy = true;
          }
        } catch (const Error& e) {
          cell.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
          ++row.failures;
        }
        sweep.cells.push_back(std::move(cell));
      }
      if (!have_privacy) {
        // Every seed failed; report the budget the cell would have spent.
        row.rho = std::isinf(eps) ? 0.0 : RhoFromEpsilonDelta({eps, config.delta});
        row.sigma = std::numeric_limits<double>::quiet_NaN();
        try {
          row.sigma = ResolveSolverConfig(cell_config, method, 0).sigma;
        } catch (const Error&) {
        }
      }
      row.mean_accuracy = Mean(row.accuracies);
      row.std_accuracy = SampleStd(row.accuracies);
      sweep.rows.push_back(std::move(row));
    }
  }
  std::stable_sort(sweep.rows.begin(), sweep.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return std::make_tuple(MethodName(a.method), a.epsilon) <
                            std::make_tuple(MethodName(b.method), b.epsilon);
                   });
  return sweep;
}

json ToJson(const SweepResult& sweep) {
  json rows = json::array();
  for (const SweepRow& r : sweep.rows) {
    rows.push_back(json{{"method", std::string(MethodName(r.method))},
                        {"epsilon", EpsilonJson(r.epsilon)},
                        {"mean_accuracy", r.mean_accuracy},
                        {"std_accuracy", r.std_accuracy},
                        {"sigma", r.sigma},
                        {"rho", NumberOrNull(r.rho)},
                        {"accuracies", r.accuracies},
                        {"failures", r.failures}});
  }
  json cells = json::array();
  for (const SweepCell& c : sweep.cells) {
    json cell{{"method", std::string(MethodName(c.method))},
              {"epsilon", EpsilonJson(c.epsilon)},
              {"seed", c.seed}};
    cell["accuracy"] = c.accuracy ? json(*c.accuracy) : json();
    if (!c.error.empty()) cell["error"] = c.error;
    cells.push_back(std::move(cell));
  }
  return json{{"delta", sweep.delta}, {"rows", rows}, {"cells", cells}};
}

std::string ToText(const SweepResult& sweep) {
  std::ostringstream os;
  os << std::left << std::setw(20) << "method" << std::right << std::setw(10)
     << "epsilon" << std::setw(12) << "mean_acc" << std::setw(12) << "std_acc"
     << std::setw(14) << "sigma" << std::setw(14) << "rho" << std::setw(6)
     << "runs" << "\n";
  for (const SweepRow& r : sweep.rows) {
    os << std::left << std::setw(20) << MethodName(r.method) << std::right
       << std::setw(10) << FormatNumber(r.epsilon) << std::setw(12)
       << FormatNumber(r.mean_accuracy, 4) << std::setw(12)
       << FormatNumber(r.std_accuracy, 4) << std::setw(14)
       << FormatNumber(r.sigma) << std::setw(14) << FormatNumber(r.rho)
       << std::setw(6) << r.accuracies.size() << "\n";
  }
  return os.str();
}

GridResult RunGrid(const RunConfig& config, const Splits& splits) {
  if (!config.method) Bad("grid needs a method");
  const Method method = *config.method;
  const SolverConfig base = ResolveSolverConfig(config, method, config.seed);

  FeatureDataset fit = splits.train;
  FeatureDataset valid = splits.train;
  if (splits.valid) {
    valid = *splits.valid;
  } else {
    const Eigen::Index n = splits.train.num_examples();
    const Eigen::Index cut = (n * 8) / 10;
    if (cut < 1 || cut >= n) Bad("training split too small to hold out");
    fit = splits.train.Slice(0, cut);
    valid = splits.train.Slice(cut, n);
  }

  auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  const auto etas = axis(config.grid.learning_rates, base.learning_rate);
  const auto lambdas = axis(config.grid.lambdas, base.lambda);
  const auto alphas = axis(config.grid.alphas, base.alpha);
  const auto seeds = config.grid.seeds.empty()
                         ? std::vector<std::uint64_t>{config.seed}
                         : config.grid.seeds;

  GridResult grid;
  grid.method = method;
  for (double eta : etas) {
    for (double lambda : lambdas) {
      for (double alpha : alphas) {
        GridPoint point{eta, lambda, alpha, std::nullopt, ""};
        try {
          std::vector<double> accs;
          for (std::uint64_t seed : seeds) {
            SolverConfig solver = base;
            solver.seed = seed;
            solver.learning_rate = eta;
            solver.lambda = lambda;
            solver.alpha = alpha;
            if (solver.loss.kind == LossKind::kWeightedQuadratic) {
              solver.loss.alpha = alpha;
            }
            solver.track_objective = false;
            ZcdpLedger ledger;
            TrainResult r = Train(fit, solver, ledger);
            accs.push_back(EvaluateTop1(r.weights, valid));
          }
          point.accuracy = Mean(accs);
        } catch (const Error& e) {
          point.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
        }
        grid.points.push_back(std::move(point));
      }
    }
  }

  const GridPoint* best = nullptr;
  for (const GridPoint& p : grid.points) {
    if (!p.accuracy) continue;
    if (best == nullptr || *p.accuracy > *best->accuracy ||
        (*p.accuracy == *best->accuracy &&
         std::make_tuple(p.lambda, p.learning_rate, p.alpha) <
             std::make_tuple(best->lambda, best->learning_rate, best->alpha))) {
      best = &p;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kSingularMatrix,
                "grid: every grid point failed; first error: " +
                    grid.points.front().error);
  }
  grid.best = *best;
  return grid;
}

json ToJson(const GridResult& grid) {
  auto point_json = [](const GridPoint& p) {
    json j{{"eta", p.learning_rate}, {"lambda", p.lambda}, {"alpha", p.alpha}};
    j["accuracy"] = p.accuracy ? json(*p.accuracy) : json();
    if (!p.error.empty()) j["error"] = p.error;
    return j;
  };
  json points = json::array();
  for (const GridPoint& p : grid.points) points.push_back(point_json(p));
  return json{{"method", std::string(MethodName(grid.method))},
              {"best", point_json(grid.best)},
              {"points", points}};
}

std::string ToText(const GridResult& grid) {
  std::ostringstream os;
  os << std::right << std::setw(14) << "eta" << std::setw(14) << "lambda"
     << std::setw(14) << "alpha" << std::setw(12) << "valid_acc" << "\n";
  for (const GridPoint& p : grid.points) {
    os << std::setw(14) << FormatNumber(p.learning_rate) << std::setw(14)
       << FormatNumber(p.lambda) << std::setw(14) << FormatNumber(p.alpha)
       << std::setw(12)
       << (p.accuracy ? FormatNumber(*p.accuracy, 4) : std::string("failed"))
       << "\n";
  }
  os << "best: eta=" << FormatNumber(grid.best.learning_rate)
     << " lambda=" << FormatNumber(grid.best.lambda)
     << " alpha=" << FormatNumber(grid.best.alpha)
     << " valid_acc=" << FormatNumber(*grid.best.accuracy, 4) << "\n";
  return os.str();
}

}  // namespace dplinear
