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

#include "dplinear/solvers.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "dplinear/error.h"

namespace dplinear {
namespace {

using Clock = std::chrono::steady_clock;

std::string Label(Method method, std::string_view what, std::int64_t t,
                  std::int64_t j = -1) {
  std::ostringstream os;
  os << MethodName(method) << "/" << what << "/t=" << t;
  if (j >= 0) os << "/j=" << j;
  return os.str();
}

NoiseKey Key(const SolverConfig& config, std::uint64_t t, std::uint64_t j,
             StatisticId statistic) {
  return NoiseKey{config.seed, t, j, statistic};
}

void FinishReport(TrainReport& report, const SolverConfig& config,
                  const ZcdpLedger& ledger, Clock::time_point start) {
  report.method = config.method;
  report.total_rho = ledger.total_rho();
  report.epsilon = EpsilonFromRho(report.total_rho, config.report_delta);
  report.releases = ledger.entries().size();
  report.seed = config.seed;
  report.config = config;
  report.wall_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
}

void RequireMethod(const SolverConfig& config, Method method) {
  if (config.method != method) {
    throw Error(ErrorCode::kInvalidArgument,
                "solver for '" + std::string(MethodName(method)) +
                    "' called with method '" +
                    std::string(MethodName(config.method)) + "'");
  }
}

// [X | 1] when a bias is trained, X otherwise.
Matrix AugmentedFeatures(const Matrix& features, bool with_bias) {
  if (!with_bias) return features;
  Matrix out(features.rows(), features.cols() + 1);
  out.leftCols(features.cols()) = features;
  out.col(features.cols()).setOnes();
  return out;
}

WeightMatrix InitialWeights(const FeatureDataset& dataset,
                            const SolverConfig& config) {
  WeightMatrix w = WeightMatrix::Zeros(
      static_cast<Eigen::Index>(dataset.num_classes()),
      dataset.num_features());
  if (config.use_bias) {
    w.bias = Vector::Constant(w.theta.rows(), config.bias_init);
  }
  return w;
}

// Stacked [theta | bias] view used by the first-order update.
Matrix Stack(const WeightMatrix& w) {
  if (!w.bias) return w.theta;
  Matrix out(w.theta.rows(), w.theta.cols() + 1);
  out.leftCols(w.theta.cols()) = w.theta;
  out.col(w.theta.cols()) = *w.bias;
  return out;
}

void Unstack(const Matrix& stacked, WeightMatrix& w) {
  w.theta = stacked.leftCols(w.theta.cols());
  if (w.bias) *w.bias = stacked.col(w.theta.cols());
}

void RequireFinite(const Matrix& m, Method method, std::int64_t t,
                   std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFinite,
                std::string(MethodName(method)) + ": non-finite " +
                    std::string(what) + " at iteration " + std::to_string(t));
  }
}

// Runs one piece of iteration t, tagging non-finite failures (typically a
// diverging iterate reaching the loss) with the method and iteration.
template <typename F>
auto AtIteration(Method method, std::int64_t t, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonFinite) throw;
    throw Error(ErrorCode::kNonFinite,
                std::string(MethodName(method)) + ": diverged at iteration " +
                    std::to_string(t) + ": " + e.what());
  }
}

// Adam with bias-corrected moments. Step index starts at 1.
class AdamState {
 public:
  AdamState(Eigen::Index rows, Eigen::Index cols, const SolverConfig& config)
      : first_(Matrix::Zero(rows, cols)),
        second_(Matrix::Zero(rows, cols)),
        beta1_(config.adam_beta1),
        beta2_(config.adam_beta2),
        epsilon_(config.adam_epsilon) {}

  Matrix Step(const Matrix& grad, std::int64_t t) {
    first_ = beta1_ * first_ + (1.0 - beta1_) * grad;
    second_ = beta2_ * second_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t));
    Matrix step = (first_ / c1).array() /
                  ((second_ / c2).array().sqrt() + epsilon_);
    return step;
  }

 private:
  Matrix first_;
  Matrix second_;
  double beta1_;
  double beta2_;
  double epsilon_;
};

}  // namespace

void ValidateSolverConfig(const SolverConfig& config) {
  auto fail = [](const std::string& message) {
    throw Error(ErrorCode::kInvalidArgument, message);
  };
  if (config.method != Method::kLeastSquares) {
    if (config.iterations < 1) fail("iterations must be >= 1");
    if (!(config.learning_rate > 0.0) || std::isinf(config.learning_rate)) {
      fail("learning rate must be finite and positive");
    }
  }
  if (!(config.lambda >= 0.0) || std::isinf(config.lambda)) {
    fail("lambda must be finite and non-negative");
  }
  if (!(config.alpha >= 0.0) || std::isinf(config.alpha)) {
    fail("alpha must be finite and non-negative");
  }
  if (!(config.sigma >= 0.0) || std::isinf(config.sigma)) {
    fail("sigma must be finite and non-negative");
  }
  if (config.sanitize) ValidateClipConfig(config.clip);
  if (!(config.report_delta > 0.0 && config.report_delta < 1.0)) {
    fail("report delta must lie in (0, 1)");
  }
  if (config.use_bias && (config.method == Method::kNewton ||
                          config.method == Method::kLeastSquares)) {
    fail(std::string(MethodName(config.method)) +
         " has no trained bias; append a constant feature instead");
  }
  if (config.method == Method::kNewton &&
      config.loss.kind == LossKind::kWeightedQuadratic) {
    fail("newton supports the logistic and squared losses");
  }
  if (config.method == Method::kFirstOrder &&
      !(config.adam_beta1 >= 0.0 && config.adam_beta1 < 1.0 &&
        config.adam_beta2 >= 0.0 && config.adam_beta2 < 1.0 &&
        config.adam_epsilon > 0.0)) {
    fail("adam parameters must satisfy 0 <= beta < 1 and epsilon > 0");
  }
}

namespace statistics {

Matrix LossGradients(const LossSpec& loss, const Matrix& logits,
                     const FeatureDataset& dataset) {
  if (logits.rows() != dataset.num_examples() ||
      logits.cols() != static_cast<Eigen::Index>(dataset.num_classes())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "LossGradients: logits do not match the dataset");
  }
  Matrix r(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    auto row = dataset.positives(i);
    std::size_t next = 0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      double y = 0.0;
      if (next < row.size() && row[next] == static_cast<std::uint32_t>(j)) {
        y = 1.0;
        ++next;
      }
      r(i, j) = LossGrad(loss, logits(i, j), y);
    }
  }
  return r;
}

Matrix ClippedGradientSum(const LossSpec& loss, const WeightMatrix& weights,
                          const FeatureDataset& dataset,
                          double gradient_clip) {
  const Matrix residuals =
      LossGradients(loss, weights.Logits(dataset.features()), dataset);
  const Matrix features =
      AugmentedFeatures(dataset.features(), weights.bias.has_value());
  // Example i's gradient is the outer product r_i x_i^T, whose Frobenius
  // norm is ||r_i|| ||x_i||, so clipping reduces to a per-row scale.
  Vector scale = Vector::Ones(residuals.rows());
  if (std::isfinite(gradient_clip)) {
    for (Eigen::Index i = 0; i < residuals.rows(); ++i) {
      const double norm = residuals.row(i).norm() * features.row(i).norm();
      if (norm > gradient_clip) scale[i] = gradient_clip / norm;
    }
  }
  Matrix scaled = scale.asDiagonal() * residuals;
  Matrix sum = scaled.transpose() * features;
  return sum;
}

NewtonClassStatistics NewtonStatistics(const LossSpec& loss,
                                       const Vector& theta_j,
                                       const Matrix& features,
                                       const FeatureDataset& dataset,
                                       std::uint64_t j,
                                       bool clamp_derivative) {
  if (features.rows() != dataset.num_examples() ||
      features.cols() != theta_j.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "NewtonStatistics: shape mismatch");
  }
  const Vector z = features * theta_j;
  Vector grad_coef(z.size());
  Vector curv_coef(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double y = dataset.IsPositive(i, j) ? 1.0 : 0.0;
    double g = LossGrad(loss, z[i], y);
    if (clamp_derivative) g = std::clamp(g, -1.0, 1.0);
    grad_coef[i] = g;
    curv_coef[i] = LossCurv(loss, z[i], y);
  }
  NewtonClassStatistics out;
  out.gradient = features.transpose() * grad_coef;
  out.hessian = WeightedGram(features, curv_coef);
  return out;
}

}  // namespace statistics

TrainResult TrainDpFirstOrder(const FeatureDataset& dataset,
                              const SolverConfig& config, ZcdpLedger& ledger) {
  RequireMethod(config, Method::kFirstOrder);
  ValidateSolverConfig(config);
  const auto start = Clock::now();
  const double n = static_cast<double>(dataset.num_examples());
  const double clip = config.sanitize
                          ? config.clip.gradient_clip
                          : std::numeric_limits<double>::infinity();

  TrainResult result;
  WeightMatrix& w = result.weights;
  w = InitialWeights(dataset, config);
  Matrix params = Stack(w);
  Matrix decay_mask = Matrix::Ones(params.rows(), params.cols());
  if (w.bias) decay_mask.col(params.cols() - 1).setZero();
  AdamState adam(params.rows(), params.cols(), config);
  Matrix iterate_sum = Matrix::Zero(params.rows(), params.cols());

  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    const Matrix raw = AtIteration(config.method, t, [&] {
      return statistics::ClippedGradientSum(config.loss, w, dataset, clip);
    });
    Matrix grad;
    if (config.sanitize) {
      grad = SanitizeSum(raw, config.clip.gradient_clip, config.sigma, n,
                         Key(config, t, 0, StatisticId::kGradient), ledger,
                         Label(config.method, "gradient", t));
    } else {
      grad = raw / n;
    }
    RequireFinite(grad, config.method, t, "gradient");
    // Weight decay is data-independent, so it is applied after noising.
    grad += config.lambda * params.cwiseProduct(decay_mask);
    if (config.optimizer == Optimizer::kAdam) {
      params -= config.learning_rate * adam.Step(grad, t);
    } else {
      params -= config.learning_rate * grad;
    }
    RequireFinite(params, config.method, t, "weights");
    Unstack(params, w);
    if (config.average_iterates) iterate_sum += params;
    if (config.track_objective) {
      result.report.objective.push_back(AtIteration(config.method, t, [&] {
        return BatchObjective(config.loss, w, dataset);
      }));
    }
  }
  if (config.average_iterates) {
    Unstack(iterate_sum / static_cast<double>(config.iterations), w);
  }
  FinishReport(result.report, config, ledger, start);
  return result;
}

TrainResult TrainDpNewton(const FeatureDataset& dataset,
                          const SolverConfig& config, ZcdpLedger& ledger) {
  RequireMethod(config, Method::kNewton);
  ValidateSolverConfig(config);
  const auto start = Clock::now();
  const double n = static_cast<double>(dataset.num_examples());
  const auto m = static_cast<std::int64_t>(dataset.num_classes());
  const Eigen::Index d = dataset.num_features();
  const double feature_clip = config.clip.feature_clip;
  const double curvature_bound = config.loss.curvature_bound();
  // Each class's gradient and Hessian carry noise sqrt(m) times larger than a
  // lone release, so each costs 1 / (2 m sigma^2) and an iteration costs
  // 1 / sigma^2 over all classes.
  const double class_sigma = config.sigma * std::sqrt(static_cast<double>(m));
  const bool clamp =
      config.sanitize && config.loss.kind == LossKind::kSquared;

  const Matrix features = config.sanitize
                              ? ClipRowsL2(dataset.features(), feature_clip)
                              : dataset.features();
  const Matrix ridge = config.lambda * Matrix::Identity(d, d);

  TrainResult result;
  WeightMatrix& w = result.weights;
  w = InitialWeights(dataset, config);

  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    Matrix next = w.theta;
    for (std::int64_t j = 0; j < m; ++j) {
      const auto jj = static_cast<std::uint64_t>(j);
      auto stats = AtIteration(config.method, t, [&] {
        return statistics::NewtonStatistics(config.loss,
                                            w.theta.row(j).transpose(),
                                            features, dataset, jj, clamp);
      });
      Matrix hessian = stats.hessian + ridge;
      Vector grad;
      if (config.sanitize) {
        grad = SanitizeSum(stats.gradient, feature_clip, class_sigma, n,
                           Key(config, t, jj, StatisticId::kGradient), ledger,
                           Label(config.method, "gradient", t, j));
        hessian = SanitizeSum(hessian, curvature_bound * feature_clip *
                                           feature_clip,
                              class_sigma, n,
                              Key(config, t, jj, StatisticId::kHessian), ledger,
                              Label(config.method, "hessian", t, j));
      } else {
        grad = stats.gradient / n;
        hessian /= n;
      }
      Vector step;
      try {
        step = SolveLinear(Symmetrize(hessian), grad);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSingularMatrix) throw;
        throw Error(ErrorCode::kSingularMatrix,
                    "newton: Hessian solve failed at iteration " +
                        std::to_string(t) + ", class " + std::to_string(j) +
                        " (consider a larger lambda): " + e.what());
      }
      next.row(j) -= config.learning_rate * step.transpose();
    }
    RequireFinite(next, config.method, t, "weights");
    w.theta = std::move(next);
    if (config.track_objective) {
      result.report.objective.push_back(AtIteration(config.method, t, [&] {
        return BatchObjective(config.loss, w, dataset);
      }));
    }
  }
  FinishReport(result.report, config, ledger, start);
  return result;
}

TrainResult TrainDpLeastSquares(const FeatureDataset& dataset,
                                const SolverConfig& config,
                                ZcdpLedger& ledger) {
  RequireMethod(config, Method::kLeastSquares);
  ValidateSolverConfig(config);
  const auto start = Clock::now();
  const auto m = static_cast<std::size_t>(dataset.num_classes());
  const Eigen::Index d = dataset.num_features();
  const double c = config.clip.feature_clip;
  // k = 0 only happens for a dataset without labels; the bound for k = 1 is
  // still valid there.
  const double root_k = std::sqrt(
      static_cast<double>(std::max<std::uint64_t>(dataset.max_positives(), 1)));

  const Matrix features = config.sanitize
                              ? ClipRowsL2(dataset.features(), c)
                              : dataset.features();
  QuadraticStatistics stats = ComputeQuadraticStatistics(dataset, features);

  // The statistics are released as unnormalized sums, so the normalizer is 1.
  if (config.sanitize) {
    stats.gram = SanitizeSum(stats.gram, c * c, config.sigma, 1.0,
                             Key(config, 0, 0, StatisticId::kGram), ledger,
                             Label(config.method, "gram", 0));
    std::vector<NoiseKey> gram_keys;
    std::vector<NoiseKey> rhs_keys;
    for (std::size_t j = 0; j < m; ++j) {
      gram_keys.push_back(Key(config, 0, j, StatisticId::kClassGram));
      rhs_keys.push_back(Key(config, 0, j, StatisticId::kClassRhs));
    }
    stats.class_gram =
        SanitizeBlocks(std::span<const Matrix>(stats.class_gram),
                       root_k * c * c, config.sigma, 1.0, gram_keys, ledger,
                       Label(config.method, "class_gram", 0));
    stats.class_rhs =
        SanitizeBlocks(std::span<const Vector>(stats.class_rhs), root_k * c,
                       config.sigma, 1.0, rhs_keys, ledger,
                       Label(config.method, "class_rhs", 0));
  }

  TrainResult result;
  WeightMatrix& w = result.weights;
  w = WeightMatrix::Zeros(static_cast<Eigen::Index>(m), d);
  const Matrix ridge = config.lambda * Matrix::Identity(d, d);
  for (std::size_t j = 0; j < m; ++j) {
    const Matrix lhs =
        Symmetrize(stats.class_gram[j] + config.alpha * stats.gram) + ridge;
    try {
      w.theta.row(static_cast<Eigen::Index>(j)) =
          SolveLinear(lhs, stats.class_rhs[j]).transpose();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularMatrix) throw;
      throw Error(ErrorCode::kSingularMatrix,
                  "least_squares: system for class " + std::to_string(j) +
                      " is singular (consider a larger lambda or alpha): " +
                      e.what());
    }
  }
  RequireFinite(w.theta, config.method, 0, "weights");
  if (config.track_objective) {
    result.report.objective.push_back(BatchObjective(
        LossSpec::WeightedQuadratic(config.alpha), w, dataset));
  }
  FinishReport(result.report, config, ledger, start);
  return result;
}

TrainResult TrainDpFeatureCovariance(const FeatureDataset& dataset,
                                     const SolverConfig& config,
                                     ZcdpLedger& ledger) {
  RequireMethod(config, Method::kFeatureCovariance);
  ValidateSolverConfig(config);
  const auto start = Clock::now();
  const double n = static_cast<double>(dataset.num_examples());
  const Eigen::Index d = dataset.num_features();
  const double cov_clip = config.clip.feature_clip;
  const double grad_clip = config.sanitize
                               ? config.clip.gradient_clip
                               : std::numeric_limits<double>::infinity();

  const Matrix clipped = config.sanitize
                             ? ClipRowsL2(dataset.features(), cov_clip)
                             : dataset.features();
  Matrix covariance = WeightedGram(clipped);
  if (config.sanitize) {
    covariance = SanitizeSum(covariance, cov_clip * cov_clip, config.sigma, n,
                             Key(config, 0, 0, StatisticId::kGram), ledger,
                             Label(config.method, "gram", 0));
  } else {
    covariance /= n;
  }
  covariance = Symmetrize(covariance) + config.lambda * Matrix::Identity(d, d);
  std::optional<LuFactorization> preconditioner;
  try {
    preconditioner.emplace(covariance);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularMatrix) throw;
    throw Error(ErrorCode::kSingularMatrix,
                std::string("feature_covariance: noised covariance is singular "
                            "(consider a larger lambda): ") +
                    e.what());
  }

  TrainResult result;
  WeightMatrix& w = result.weights;
  w = InitialWeights(dataset, config);
  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    const Matrix raw = AtIteration(config.method, t, [&] {
      return statistics::ClippedGradientSum(config.loss, w, dataset,
                                            grad_clip);
    });
    Matrix grad;
    if (config.sanitize) {
      grad = SanitizeSum(raw, config.clip.gradient_clip, config.sigma, n,
                         Key(config, t, 0, StatisticId::kGradient), ledger,
                         Label(config.method, "gradient", t));
    } else {
      grad = raw / n;
    }
    RequireFinite(grad, config.method, t, "gradient");
    // g G^{-1} for symmetric G is (G^{-1} g^T)^T.
    const Matrix weight_grad = grad.leftCols(d);
    const Matrix direction =
        preconditioner->Solve(Matrix(weight_grad.transpose())).transpose();
    w.theta -= config.learning_rate * direction;
    if (w.bias) *w.bias -= config.learning_rate * grad.col(d);
    RequireFinite(w.theta, config.method, t, "weights");
    if (config.track_objective) {
      result.report.objective.push_back(AtIteration(config.method, t, [&] {
        return BatchObjective(config.loss, w, dataset);
      }));
    }
  }
  FinishReport(result.report, config, ledger, start);
  return result;
}

TrainResult Train(const FeatureDataset& dataset, const SolverConfig& config,
                  ZcdpLedger& ledger) {
  switch (config.method) {
    case Method::kFirstOrder:
      return TrainDpFirstOrder(dataset, config, ledger);
    case Method::kNewton:
      return TrainDpNewton(dataset, config, ledger);
    case Method::kLeastSquares:
      return TrainDpLeastSquares(dataset, config, ledger);
    case Method::kFeatureCovariance:
      return TrainDpFeatureCovariance(dataset, config, ledger);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

double EvaluateTop1(const WeightMatrix& weights,
                    const FeatureDataset& dataset) {
  const Matrix logits = weights.Logits(dataset.features());
  if (logits.cols() != static_cast<Eigen::Index>(dataset.num_classes())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "EvaluateTop1: weight rows do not match the class count");
  }
  std::int64_t correct = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    auto row = dataset.positives(i);
    if (row.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "EvaluateTop1: example " + std::to_string(i) + " has " +
                      std::to_string(row.size()) +
                      " positive classes; top-1 needs exactly one");
    }
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < logits.cols(); ++j) {
      if (logits(i, j) > logits(i, best)) best = j;
    }
    if (best == static_cast<Eigen::Index>(row[0])) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(dataset.num_examples());
}

}  // namespace dplinear
