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

// Full-batch private training of a linear head on fixed features.
//
//   TrainDpFirstOrder         clipped per-example gradients, Gaussian noise on
//                             the sum, then Adam or SGD.  rho = T / (2 s^2)
//   TrainDpNewton             clipped features, per-class noised gradient and
//                             Hessian, damped Newton step.  rho = T / s^2
//   TrainDpLeastSquares       noised sufficient statistics of the weighted
//                             quadratic loss, one solve per class.
//                             rho = 3 / (2 s^2)
//   TrainDpFeatureCovariance  first-order steps right-preconditioned by a
//                             noised feature covariance computed once.
//                             rho = (T + 1) / (2 s^2)
//
// where s is SolverConfig::sigma. Every release is charged to the ledger the
// caller passes in, so the ledger total after a run equals the closed form.

#ifndef DPLINEAR_SOLVERS_H_
#define DPLINEAR_SOLVERS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "dplinear/accountant.h"
#include "dplinear/dataset.h"
#include "dplinear/linalg.h"
#include "dplinear/losses.h"
#include "dplinear/sanitizers.h"

namespace dplinear {

enum class Optimizer { kAdam, kSgd };

struct SolverConfig {
  Method method = Method::kFirstOrder;
  // Ignored by DP-LS, which always uses weighted_quadratic with `alpha`.
  LossSpec loss = LossSpec::Logistic();
  std::int64_t iterations = 10;
  double learning_rate = 1.0;
  // First-order: L2 weight decay added to the noised gradient.
  // Newton: added to the unnormalized Hessian sum, so the effective damping
  //   after the 1/n normalization is lambda / n.
  // DP-LS: added to the unnormalized normal equations.
  // DP-FC: added to the normalized covariance.
  double lambda = 0.0;
  double alpha = 0.0;
  Optimizer optimizer = Optimizer::kAdam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  ClipConfig clip;
  double sigma = 0.0;
  // false turns off every sanitization step, clipping included, and charges
  // nothing: the non-private reference configuration.
  bool sanitize = true;
  // Trained bias per class (first-order and DP-FC only). DP-Newton and DP-LS
  // take a bias as an appended constant feature instead.
  bool use_bias = false;
  double bias_init = -10.0;
  // First-order only: return the mean of the T iterates instead of the last.
  bool average_iterates = false;
  bool track_objective = true;
  std::uint64_t seed = 0;
  // Delta at which the report states epsilon.
  double report_delta = 1e-5;
};

// Throws Error(kInvalidArgument) on inconsistent settings.
void ValidateSolverConfig(const SolverConfig& config);

struct TrainReport {
  Method method = Method::kFirstOrder;
  // Training objective after each iteration (one entry for DP-LS). Computed
  // from the raw data, for diagnostics only.
  std::vector<double> objective;
  double total_rho = 0.0;
  double epsilon = 0.0;  // at config.report_delta
  std::size_t releases = 0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  SolverConfig config;
};

struct TrainResult {
  WeightMatrix weights;
  TrainReport report;
};

TrainResult TrainDpFirstOrder(const FeatureDataset& dataset,
                              const SolverConfig& config, ZcdpLedger& ledger);
TrainResult TrainDpNewton(const FeatureDataset& dataset,
                          const SolverConfig& config, ZcdpLedger& ledger);
TrainResult TrainDpLeastSquares(const FeatureDataset& dataset,
                                const SolverConfig& config,
                                ZcdpLedger& ledger);
TrainResult TrainDpFeatureCovariance(const FeatureDataset& dataset,
                                     const SolverConfig& config,
                                     ZcdpLedger& ledger);

// Dispatches on config.method.
TrainResult Train(const FeatureDataset& dataset, const SolverConfig& config,
                  ZcdpLedger& ledger);

// Fraction of examples whose highest logit is their (single) positive class.
// Ties go to the smallest class index. Throws Error(kInvalidArgument) if any
// example does not have exactly one positive.
double EvaluateTop1(const WeightMatrix& weights, const FeatureDataset& dataset);

// Unnoised statistics, exposed so their sensitivity can be audited directly.
namespace statistics {

// l'(z_ij, y_ij) for all examples and classes.
Matrix LossGradients(const LossSpec& loss, const Matrix& logits,
                     const FeatureDataset& dataset);

// sum_i clip(grad_i, gradient_clip), where grad_i is example i's m x d
// gradient (m x (d + 1) with the bias column last when weights.bias is set),
// clipped jointly across classes. gradient_clip = +inf disables clipping.
Matrix ClippedGradientSum(const LossSpec& loss, const WeightMatrix& weights,
                          const FeatureDataset& dataset, double gradient_clip);

struct NewtonClassStatistics {
  Vector gradient;  // sum_i l'(theta_j . x_i, y_ij) x_i
  Matrix hessian;   // sum_i l''(theta_j . x_i, y_ij) x_i x_i^T, no ridge
};

// Class j's Newton statistics over `features` (already clipped by the
// caller). With clamp_derivative, l' is clamped to [-1, 1].
NewtonClassStatistics NewtonStatistics(const LossSpec& loss,
                                       const Vector& theta_j,
                                       const Matrix& features,
                                       const FeatureDataset& dataset,
                                       std::uint64_t j, bool clamp_derivative);

}  // namespace statistics

}  // namespace dplinear

#endif  // DPLINEAR_SOLVERS_H_
