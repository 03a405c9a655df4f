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

// Per-logit losses l(z, y) and their first two derivatives in z.
//
//   logistic             -y log s(z) - (1 - y) log(1 - s(z)),  s = sigmoid
//   squared              (z - y)^2 / 2
//   weighted_quadratic   (y (z - y)^2 + alpha z^2) / 2,  y in {0, 1}
//
// Two normalizations are in use. BatchObjective is the mean over examples of
// the per-example sum over classes. QuadraticFormObjective is the
// unnormalized expansion in terms of the DP-LS statistics, without the
// constant; the two agree via
//
//   n * BatchObjective = QuadraticFormObjective + (number of positives) / 2.

#ifndef DPLINEAR_LOSSES_H_
#define DPLINEAR_LOSSES_H_

#include <string_view>
#include <vector>

#include "dplinear/dataset.h"
#include "dplinear/linalg.h"

namespace dplinear {

enum class LossKind { kLogistic, kSquared, kWeightedQuadratic };

std::string_view LossKindName(LossKind kind);
LossKind ParseLossKind(std::string_view name);

struct LossSpec {
  LossKind kind = LossKind::kLogistic;
  double alpha = 0.0;  // weighted_quadratic only

  static LossSpec Logistic() { return {LossKind::kLogistic, 0.0}; }
  static LossSpec Squared() { return {LossKind::kSquared, 0.0}; }
  static LossSpec WeightedQuadratic(double alpha) {
    return {LossKind::kWeightedQuadratic, alpha};
  }

  // Certified bound on |l'|. For squared loss it holds only once l' is
  // clamped to [-1, 1], which DP-Newton does.
  double derivative_bound() const { return 1.0; }
  // beta_H: 1/4 for logistic, 1 for squared, 1 + alpha for weighted_quadratic.
  double curvature_bound() const;
};

// Numerically stable sigmoid.
double Sigmoid(double z);

double Loss(const LossSpec& spec, double z, double y);
double LossGrad(const LossSpec& spec, double z, double y);
double LossCurv(const LossSpec& spec, double z, double y);

// (1/n) sum_i sum_j l(<theta_j, x_i> + bias_j, y_ij).
double BatchObjective(const LossSpec& spec, const WeightMatrix& weights,
                      const FeatureDataset& dataset);

// Sufficient statistics of the weighted quadratic loss:
//   A_j = sum_{i: y_ij = 1} x_i x_i^T,  b_j = sum_{i: y_ij = 1} x_i,
//   G = sum_i x_i x_i^T.
struct QuadraticStatistics {
  std::vector<Matrix> class_gram;  // A_j
  std::vector<Vector> class_rhs;   // b_j
  Matrix gram;                     // G
};

// Statistics over the rows of `features` (which may be clipped copies of the
// dataset's features) with the dataset's labels.
QuadraticStatistics ComputeQuadraticStatistics(const FeatureDataset& dataset,
                                               const Matrix& features);

// (1/2) sum_j (theta_j^T A_j theta_j - 2 theta_j^T b_j
//              + alpha theta_j^T G theta_j).
double QuadraticFormObjective(const QuadraticStatistics& stats,
                              const Matrix& theta, double alpha);

}  // namespace dplinear

#endif  // DPLINEAR_LOSSES_H_
