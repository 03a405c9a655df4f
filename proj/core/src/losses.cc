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

#include "dplinear/losses.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dplinear/error.h"

namespace dplinear {
namespace {

void CheckArgs(const LossSpec& spec, double z, double y) {
  if (std::isnan(z)) {
    throw Error(ErrorCode::kNonFinite, "loss evaluated at a NaN logit");
  }
  if (!(y >= 0.0 && y <= 1.0)) {
    std::ostringstream os;
    os << "label " << y << " is outside [0, 1]";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  if (spec.kind == LossKind::kWeightedQuadratic && y != 0.0 && y != 1.0) {
    std::ostringstream os;
    os << "weighted_quadratic needs binary labels, got " << y;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

}  // namespace

std::string_view LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kLogistic:
      return "logistic";
    case LossKind::kSquared:
      return "squared";
    case LossKind::kWeightedQuadratic:
      return "weighted_quadratic";
  }
  return "unknown";
}

LossKind ParseLossKind(std::string_view name) {
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "squared") return LossKind::kSquared;
  if (name == "weighted_quadratic") return LossKind::kWeightedQuadratic;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown loss '" + std::string(name) + "'");
}

double LossSpec::curvature_bound() const {
  switch (kind) {
    case LossKind::kLogistic:
      return 0.25;
    case LossKind::kSquared:
      return 1.0;
    case LossKind::kWeightedQuadratic:
      return 1.0 + alpha;
  }
  return 0.0;
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Loss(const LossSpec& spec, double z, double y) {
  CheckArgs(spec, z, y);
  switch (spec.kind) {
    case LossKind::kLogistic:
      // log(1 + e^z) - z y, without overflow.
      return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    case LossKind::kSquared:
      return 0.5 * (z - y) * (z - y);
    case LossKind::kWeightedQuadratic:
      return 0.5 * (y * (z - y) * (z - y) + spec.alpha * z * z);
  }
  return 0.0;
}

double LossGrad(const LossSpec& spec, double z, double y) {
  CheckArgs(spec, z, y);
  switch (spec.kind) {
    case LossKind::kLogistic:
      return Sigmoid(z) - y;
    case LossKind::kSquared:
      return z - y;
    case LossKind::kWeightedQuadratic:
      return y * (z - y) + spec.alpha * z;
  }
  return 0.0;
}

double LossCurv(const LossSpec& spec, double z, double y) {
  CheckArgs(spec, z, y);
  switch (spec.kind) {
    case LossKind::kLogistic: {
      // s (1 - s) = e^{-|z|} / (1 + e^{-|z|})^2, exact in both tails.
      const double e = std::exp(-std::abs(z));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case LossKind::kSquared:
      return 1.0;
    case LossKind::kWeightedQuadratic:
      return y + spec.alpha;
  }
  return 0.0;
}

double BatchObjective(const LossSpec& spec, const WeightMatrix& weights,
                      const FeatureDataset& dataset) {
  if (weights.theta.rows() != static_cast<Eigen::Index>(dataset.num_classes())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "BatchObjective: weights have " +
                    std::to_string(weights.theta.rows()) + " rows for m=" +
                    std::to_string(dataset.num_classes()));
  }
  const Matrix logits = weights.Logits(dataset.features());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    auto row = dataset.positives(i);
    std::size_t next = 0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      double y = 0.0;
      if (next < row.size() && row[next] == static_cast<std::uint32_t>(j)) {
        y = 1.0;
        ++next;
      }
      total += Loss(spec, logits(i, j), y);
    }
  }
  return total / static_cast<double>(dataset.num_examples());
}

QuadraticStatistics ComputeQuadraticStatistics(const FeatureDataset& dataset,
                                               const Matrix& features) {
  if (features.rows() != dataset.num_examples()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ComputeQuadraticStatistics: feature rows do not match labels");
  }
  const Eigen::Index d = features.cols();
  const auto m = static_cast<std::size_t>(dataset.num_classes());
  QuadraticStatistics stats;
  stats.gram = WeightedGram(features);
  stats.class_gram.assign(m, Matrix::Zero(d, d));
  stats.class_rhs.assign(m, Vector::Zero(d));

  // Group rows by class so each A_j is one product, accumulated in row order.
  std::vector<std::vector<Eigen::Index>> members(m);
  for (Eigen::Index i = 0; i < dataset.num_examples(); ++i) {
    for (std::uint32_t j : dataset.positives(i)) members[j].push_back(i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (members[j].empty()) continue;
    Matrix rows(static_cast<Eigen::Index>(members[j].size()), d);
    for (std::size_t r = 0; r < members[j].size(); ++r) {
      rows.row(static_cast<Eigen::Index>(r)) = features.row(members[j][r]);
    }
    stats.class_gram[j] = WeightedGram(rows);
    stats.class_rhs[j] = rows.colwise().sum().transpose();
  }
  return stats;
}

double QuadraticFormObjective(const QuadraticStatistics& stats,
                              const Matrix& theta, double alpha) {
  if (static_cast<std::size_t>(theta.rows()) != stats.class_gram.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "QuadraticFormObjective: class count mismatch");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < theta.rows(); ++j) {
    const Vector t = theta.row(j).transpose();
    const auto jj = static_cast<std::size_t>(j);
    total += t.dot(stats.class_gram[jj] * t) -
             2.0 * t.dot(stats.class_rhs[jj]) + alpha * t.dot(stats.gram * t);
  }
  return 0.5 * total;
}

}  // namespace dplinear
