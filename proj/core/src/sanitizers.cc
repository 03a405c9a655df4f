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

#include "dplinear/sanitizers.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "dplinear/error.h"
#include "dplinear/random.h"

namespace dplinear {
namespace {

void CheckClipNorm(double c, const char* what) {
  if (!(std::isfinite(c) && c > 0.0)) {
    std::ostringstream os;
    os << what << " must be finite and positive, got " << c;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

void CheckStddev(double stddev) {
  if (!(stddev >= 0.0) || std::isinf(stddev)) {
    std::ostringstream os;
    os << "noise stddev must be finite and non-negative, got " << stddev;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

void CheckMechanismArgs(double sensitivity, double sigma, double normalizer) {
  if (!(sensitivity > 0.0) || std::isinf(sensitivity)) {
    throw Error(ErrorCode::kInvalidArgument,
                "sensitivity must be finite and positive");
  }
  if (!(sigma >= 0.0) || std::isinf(sigma)) {
    throw Error(ErrorCode::kInvalidArgument,
                "noise multiplier must be finite and non-negative");
  }
  if (!(normalizer > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "normalizer must be positive");
  }
}

double ChargeFor(double sigma) {
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * sigma * sigma);
}

template <typename T>
T ScaleToNorm(const T& v, double c) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "ClipL2: input has non-finite entries");
  }
  CheckClipNorm(c, "clip norm");
  const double norm = v.norm();
  if (norm <= c) return v;
  T out = v * (c / norm);
  return out;
}

}  // namespace

void ValidateClipConfig(const ClipConfig& clip) {
  CheckClipNorm(clip.feature_clip, "feature clip norm");
  CheckClipNorm(clip.gradient_clip, "gradient clip norm");
}

Vector ClipL2(const Vector& v, double c) { return ScaleToNorm(v, c); }

Matrix ClipL2(const Matrix& v, double c) { return ScaleToNorm(v, c); }

Matrix ClipRowsL2(const Matrix& rows, double c) {
  CheckClipNorm(c, "clip norm");
  CheckFinite(rows, "ClipRowsL2");
  Matrix out = rows;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > c) out.row(i) *= c / norm;
  }
  return out;
}

Matrix GaussianNoise(Eigen::Index rows, Eigen::Index cols, double stddev,
                     const NoiseKey& key) {
  CheckStddev(stddev);
  Matrix out = Matrix::Zero(rows, cols);
  if (stddev == 0.0) return out;
  KeyedStream stream(key);
  double* data = out.data();
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    data[i] = stddev * stream.NextGaussian();
  }
  return out;
}

Vector GaussianNoise(Eigen::Index len, double stddev, const NoiseKey& key) {
  CheckStddev(stddev);
  Vector out = Vector::Zero(len);
  if (stddev == 0.0) return out;
  KeyedStream stream(key);
  for (Eigen::Index i = 0; i < len; ++i) {
    out[i] = stddev * stream.NextGaussian();
  }
  return out;
}

Matrix SanitizeSum(const Matrix& raw_sum, double sensitivity, double sigma,
                   double normalizer, const NoiseKey& key, ZcdpLedger& ledger,
                   std::string label) {
  CheckMechanismArgs(sensitivity, sigma, normalizer);
  Matrix noised =
      raw_sum +
      GaussianNoise(raw_sum.rows(), raw_sum.cols(), sigma * sensitivity, key);
  noised /= normalizer;
  ledger.Charge(std::move(label), ChargeFor(sigma), {key});
  return noised;
}

Vector SanitizeSum(const Vector& raw_sum, double sensitivity, double sigma,
                   double normalizer, const NoiseKey& key, ZcdpLedger& ledger,
                   std::string label) {
  CheckMechanismArgs(sensitivity, sigma, normalizer);
  Vector noised =
      raw_sum + GaussianNoise(raw_sum.size(), sigma * sensitivity, key);
  noised /= normalizer;
  ledger.Charge(std::move(label), ChargeFor(sigma), {key});
  return noised;
}

namespace {

template <typename T>
std::vector<T> SanitizeBlocksImpl(std::span<const T> raw_sums,
                                  double sensitivity, double sigma,
                                  double normalizer,
                                  std::span<const NoiseKey> keys,
                                  ZcdpLedger& ledger, std::string label) {
  CheckMechanismArgs(sensitivity, sigma, normalizer);
  if (raw_sums.size() != keys.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "SanitizeBlocks: one noise key is required per block");
  }
  const double stddev = sigma * sensitivity;
  std::vector<T> out;
  out.reserve(raw_sums.size());
  for (std::size_t b = 0; b < raw_sums.size(); ++b) {
    T noised = raw_sums[b];
    if constexpr (T::ColsAtCompileTime == 1) {
      noised += GaussianNoise(noised.size(), stddev, keys[b]);
    } else {
      noised += GaussianNoise(noised.rows(), noised.cols(), stddev, keys[b]);
    }
    noised /= normalizer;
    out.push_back(std::move(noised));
  }
  ledger.Charge(std::move(label), ChargeFor(sigma),
                std::vector<NoiseKey>(keys.begin(), keys.end()));
  return out;
}

}  // namespace

std::vector<Matrix> SanitizeBlocks(std::span<const Matrix> raw_sums,
                                   double sensitivity, double sigma,
                                   double normalizer,
                                   std::span<const NoiseKey> keys,
                                   ZcdpLedger& ledger, std::string label) {
  return SanitizeBlocksImpl(raw_sums, sensitivity, sigma, normalizer, keys,
                            ledger, std::move(label));
}

std::vector<Vector> SanitizeBlocks(std::span<const Vector> raw_sums,
                                   double sensitivity, double sigma,
                                   double normalizer,
                                   std::span<const NoiseKey> keys,
                                   ZcdpLedger& ledger, std::string label) {
  return SanitizeBlocksImpl(raw_sums, sensitivity, sigma, normalizer, keys,
                            ledger, std::move(label));
}

}  // namespace dplinear
