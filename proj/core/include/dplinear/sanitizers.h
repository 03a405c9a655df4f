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

// Norm clipping and the Gaussian mechanism. Every noised statistic in the
// library goes through SanitizeSum or SanitizeBlocks, which is also where the
// release is charged to the run's ledger.

#ifndef DPLINEAR_SANITIZERS_H_
#define DPLINEAR_SANITIZERS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dplinear/accountant.h"
#include "dplinear/linalg.h"
#include "dplinear/noise_key.h"

namespace dplinear {

struct ClipConfig {
  // C (or C_G for the covariance in DP-FC): bound on feature norms.
  double feature_clip = 1.0;
  // C_g: bound on per-example gradient norms.
  double gradient_clip = 1.0;
};

// Both norms must be finite and positive.
void ValidateClipConfig(const ClipConfig& clip);

// v * min(1, c / ||v||_2). Matrices are clipped in Frobenius norm, i.e. as
// one flattened vector.
Vector ClipL2(const Vector& v, double c);
Matrix ClipL2(const Matrix& v, double c);

// Clips every row of `rows` to norm at most c.
Matrix ClipRowsL2(const Matrix& rows, double c);

// I.i.d. N(0, stddev^2) entries drawn from the stream named by `key`, filled
// in row-major order. stddev == 0 gives exact zeros.
Matrix GaussianNoise(Eigen::Index rows, Eigen::Index cols, double stddev,
                     const NoiseKey& key);
Vector GaussianNoise(Eigen::Index len, double stddev, const NoiseKey& key);

// Gaussian mechanism on a sum: (raw_sum + N(0, (sigma * sensitivity)^2)) /
// normalizer, charging 1 / (2 sigma^2) to `ledger` under `label`.
//
// Callers that split one privacy budget over several releases pass an
// inflated sigma (DP-Newton uses sigma * sqrt(m) per class), which makes the
// charge scale down accordingly.
Matrix SanitizeSum(const Matrix& raw_sum, double sensitivity, double sigma,
                   double normalizer, const NoiseKey& key, ZcdpLedger& ledger,
                   std::string label);
Vector SanitizeSum(const Vector& raw_sum, double sensitivity, double sigma,
                   double normalizer, const NoiseKey& key, ZcdpLedger& ledger,
                   std::string label);

// One Gaussian release over the concatenation of several blocks, where
// `sensitivity` bounds the joint L2/Frobenius change across all blocks.
// Block b is noised from keys[b]; the ledger is charged once.
std::vector<Matrix> SanitizeBlocks(std::span<const Matrix> raw_sums,
                                   double sensitivity, double sigma,
                                   double normalizer,
                                   std::span<const NoiseKey> keys,
                                   ZcdpLedger& ledger, std::string label);
std::vector<Vector> SanitizeBlocks(std::span<const Vector> raw_sums,
                                   double sensitivity, double sigma,
                                   double normalizer,
                                   std::span<const NoiseKey> keys,
                                   ZcdpLedger& ledger, std::string label);

}  // namespace dplinear

#endif  // DPLINEAR_SANITIZERS_H_
