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

#include "dplinear/synthetic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "dplinear/error.h"
#include "dplinear/random.h"

namespace dplinear {
namespace {

// Stream ids within one synthetic seed.
constexpr std::uint64_t kMeansStream = 1;
constexpr std::uint64_t kLabelStream = 2;
constexpr std::uint64_t kFeatureStream = 3;

Matrix ClassMeans(const SyntheticSpec& spec) {
  KeyedStream stream({spec.seed, kMeansStream});
  Matrix means(spec.m, spec.d);
  for (Eigen::Index j = 0; j < means.rows(); ++j) {
    for (Eigen::Index c = 0; c < means.cols(); ++c) {
      means(j, c) = stream.NextGaussian();
    }
  }
  if (spec.m == 1) {
    // No pair to separate; put the lone mean at distance `margin` from 0.
    const double norm = means.row(0).norm();
    if (norm > 0.0) means.row(0) *= spec.margin / norm;
    return means;
  }
  double closest = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < means.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < means.rows(); ++b) {
      closest = std::min(closest, (means.row(a) - means.row(b)).norm());
    }
  }
  means *= spec.margin / closest;
  return means;
}

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.n < 2 || spec.d < 1 || spec.m < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic spec needs n >= 2, d >= 1, m >= 1");
  }
  if (spec.m > spec.n) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic spec has more classes than examples");
  }
  if (!(spec.margin >= 0.0) || !std::isfinite(spec.margin) ||
      !(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic margin and noise must be finite and non-negative");
  }

  const Matrix means = ClassMeans(spec);

  std::vector<std::uint32_t> labels(static_cast<std::size_t>(spec.n));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<std::uint32_t>(i % static_cast<std::size_t>(spec.m));
  }
  KeyedStream shuffle({spec.seed, kLabelStream});
  for (std::size_t i = labels.size() - 1; i > 0; --i) {
    std::swap(labels[i], labels[shuffle.NextBelow(i + 1)]);
  }

  KeyedStream noise({spec.seed, kFeatureStream});
  Matrix features(spec.n, spec.d);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      features(i, c) = means(labels[static_cast<std::size_t>(i)], c) +
                       spec.noise * noise.NextGaussian();
    }
  }

  const Eigen::Index train_rows = (spec.n * 8) / 10;
  if (train_rows < 1 || train_rows >= spec.n) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic spec is too small for an 80/20 split");
  }
  std::vector<std::vector<std::uint32_t>> positives;
  positives.reserve(labels.size());
  for (std::uint32_t y : labels) positives.push_back({y});
  const FeatureDataset all = FeatureDataset::Create(
      std::move(features), std::move(positives),
      static_cast<std::uint64_t>(spec.m), 1);
  return SyntheticData{all.Slice(0, train_rows), all.Slice(train_rows, spec.n)};
}

}  // namespace dplinear
