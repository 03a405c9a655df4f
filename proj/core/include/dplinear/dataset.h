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

#ifndef DPLINEAR_DATASET_H_
#define DPLINEAR_DATASET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dplinear/linalg.h"

namespace dplinear {

// n examples with d features each and multi-hot binary labels over m classes,
// stored as sorted per-example lists of positive class ids (CSR layout).
// y_ij = 1 iff j is in example i's list. Every list has at most k entries;
// k is carried explicitly because DP-LS calibrates its noise to it.
class FeatureDataset {
 public:
  FeatureDataset() = default;

  // Validates all invariants; throws Error(kInvariantViolation) (or
  // kNonFinite for bad features) on violation. Lists need not be sorted on
  // input but must not contain duplicates.
  static FeatureDataset Create(Matrix features,
                               std::vector<std::vector<std::uint32_t>> positives,
                               std::uint64_t num_classes,
                               std::uint64_t max_positives);

  // Same, from the CSR arrays directly. offsets has n + 1 entries.
  static FeatureDataset FromCsr(Matrix features,
                                std::vector<std::uint32_t> offsets,
                                std::vector<std::uint32_t> indices,
                                std::uint64_t num_classes,
                                std::uint64_t max_positives);

  Eigen::Index num_examples() const { return features_.rows(); }
  Eigen::Index num_features() const { return features_.cols(); }
  std::uint64_t num_classes() const { return num_classes_; }
  std::uint64_t max_positives() const { return max_positives_; }

  const Matrix& features() const { return features_; }
  std::span<const std::uint32_t> positives(Eigen::Index i) const;
  const std::vector<std::uint32_t>& offsets() const { return offsets_; }
  const std::vector<std::uint32_t>& indices() const { return indices_; }

  bool IsPositive(Eigen::Index i, std::uint64_t j) const;
  // Dense n x m 0/1 matrix. Meant for tests and small problems.
  Matrix DenseLabels() const;

  // Copy with the features replaced (same labels). Throws on shape change.
  FeatureDataset WithFeatures(Matrix features) const;
  // Rows [begin, end) as a new dataset with the same m and k.
  FeatureDataset Slice(Eigen::Index begin, Eigen::Index end) const;

  bool operator==(const FeatureDataset& other) const;

 private:
  void Validate() const;

  Matrix features_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> indices_;
  std::uint64_t num_classes_ = 0;
  std::uint64_t max_positives_ = 0;
};

// theta is m x d. The bias, when present, has length m and is added to every
// logit of its class.
struct WeightMatrix {
  Matrix theta;
  std::optional<Vector> bias;

  static WeightMatrix Zeros(Eigen::Index m, Eigen::Index d);

  // Logits for all examples: features * theta^T (+ bias), n x m.
  Matrix Logits(const Matrix& features) const;
};

}  // namespace dplinear

#endif  // DPLINEAR_DATASET_H_
