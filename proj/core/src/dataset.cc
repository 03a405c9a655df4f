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

#include "dplinear/dataset.h"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "dplinear/error.h"

namespace dplinear {
namespace {

[[noreturn]] void Violation(const std::string& message) {
  throw Error(ErrorCode::kInvariantViolation, message);
}

}  // namespace

FeatureDataset FeatureDataset::Create(
    Matrix features, std::vector<std::vector<std::uint32_t>> positives,
    std::uint64_t num_classes, std::uint64_t max_positives) {
  if (static_cast<Eigen::Index>(positives.size()) != features.rows()) {
    Violation("dataset has " + std::to_string(features.rows()) +
              " feature rows but " + std::to_string(positives.size()) +
              " label rows");
  }
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> indices;
  for (auto& row : positives) {
    std::sort(row.begin(), row.end());
    indices.insert(indices.end(), row.begin(), row.end());
    if (indices.size() > std::numeric_limits<std::uint32_t>::max()) {
      Violation("too many positive labels for 32-bit offsets");
    }
    offsets.push_back(static_cast<std::uint32_t>(indices.size()));
  }
  return FromCsr(std::move(features), std::move(offsets), std::move(indices),
                 num_classes, max_positives);
}

FeatureDataset FeatureDataset::FromCsr(Matrix features,
                                       std::vector<std::uint32_t> offsets,
                                       std::vector<std::uint32_t> indices,
                                       std::uint64_t num_classes,
                                       std::uint64_t max_positives) {
  FeatureDataset ds;
  ds.features_ = std::move(features);
  ds.offsets_ = std::move(offsets);
  ds.indices_ = std::move(indices);
  ds.num_classes_ = num_classes;
  ds.max_positives_ = max_positives;
  ds.Validate();
  return ds;
}

void FeatureDataset::Validate() const {
  if (features_.rows() < 1) Violation("dataset must have n >= 1 examples");
  if (features_.cols() < 1) Violation("dataset must have d >= 1 features");
  if (num_classes_ < 1) Violation("dataset must have m >= 1 classes");
  CheckFinite(features_, "dataset features");
  if (static_cast<Eigen::Index>(offsets_.size()) != features_.rows() + 1) {
    Violation("label offsets must have n + 1 entries");
  }
  if (offsets_.front() != 0 || offsets_.back() != indices_.size()) {
    Violation("label offsets must start at 0 and end at the index count");
  }
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    if (offsets_[i + 1] < offsets_[i]) {
      Violation("label offsets decrease at row " + std::to_string(i));
    }
    const std::uint64_t count = offsets_[i + 1] - offsets_[i];
    if (count > max_positives_) {
      Violation("row " + std::to_string(i) + " has " + std::to_string(count) +
                " positives, more than k=" + std::to_string(max_positives_));
    }
    for (std::uint32_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
      if (indices_[p] >= num_classes_) {
        Violation("row " + std::to_string(i) + " has class " +
                  std::to_string(indices_[p]) + " >= m=" +
                  std::to_string(num_classes_));
      }
      if (p > offsets_[i] && indices_[p] <= indices_[p - 1]) {
        Violation("row " + std::to_string(i) +
                  " has duplicate or unsorted class ids");
      }
    }
  }
}

std::span<const std::uint32_t> FeatureDataset::positives(
    Eigen::Index i) const {
  return std::span<const std::uint32_t>(indices_.data() + offsets_[i],
                                        offsets_[i + 1] - offsets_[i]);
}

bool FeatureDataset::IsPositive(Eigen::Index i, std::uint64_t j) const {
  auto row = positives(i);
  return std::binary_search(row.begin(), row.end(), j);
}

Matrix FeatureDataset::DenseLabels() const {
  Matrix y = Matrix::Zero(num_examples(), static_cast<Eigen::Index>(num_classes_));
  for (Eigen::Index i = 0; i < num_examples(); ++i) {
    for (std::uint32_t j : positives(i)) y(i, j) = 1.0;
  }
  return y;
}

FeatureDataset FeatureDataset::WithFeatures(Matrix features) const {
  if (features.rows() != features_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "WithFeatures: row count must not change");
  }
  return FromCsr(std::move(features), offsets_, indices_, num_classes_,
                 max_positives_);
}

FeatureDataset FeatureDataset::Slice(Eigen::Index begin,
                                     Eigen::Index end) const {
  if (begin < 0 || end > num_examples() || begin >= end) {
    throw Error(ErrorCode::kInvalidArgument, "Slice: bad row range");
  }
  std::vector<std::uint32_t> offsets;
  offsets.reserve(end - begin + 1);
  const std::uint32_t first = offsets_[begin];
  for (Eigen::Index i = begin; i <= end; ++i) {
    offsets.push_back(offsets_[i] - first);
  }
  std::vector<std::uint32_t> indices(indices_.begin() + first,
                                     indices_.begin() + offsets_[end]);
  Matrix rows = features_.middleRows(begin, end - begin);
  return FromCsr(std::move(rows), std::move(offsets), std::move(indices),
                 num_classes_, max_positives_);
}

bool FeatureDataset::operator==(const FeatureDataset& other) const {
  return num_classes_ == other.num_classes_ &&
         max_positives_ == other.max_positives_ &&
         offsets_ == other.offsets_ && indices_ == other.indices_ &&
         features_.rows() == other.features_.rows() &&
         features_.cols() == other.features_.cols() &&
         features_ == other.features_;
}

WeightMatrix WeightMatrix::Zeros(Eigen::Index m, Eigen::Index d) {
  return WeightMatrix{Matrix::Zero(m, d), std::nullopt};
}

Matrix WeightMatrix::Logits(const Matrix& features) const {
  if (features.cols() != theta.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Logits: features have " + std::to_string(features.cols()) +
                    " columns, weights expect " +
                    std::to_string(theta.cols()));
  }
  Matrix z = features * theta.transpose();
  if (bias) z.rowwise() += bias->transpose();
  return z;
}

}  // namespace dplinear
