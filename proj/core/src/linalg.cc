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

#include "dplinear/linalg.h"

#include <limits>
#include <sstream>
#include <string>

#include "dplinear/error.h"

namespace dplinear {
namespace {

std::string Shape(Eigen::Index rows, Eigen::Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

void RequireSquare(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": expected a square matrix, got " +
                    Shape(a.rows(), a.cols()));
  }
}

}  // namespace

void CheckFinite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFinite,
                std::string(what) + ": matrix has non-finite entries");
  }
}

void CheckFinite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::kNonFinite,
                std::string(what) + ": vector has non-finite entries");
  }
}

Matrix GramUpdate(const Matrix& acc, const Vector& x, double weight) {
  RequireSquare(acc, "GramUpdate");
  if (acc.rows() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "GramUpdate: accumulator is " + Shape(acc.rows(), acc.cols()) +
                    " but x has length " + std::to_string(x.size()));
  }
  // Elementwise so that (i, j) and (j, i) round identically.
  Matrix out = acc;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      out(i, j) += weight * (x(i) * x(j));
    }
  }
  return out;
}

Matrix WeightedGram(const Matrix& rows, const Vector& weights) {
  if (weights.size() != 0 && weights.size() != rows.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "WeightedGram: " + std::to_string(weights.size()) +
                    " weights for " + std::to_string(rows.rows()) + " rows");
  }
  // X^T diag(w) X as a single product. Eigen's single-threaded GEMM walks the
  // reduction in a fixed blocked order, so the result is reproducible.
  if (weights.size() == 0) {
    Matrix g = rows.transpose() * rows;
    return g;
  }
  Matrix scaled = weights.asDiagonal() * rows;
  Matrix g = rows.transpose() * scaled;
  return g;
}

Matrix Symmetrize(const Matrix& a) {
  RequireSquare(a, "Symmetrize");
  Matrix out = 0.5 * (a + a.transpose());
  return out;
}

LuFactorization::LuFactorization(const Matrix& a)
    : dim_(static_cast<std::size_t>(a.rows())), rcond_(0.0) {
  RequireSquare(a, "LuFactorization");
  CheckFinite(a, "LuFactorization");
  if (a.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "LuFactorization: empty matrix");
  }
  lu_.compute(a);
  rcond_ = lu_.rcond();
  if (!(rcond_ > std::numeric_limits<double>::epsilon())) {
    std::ostringstream os;
    os << "LuFactorization: matrix is singular to working precision "
       << "(rcond estimate " << rcond_ << ", dim " << dim_
       << ")";
    throw Error(ErrorCode::kSingularMatrix, os.str());
  }
}

Vector LuFactorization::Solve(const Vector& b) const {
  if (static_cast<std::size_t>(b.size()) != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "LuFactorization::Solve: rhs length " +
                    std::to_string(b.size()) + " for dim " +
                    std::to_string(dim_));
  }
  Vector x = lu_.solve(b);
  return x;
}

Matrix LuFactorization::Solve(const Matrix& b) const {
  if (static_cast<std::size_t>(b.rows()) != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "LuFactorization::Solve: rhs is " + Shape(b.rows(), b.cols()) +
                    " for dim " + std::to_string(dim_));
  }
  Matrix x = lu_.solve(Eigen::MatrixXd(b));
  return x;
}

Vector SolveLinear(const Matrix& a, const Vector& b) {
  return LuFactorization(a).Solve(b);
}

Matrix SolveLinear(const Matrix& a, const Matrix& b) {
  return LuFactorization(a).Solve(b);
}

}  // namespace dplinear
