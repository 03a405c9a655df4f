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

// Dense 64-bit linear algebra shared by the solvers. Storage and kernels are
// Eigen; this header fixes the types and the small set of operations the
// rest of the library is allowed to depend on.

#ifndef DPLINEAR_LINALG_H_
#define DPLINEAR_LINALG_H_

#include <Eigen/Dense>
#include <cstddef>
#include <string_view>

namespace dplinear {

// Row-major so that one example (one row of a feature matrix) is contiguous.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Throws Error(kNonFinite) naming `what` if any entry is NaN or infinite.
void CheckFinite(const Matrix& m, std::string_view what);
void CheckFinite(const Vector& v, std::string_view what);

// acc + weight * x x^T.
Matrix GramUpdate(const Matrix& acc, const Vector& x, double weight);

// sum_i w_i x_i x_i^T over the rows of `rows`, accumulated in row order.
// `weights` may be empty, meaning all ones.
Matrix WeightedGram(const Matrix& rows, const Vector& weights = Vector());

// (a + a^T) / 2.
Matrix Symmetrize(const Matrix& a);

// Partial-pivoting LU of a square matrix. Valid for non-symmetric input.
// Construction throws Error(kSingularMatrix) when the reciprocal condition
// estimate falls below machine epsilon; the message carries the estimate.
class LuFactorization {
 public:
  explicit LuFactorization(const Matrix& a);

  std::size_t dim() const { return dim_; }
  double rcond() const { return rcond_; }

  Vector Solve(const Vector& b) const;
  // Solves A X = B column by column.
  Matrix Solve(const Matrix& b) const;

 private:
  std::size_t dim_;
  double rcond_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

Vector SolveLinear(const Matrix& a, const Vector& b);
Matrix SolveLinear(const Matrix& a, const Matrix& b);

}  // namespace dplinear

#endif  // DPLINEAR_LINALG_H_
