// Copyright 2026 The DMMD Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DMMD_LINALG_HPP_
#define DMMD_LINALG_HPP_

// Dense-matrix primitives shared by every stage of the decomposition:
// thin/truncated SVD with a fixed sign convention, orthonormal bases and their
// projectors, modified Gram-Schmidt and numerical rank.

#include <Eigen/Dense>
#include <vector>

namespace dmmd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Which side of a matrix a subspace acts on. kColumns: a subspace of R^rows,
// applied as P * X. kRows: a subspace of R^cols, applied as X * P.
enum class Side { kColumns, kRows };

// Throws InputError naming `what` if `x` is empty or has a NaN/Inf entry.
void require_finite(const Matrix& x, const char* what);

// Matrix whose columns are orthonormal. The invariant is checked on
// construction from arbitrary columns; an empty basis (zero vectors) spans
// the zero subspace and still carries its ambient dimension.
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;
  explicit OrthonormalBasis(Index ambient_dim);

  // Validates V^T V = I within `tol` elementwise; throws InputError otherwise.
  static OrthonormalBasis from_columns(Matrix vectors, double tol = 1e-10);
  // Trusted construction for columns produced by an orthogonal factorization.
  static OrthonormalBasis from_orthonormal(Matrix vectors);
  static OrthonormalBasis identity(Index ambient_dim);

  Index ambient_dim() const { return vectors_.rows(); }
  Index size() const { return vectors_.cols(); }
  bool empty() const { return vectors_.cols() == 0; }
  const Matrix& vectors() const { return vectors_; }

  // First `k` vectors.
  OrthonormalBasis leading(Index k) const;
  // [this, other]; throws ParameterError if the concatenation is not
  // orthonormal within 1e-8.
  OrthonormalBasis append(const OrthonormalBasis& other) const;
  // V V^T.
  Matrix projector() const;

 private:
  explicit OrthonormalBasis(Matrix vectors, bool) : vectors_(std::move(vectors)) {}
  Matrix vectors_;
};

struct SvdResult {
  OrthonormalBasis left;
  Vector singular_values;  // non-increasing, non-negative
  OrthonormalBasis right;
  // Set when the last retained and first discarded singular values differ by
  // less than 1e-10 * s_max; the truncation is then not unique.
  bool boundary_tie = false;

  Matrix reconstruct() const;
};

// Raw thin SVD factors, unsigned and untruncated. Divide-and-conquer is tried
// first; one-sided Jacobi is used if it returns non-finite values.
struct SvdFactors {
  Matrix u;  // empty unless requested
  Vector s;
  Matrix v;  // empty unless requested
};
SvdFactors svd_factors(const Matrix& x, bool want_u, bool want_v);

// Top-k singular triplets, 1 <= k <= min(rows, cols). Each pair is signed so
// the largest-magnitude entry of the left vector is positive.
SvdResult truncated_svd(const Matrix& x, Index k);

// All min(rows, cols) singular triplets, same sign convention.
SvdResult thin_svd(const Matrix& x);

// Singular values only, non-increasing.
Vector singular_values(const Matrix& x);

// First k left (or right) singular vectors; k = 0 yields an empty basis.
// Used where a closed form asks for "the first r - r_c singular vectors".
OrthonormalBasis leading_singular_vectors(const Matrix& x, Index k, Side side);

// M M^T X (kColumns) or X N N^T (kRows). An empty basis projects to zero.
Matrix project_onto(const OrthonormalBasis& basis, const Matrix& x, Side side);

// (I - M M^T) X (kColumns) or X (I - N N^T) (kRows).
Matrix project_out(const OrthonormalBasis& basis, const Matrix& x, Side side);

// Modified Gram-Schmidt with one reorthogonalization pass. Columns whose
// residual norm falls below 1e-10 * (largest input column norm) are dropped;
// their input indices are appended to `dropped` when given.
OrthonormalBasis gram_schmidt(const Matrix& vectors,
                              std::vector<Index>* dropped = nullptr);

// Number of singular values greater than rel_tol * s_max; 0 for a zero matrix.
Index numerical_rank(const Matrix& x, double rel_tol = 1e-10);

// max |P_a - P_b| elementwise; the two bases must share an ambient dimension.
double projector_distance(const OrthonormalBasis& a, const OrthonormalBasis& b);

}  // namespace dmmd

#endif  // DMMD_LINALG_HPP_
