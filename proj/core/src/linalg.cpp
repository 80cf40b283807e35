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

#include "dmmd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmmd/errors.hpp"

namespace dmmd {

void require_finite(const Matrix& x, const char* what) {
  if (x.rows() < 1 || x.cols() < 1) {
    throw InputError(std::string(what) + ": matrix is empty");
  }
  if (!x.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

OrthonormalBasis::OrthonormalBasis(Index ambient_dim)
    : vectors_(ambient_dim, 0) {}

OrthonormalBasis OrthonormalBasis::from_columns(Matrix vectors, double tol) {
  if (vectors.cols() > vectors.rows()) {
    throw InputError("orthonormal basis has more vectors than its dimension");
  }
  if (vectors.cols() > 0) {
    const Matrix gram = vectors.transpose() * vectors;
    const double dev =
        (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (!(dev <= tol)) {
      throw InputError("columns are not orthonormal (max |V^T V - I| = " +
                       std::to_string(dev) + ")");
    }
  }
  return OrthonormalBasis(std::move(vectors), true);
}

OrthonormalBasis OrthonormalBasis::from_orthonormal(Matrix vectors) {
  return OrthonormalBasis(std::move(vectors), true);
}

OrthonormalBasis OrthonormalBasis::identity(Index ambient_dim) {
  return OrthonormalBasis(Matrix::Identity(ambient_dim, ambient_dim), true);
}

OrthonormalBasis OrthonormalBasis::leading(Index k) const {
  if (k < 0 || k > size()) {
    throw ParameterError("leading(): k out of range");
  }
  return OrthonormalBasis(vectors_.leftCols(k), true);
}

OrthonormalBasis OrthonormalBasis::append(const OrthonormalBasis& other) const {
  if (other.ambient_dim() != ambient_dim()) {
    throw ParameterError("append(): ambient dimensions differ");
  }
  Matrix joined(ambient_dim(), size() + other.size());
  joined << vectors_, other.vectors_;
  if (size() > 0 && other.size() > 0) {
    const double cross = (vectors_.transpose() * other.vectors_).cwiseAbs().maxCoeff();
    if (cross > 1e-8) {
      throw ParameterError("append(): bases are not mutually orthogonal");
    }
  }
  return OrthonormalBasis(std::move(joined), true);
}

Matrix OrthonormalBasis::projector() const {
  return vectors_ * vectors_.transpose();
}

Matrix SvdResult::reconstruct() const {
  return left.vectors() * singular_values.asDiagonal() *
         right.vectors().transpose();
}

namespace {

// Flip each pair so the left vector's largest-magnitude entry is positive.
void fix_signs(Matrix& u, Matrix& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index arg = 0;
    u.col(j).cwiseAbs().maxCoeff(&arg);
    if (u(arg, j) < 0.0) {
      u.col(j) = -u.col(j);
      v.col(j) = -v.col(j);
    }
  }
}

template <typename Svd>
SvdFactors collect(const Svd& svd, bool want_u, bool want_v) {
  SvdFactors out;
  out.s = svd.singularValues();
  if (want_u) out.u = svd.matrixU();
  if (want_v) out.v = svd.matrixV();
  return out;
}

bool all_finite(const SvdFactors& f) {
  return f.s.allFinite() && f.u.allFinite() && f.v.allFinite();
}

SvdResult svd_impl(const Matrix& x, Index k) {
  SvdFactors f = svd_factors(x, true, true);
  const Vector& s = f.s;
  Matrix u = f.u.leftCols(k);
  Matrix v = f.v.leftCols(k);
  fix_signs(u, v);

  SvdResult out;
  out.singular_values = s.head(k);
  if (k < s.size() && k > 0) {
    out.boundary_tie = (s(k - 1) - s(k)) < 1e-10 * s(0) && s(0) > 0.0;
  }
  out.left = OrthonormalBasis::from_orthonormal(std::move(u));
  out.right = OrthonormalBasis::from_orthonormal(std::move(v));
  return out;
}

}  // namespace

SvdFactors svd_factors(const Matrix& x, bool want_u, bool want_v) {
  const unsigned options =
      (want_u ? static_cast<unsigned>(Eigen::ComputeThinU) : 0u) |
      (want_v ? static_cast<unsigned>(Eigen::ComputeThinV) : 0u);
  SvdFactors f = collect(Eigen::BDCSVD<Matrix>(x, options), want_u, want_v);
  if (all_finite(f)) return f;
  return collect(Eigen::JacobiSVD<Matrix>(x, options), want_u, want_v);
}

SvdResult truncated_svd(const Matrix& x, Index k) {
  require_finite(x, "truncated_svd");
  const Index m = std::min(x.rows(), x.cols());
  if (k < 1 || k > m) {
    throw ParameterError("truncated_svd: k = " + std::to_string(k) +
                         " outside [1, " + std::to_string(m) + "]");
  }
  return svd_impl(x, k);
}

SvdResult thin_svd(const Matrix& x) {
  require_finite(x, "thin_svd");
  return svd_impl(x, std::min(x.rows(), x.cols()));
}

Vector singular_values(const Matrix& x) {
  require_finite(x, "singular_values");
  return svd_factors(x, false, false).s;
}

OrthonormalBasis leading_singular_vectors(const Matrix& x, Index k, Side side) {
  const Index dim = side == Side::kColumns ? x.rows() : x.cols();
  if (k == 0) return OrthonormalBasis(dim);
  if (k < 0 || k > std::min(x.rows(), x.cols())) {
    throw ParameterError("leading_singular_vectors: k out of range");
  }
  SvdResult svd = svd_impl(x, k);
  return side == Side::kColumns ? std::move(svd.left) : std::move(svd.right);
}

Matrix project_onto(const OrthonormalBasis& basis, const Matrix& x, Side side) {
  const Matrix& v = basis.vectors();
  if (side == Side::kColumns) {
    if (basis.ambient_dim() != x.rows()) {
      throw ParameterError("project_onto: basis dimension != rows of X");
    }
    if (basis.empty()) return Matrix::Zero(x.rows(), x.cols());
    return v * (v.transpose() * x);
  }
  if (basis.ambient_dim() != x.cols()) {
    throw ParameterError("project_onto: basis dimension != cols of X");
  }
  if (basis.empty()) return Matrix::Zero(x.rows(), x.cols());
  return (x * v) * v.transpose();
}

Matrix project_out(const OrthonormalBasis& basis, const Matrix& x, Side side) {
  return x - project_onto(basis, x, side);
}

OrthonormalBasis gram_schmidt(const Matrix& vectors, std::vector<Index>* dropped) {
  const Index n = vectors.rows();
  double max_norm = 0.0;
  for (Index j = 0; j < vectors.cols(); ++j) {
    max_norm = std::max(max_norm, vectors.col(j).norm());
  }
  const double cutoff = 1e-10 * max_norm;

  Matrix q(n, std::min(n, vectors.cols()));
  Index kept = 0;
  for (Index j = 0; j < vectors.cols(); ++j) {
    Vector w = vectors.col(j);
    // Two MGS passes keep the result orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < kept; ++i) {
        w -= q.col(i).dot(w) * q.col(i);
      }
    }
    const double norm = w.norm();
    if (max_norm == 0.0 || norm < cutoff || kept == n) {
      if (dropped != nullptr) dropped->push_back(j);
      continue;
    }
    q.col(kept++) = w / norm;
  }
  return OrthonormalBasis::from_orthonormal(q.leftCols(kept));
}

Index numerical_rank(const Matrix& x, double rel_tol) {
  if (x.size() == 0) return 0;
  const Vector s = singular_values(x);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = rel_tol * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

double projector_distance(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw ParameterError("projector_distance: ambient dimensions differ");
  }
  return (a.projector() - b.projector()).cwiseAbs().maxCoeff();
}

}  // namespace dmmd
