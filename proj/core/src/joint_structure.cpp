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

#include "dmmd/joint_structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmmd/errors.hpp"

namespace dmmd {

PrincipalAngleSet principal_angles(const OrthonormalBasis& u,
                                   const OrthonormalBasis& v) {
  if (u.empty() || v.empty()) {
    throw ParameterError("principal_angles: empty basis");
  }
  if (u.ambient_dim() != v.ambient_dim()) {
    throw ParameterError("principal_angles: ambient dimensions differ");
  }
  const Index h = std::min(u.size(), v.size());
  const Matrix cross = u.vectors().transpose() * v.vectors();
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);

  PrincipalAngleSet out;
  out.cosines = svd.singularValues().head(h).cwiseMin(1.0).cwiseMax(0.0);
  out.left_vectors = OrthonormalBasis::from_orthonormal(
      u.vectors() * svd.matrixU().leftCols(h));
  out.right_vectors = OrthonormalBasis::from_orthonormal(
      v.vectors() * svd.matrixV().leftCols(h));

  // Sines of the h angles: singular values of the residual of the smaller
  // subspace against the larger one, taken in ascending order.
  const OrthonormalBasis& small = v.size() <= u.size() ? v : u;
  const OrthonormalBasis& large = v.size() <= u.size() ? u : v;
  const Matrix residual = small.vectors() -
                          large.vectors() * (large.vectors().transpose() * small.vectors());
  Vector sines = Eigen::JacobiSVD<Matrix>(residual).singularValues();
  std::sort(sines.data(), sines.data() + sines.size());

  out.angles.resize(h);
  for (Index i = 0; i < h; ++i) {
    const double c = out.cosines(i);
    out.angles(i) = c * c >= 0.5 ? std::asin(std::min(1.0, sines(i)))
                                 : std::acos(c);
  }
  // The two formulas meet at 45 degrees; keep the sequence monotone.
  for (Index i = 1; i < h; ++i) {
    out.angles(i) = std::max(out.angles(i), out.angles(i - 1));
  }
  return out;
}

JointBasisEstimate estimate_joint_basis(const Matrix& z1, const Matrix& z2,
                                        Index r1, Index r2, Side direction,
                                        std::optional<Index> override_rank) {
  if (z1.rows() != z2.rows() || z1.cols() != z2.cols()) {
    throw ParameterError("estimate_joint_basis: views have different shapes");
  }
  const Index m = std::min(z1.rows(), z1.cols());
  if (r1 < 1 || r2 < 1 || r1 > m || r2 > m) {
    throw ParameterError("estimate_joint_basis: rank outside [1, min(n, p)]");
  }
  if (override_rank && (*override_rank < 0 || *override_rank > std::min(r1, r2))) {
    throw ParameterError("estimate_joint_basis: joint rank exceeds min(r1, r2)");
  }
  if (z1.isZero(0.0) || z2.isZero(0.0)) {
    throw InputError("estimate_joint_basis: proxy signal is zero");
  }

  SvdResult s1 = truncated_svd(z1, r1);
  SvdResult s2 = truncated_svd(z2, r2);
  const OrthonormalBasis& b1 = direction == Side::kColumns ? s1.left : s1.right;
  const OrthonormalBasis& b2 = direction == Side::kColumns ? s2.left : s2.right;

  JointBasisEstimate out;
  out.angles = principal_angles(b1, b2);
  if (override_rank) {
    out.rank = *override_rank;
  } else {
    const Vector& a = out.angles.angles;
    out.selection = estimate_joint_rank(std::span<const double>(a.data(), a.size()));
    out.rank = out.selection->rank;
  }

  const Index dim = b1.ambient_dim();
  if (out.rank == 0) {
    out.basis = OrthonormalBasis(dim);
    return out;
  }
  const Matrix averaged =
      0.5 * (out.angles.left_vectors.vectors().leftCols(out.rank) +
             out.angles.right_vectors.vectors().leftCols(out.rank));
  std::vector<Index> dropped;
  out.basis = gram_schmidt(averaged, &dropped);
  if (!dropped.empty()) {
    throw DegeneracyError("estimate_joint_basis: averaged principal vector " +
                          std::to_string(dropped.front() + 1) +
                          " is dependent on the preceding ones");
  }
  return out;
}

OrthonormalBasis sum_pca_joint_basis(const std::vector<Matrix>& views,
                                     Index r_joint, Side direction) {
  if (views.size() < 2) {
    throw ParameterError("sum_pca_joint_basis: need at least two views");
  }
  const Index dim = direction == Side::kColumns ? views[0].rows() : views[0].cols();
  Index width = 0;
  for (const Matrix& v : views) {
    require_finite(v, "sum_pca_joint_basis");
    const Index d = direction == Side::kColumns ? v.rows() : v.cols();
    if (d != dim) {
      throw ParameterError("sum_pca_joint_basis: views are not matched");
    }
    width += direction == Side::kColumns ? v.cols() : v.rows();
  }
  if (r_joint < 1 || r_joint > std::min(dim, width)) {
    throw ParameterError("sum_pca_joint_basis: r_joint out of range");
  }
  Matrix stacked(dim, width);
  Index offset = 0;
  for (const Matrix& v : views) {
    if (direction == Side::kColumns) {
      stacked.middleCols(offset, v.cols()) = v;
      offset += v.cols();
    } else {
      stacked.middleCols(offset, v.rows()) = v.transpose();
      offset += v.rows();
    }
  }
  return truncated_svd(stacked, r_joint).left;
}

}  // namespace dmmd
