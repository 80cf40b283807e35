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

#ifndef DMMD_JOINT_STRUCTURE_HPP_
#define DMMD_JOINT_STRUCTURE_HPP_

#include <optional>
#include <vector>

#include "dmmd/linalg.hpp"
#include "dmmd/rank_estimation.hpp"

namespace dmmd {

struct PrincipalAngleSet {
  Vector angles;  // radians, non-decreasing, length min(dim u, dim v)
  Vector cosines; // singular values of U^T V, non-increasing
  OrthonormalBasis left_vectors;   // U * (left factor), first h columns
  OrthonormalBasis right_vectors;  // V * (right factor), first h columns
};

// Principal angles and vectors between span(u) and span(v). Cosines come
// from the SVD of U^T V; angles below 45 degrees are recomputed from the
// sines of the residual (I - U U^T) V, which is accurate near zero where
// arccos is not.
PrincipalAngleSet principal_angles(const OrthonormalBasis& u,
                                   const OrthonormalBasis& v);

struct JointBasisEstimate {
  OrthonormalBasis basis;  // empty when rank == 0
  Index rank = 0;
  PrincipalAngleSet angles;
  // Present when the rank was selected by profile likelihood.
  std::optional<JointRankEstimate> selection;
};

// Joint column (Side::kColumns, subspace of R^n) or row (Side::kRows,
// subspace of R^p) structure of two proxy signals. The rank-r_k singular
// subspaces of z1, z2 are compared by principal angles; the joint rank is
// override_rank when given, otherwise the profile-likelihood cut of the
// bracketed angles. The leading principal-vector pairs are averaged with
// weight 1/2 and orthonormalized.
//
// Throws DegeneracyError if an averaged vector is lost in Gram-Schmidt.
JointBasisEstimate estimate_joint_basis(const Matrix& z1, const Matrix& z2,
                                        Index r1, Index r2, Side direction,
                                        std::optional<Index> override_rank = {});

// First r_joint left singular vectors of [X_1, ..., X_K] (kColumns) or of
// [X_1^T, ..., X_K^T] (kRows). Joint rank must be supplied for K > 2.
OrthonormalBasis sum_pca_joint_basis(const std::vector<Matrix>& views,
                                     Index r_joint, Side direction);

}  // namespace dmmd

#endif  // DMMD_JOINT_STRUCTURE_HPP_
