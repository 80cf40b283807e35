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

#ifndef DMMD_DMMD_ITERATIVE_HPP_
#define DMMD_DMMD_ITERATIVE_HPP_

// Iterative variant that also re-optimizes the joint bases M and N,
// minimizing sum_k ||X_k - M~_k M~_k^T X_k N~_k N~_k^T||_F^2 over
// M, N, R_k and S_k by block-coordinate descent.

#include <array>
#include <utility>
#include <vector>

#include "dmmd/signal_solver.hpp"

namespace dmmd {

struct DmmdIConfig {
  int outer_t_max = 100;
  // Stop when max_k |L_k(t) - L_k(t-1)| < outer_epsilon * max_k ||X_k||_F^2.
  double outer_epsilon = 1e-8;
  // Inner alternating pass run after each joint update.
  SolverConfig inner{.t_max = 50};
  // Solve that produces the starting point from (M0, N0).
  SolverConfig initial{};

  void validate() const;
};

// Joint column basis minimizing the summed objective with R_k, N~_k fixed:
// first r_c left singular vectors of
//   Y = [(I - R_1 R_1^T) X_1 N~_1 N~_1^T, (I - R_2 R_2^T) X_2 N~_2 N~_2^T].
// Throws DegeneracyError if rank(Y) < r_c.
OrthonormalBasis update_joint_column(
    const Matrix& x1, const Matrix& x2,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& r_pairs,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& n_full_pairs, Index r_c);

// Transposed mirror: first r_r left singular vectors of
//   Z = [(I - S_1 S_1^T) X_1^T M~_1 M~_1^T, (I - S_2 S_2^T) X_2^T M~_2 M~_2^T].
OrthonormalBasis update_joint_row(
    const Matrix& x1, const Matrix& x2,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& s_pairs,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& m_full_pairs, Index r_r);

struct DmmdIResult {
  DmmdDecomposition decomposition;
  std::array<ConstrainedFit, 2> fits;
  // Summed objective L_1 + L_2; entry 0 is the starting point.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// The outer state starts at the alternating-solver fit for (m0, n0) and is
// then improved by M-update, N-update and a warm-started inner solve per
// outer iteration. A step that would raise the summed objective is rejected
// and ends the loop, so the trace is non-increasing.
DmmdIResult solve_dmmd_i(const Matrix& x1, const Matrix& x2, const RankProfile& ranks,
                         const OrthonormalBasis& m0, const OrthonormalBasis& n0,
                         const DmmdIConfig& cfg);

}  // namespace dmmd

#endif  // DMMD_DMMD_ITERATIVE_HPP_
