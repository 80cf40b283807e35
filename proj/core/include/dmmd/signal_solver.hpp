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

#ifndef DMMD_SIGNAL_SOLVER_HPP_
#define DMMD_SIGNAL_SOLVER_HPP_

// Signal estimation with given joint structure: the closed forms for a
// single column or row constraint, the fixed-spaces projection, and the
// alternating solver for both constraints at once.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmmd/linalg.hpp"

namespace dmmd {

// Total ranks r1, r2 of the two signals and the joint column (r_c) and row
// (r_r) ranks.
struct RankProfile {
  Index r1 = 0;
  Index r2 = 0;
  Index r_c = 0;
  Index r_r = 0;

  Index total(int view) const { return view == 0 ? r1 : r2; }
  // Throws ParameterError describing the first violated constraint for data
  // of shape n x p.
  void validate(Index n, Index p) const;

  friend bool operator==(const RankProfile&, const RankProfile&) = default;
};

struct SolverConfig {
  int t_max = 1000;
  // Stop when |L(t) - L(t-1)| < epsilon * ||X||_F^2.
  double epsilon = 1e-9;
  bool warn_on_ties = true;
  // Extra runs from random orthonormal R(0); the lowest objective wins.
  int restarts = 0;
  std::uint64_t restart_seed = 0;

  void validate() const;
};

struct ConstrainedFit {
  Matrix a_star;
  OrthonormalBasis col_basis;  // [M, R]; empty for a row-only fit
  OrthonormalBasis row_basis;  // [N, S]; empty for a column-only fit
  // Objective after each completed column/row update pair, starting at t = 1.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;

  double objective() const {
    return objective_trace.empty() ? 0.0 : objective_trace.back();
  }
};

// Signal with both constraints enforced: the per-view estimate plus its
// column-direction and row-direction splits.
struct ViewParts {
  Matrix a;
  Matrix j_col;
  Matrix i_col;
  Matrix j_row;
  Matrix i_row;
};

struct DmmdDecomposition {
  std::array<ViewParts, 2> views;
  RankProfile ranks;
  OrthonormalBasis m_basis;
  OrthonormalBasis n_basis;
};

// Closest rank-r matrix whose column space contains span(m):
// M M^T X + R R^T X, R the leading r - r_c left singular vectors of
// (I - M M^T) X. Throws PreconditionError if M M^T X loses rank.
ConstrainedFit solve_column_constrained(const Matrix& x, const OrthonormalBasis& m,
                                        Index r, bool warn_on_ties = true);

// Mirror of solve_column_constrained for a row-space constraint:
// X N N^T + X S S^T, S from X (I - N N^T).
ConstrainedFit solve_row_constrained(const Matrix& x, const OrthonormalBasis& n,
                                     Index r, bool warn_on_ties = true);

struct FixedSpaceFit {
  Matrix a;
  // numerical_rank(a) < min(|m_full|, |n_full|).
  bool rank_deficient = false;
};

// M~ M~^T X N~ N~^T, the best approximation with exactly prescribed column
// and row spaces.
FixedSpaceFit best_fixed_spaces(const Matrix& x, const OrthonormalBasis& m_full,
                                const OrthonormalBasis& n_full);

// ||X - M~ M~^T X N~ N~^T||_F^2 for orthonormal m_full, n_full.
double fixed_space_objective(const Matrix& x, const OrthonormalBasis& m_full,
                             const OrthonormalBasis& n_full);

// Alternating solver for one view: rank-r signal whose column space contains
// span(m) and whose row space contains span(n). Starts from the column-only
// optimum's basis unless `initial_r` is supplied (must be orthonormal and
// orthogonal to m, with r - |m| columns). Throws DegeneracyError when an
// intermediate matrix loses the rank the updates require.
ConstrainedFit solve_dmmd_view(const Matrix& x, Index r, const OrthonormalBasis& m,
                               const OrthonormalBasis& n, const SolverConfig& cfg,
                               const std::optional<OrthonormalBasis>& initial_r = {});

// Both views with shared joint bases m (r_c vectors) and n (r_r vectors).
std::pair<ConstrainedFit, ConstrainedFit> solve_dmmd_signals(
    const Matrix& x1, const Matrix& x2, const RankProfile& ranks,
    const OrthonormalBasis& m, const OrthonormalBasis& n, const SolverConfig& cfg);

// Joint/individual parts in both directions:
// J_c = M M^T A, I_c = A - J_c, J_r = A N N^T, I_r = A - J_r.
DmmdDecomposition extract_parts(const ConstrainedFit& fit1, const ConstrainedFit& fit2,
                                const OrthonormalBasis& m, const OrthonormalBasis& n,
                                const RankProfile& ranks);

}  // namespace dmmd

#endif  // DMMD_SIGNAL_SOLVER_HPP_
