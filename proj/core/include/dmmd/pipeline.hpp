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

#ifndef DMMD_PIPELINE_HPP_
#define DMMD_PIPELINE_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dmmd/dmmd_iterative.hpp"
#include "dmmd/joint_structure.hpp"
#include "dmmd/rank_estimation.hpp"
#include "dmmd/signal_solver.hpp"

namespace dmmd {

struct RankOverrides {
  std::optional<Index> r1;
  std::optional<Index> r2;
  std::optional<Index> r_c;
  std::optional<Index> r_r;

  static RankOverrides all(const RankProfile& ranks) {
    return {ranks.r1, ranks.r2, ranks.r_c, ranks.r_r};
  }
};

enum class Variant { kPlain, kIterative };

struct PipelineConfig {
  Variant variant = Variant::kPlain;
  SolverConfig solver;
  // Used when variant is kIterative; its `initial` field is replaced by
  // `solver` so both variants start from the same fit.
  DmmdIConfig iterative;
};

struct PipelineResult {
  DmmdDecomposition decomposition;
  RankProfile ranks;
  // Present for each view whose total rank was estimated.
  std::array<std::optional<TotalRankEstimate>, 2> total_rank;
  JointBasisEstimate column_joint;  // over R^n
  JointBasisEstimate row_joint;     // over R^p
  std::array<ConstrainedFit, 2> fits;
  // Summed objective per outer iteration (iterative variant only).
  std::vector<double> outer_trace;
  int outer_iterations = 0;
  std::vector<std::string> warnings;
};

PipelineResult dmmd(const Matrix& x1, const Matrix& x2, const RankOverrides& overrides = {},
                    const PipelineConfig& cfg = {});

struct VarianceExplained {
  double joint_col = 0.0;
  double individual_col = 0.0;
  double joint_row = 0.0;
  double individual_row = 0.0;
  double total_signal = 0.0;
};

// Percentages 100 * ||P||_F^2 / ||X||_F^2.
VarianceExplained variance_explained(const Matrix& x, const ViewParts& parts);

// v / v[anchor]; throws DegeneracyError when |v[anchor]| <= 1e-10.
Vector normalize_to_anchor(const Vector& v, Index anchor);

// Each basis vector normalized to its anchor coefficient, one column per vector.
Matrix normalized_basis_report(const OrthonormalBasis& basis, Index anchor);

// Alternately standardizes rows then columns to mean 0 and variance 1 (divisor
// equal to the number of entries) until both hold within `tol`.
Matrix double_standardize(const Matrix& x, double tol = 1e-8, int max_sweeps = 100);

}  // namespace dmmd

#endif  // DMMD_PIPELINE_HPP_
