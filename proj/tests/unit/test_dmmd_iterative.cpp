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

#include <gtest/gtest.h>

#include "dmmd/dmmd_iterative.hpp"
#include "dmmd/errors.hpp"
#include "dmmd/joint_structure.hpp"
#include "dmmd/simulation.hpp"
#include "oracles.hpp"

namespace dmmd {
namespace {

using oracle::TestRng;

double captured(const Matrix& m, const Matrix& x1, const Matrix& x2, const Matrix& r1,
                const Matrix& r2, const Matrix& n1, const Matrix& n2) {
  const auto part = [&](const Matrix& x, const Matrix& r, const Matrix& n) {
    const Matrix y = x * n;
    return (m.transpose() * (y - r * (r.transpose() * y))).squaredNorm();
  };
  return part(x1, r1, n1) + part(x2, r2, n2);
}

TEST(JointUpdate, ReducesToSumPcaWithoutIndividualParts) {
  TestRng rng(1);
  const Matrix x1 = rng.gaussian(9, 7), x2 = rng.gaussian(9, 7);
  const OrthonormalBasis m = update_joint_column(
      x1, x2, {OrthonormalBasis(9), OrthonormalBasis(9)},
      {OrthonormalBasis::identity(7), OrthonormalBasis::identity(7)}, 2);
  const OrthonormalBasis ref = sum_pca_joint_basis({x1, x2}, 2, Side::kColumns);
  EXPECT_LT(projector_distance(m, ref), 1e-10);
}

TEST(JointUpdate, NoiselessPlantedRecoversJointSpace) {
  const GroundTruth t = generate({40, 30, 6, 5, 2, 3, 1.0, 3});
  const RankProfile ranks{6, 5, 2, 3};
  const auto [f1, f2] = solve_dmmd_signals(t.a1, t.a2, ranks, t.m_true, t.n_true, {});
  const auto individual = [](const ConstrainedFit& f, Index joint) {
    return OrthonormalBasis::from_orthonormal(
        f.col_basis.vectors().rightCols(f.col_basis.size() - joint));
  };
  const OrthonormalBasis m = update_joint_column(
      t.a1, t.a2, {individual(f1, 2), individual(f2, 2)}, {f1.row_basis, f2.row_basis}, 2);
  EXPECT_LT(projector_distance(m, t.m_true), 1e-8);
}

TEST(JointUpdate, BeatsRandomCandidates) {
  TestRng rng(2);
  const Matrix x1 = rng.gaussian(10, 8), x2 = rng.gaussian(10, 8);
  const Matrix r1 = rng.orthonormal(10, 2), r2 = rng.orthonormal(10, 1);
  const Matrix n1 = rng.orthonormal(8, 4), n2 = rng.orthonormal(8, 3);
  const OrthonormalBasis m = update_joint_column(
      x1, x2,
      {OrthonormalBasis::from_columns(r1), OrthonormalBasis::from_columns(r2)},
      {OrthonormalBasis::from_columns(n1), OrthonormalBasis::from_columns(n2)}, 2);
  const double best = captured(m.vectors(), x1, x2, r1, r2, n1, n2);
  for (int i = 0; i < 500; ++i) {
    EXPECT_LE(captured(rng.orthonormal(10, 2), x1, x2, r1, r2, n1, n2), best + 1e-10);
  }
}

TEST(JointUpdate, RowIsTransposedMirror) {
  TestRng rng(3);
  const Matrix x1 = rng.gaussian(8, 10), x2 = rng.gaussian(8, 10);
  const auto s = std::make_pair(OrthonormalBasis::from_columns(rng.orthonormal(10, 2)),
                                OrthonormalBasis::from_columns(rng.orthonormal(10, 1)));
  const auto mf = std::make_pair(OrthonormalBasis::from_columns(rng.orthonormal(8, 4)),
                                 OrthonormalBasis::from_columns(rng.orthonormal(8, 3)));
  const OrthonormalBasis row = update_joint_row(x1, x2, s, mf, 2);
  const OrthonormalBasis col =
      update_joint_column(x1.transpose(), x2.transpose(), s, mf, 2);
  EXPECT_LT(projector_distance(row, col), 1e-12);
}

TEST(DmmdI, NoJointStructureMatchesDmmd) {
  TestRng rng(4);
  const Matrix x1 = rng.gaussian(12, 9), x2 = rng.gaussian(12, 9);
  const RankProfile ranks{3, 2, 0, 0};
  const DmmdIResult res =
      solve_dmmd_i(x1, x2, ranks, OrthonormalBasis(12), OrthonormalBasis(9), {});
  const auto [f1, f2] =
      solve_dmmd_signals(x1, x2, ranks, OrthonormalBasis(12), OrthonormalBasis(9), {});
  EXPECT_EQ(res.iterations, 0);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.fits[0].a_star, f1.a_star);
  EXPECT_EQ(res.fits[1].a_star, f2.a_star);
}

TEST(DmmdI, NoiselessStartStaysExact) {
  const GroundTruth t = generate({40, 30, 6, 5, 2, 3, 1.0, 9});
  const DmmdIResult res = solve_dmmd_i(t.a1, t.a2, {6, 5, 2, 3}, t.m_true, t.n_true, {});
  EXPECT_LT(relative_error(res.decomposition.views[0].a, t.a1), 1e-16);
  EXPECT_LT(relative_error(res.decomposition.views[1].a, t.a2), 1e-16);
  EXPECT_LT(projector_distance(res.decomposition.m_basis, t.m_true), 1e-8);
}

TEST(DmmdI, TraceIsMonotoneAndNeverWorseThanStart) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const GroundTruth t = generate({30, 20, 2, 2, 1, 1, 1.0, seed});
    const RankProfile ranks{2, 2, 1, 1};
    const Matrix z1 = truncated_svd(t.x1, 2).reconstruct();
    const Matrix z2 = truncated_svd(t.x2, 2).reconstruct();
    const auto m = estimate_joint_basis(z1, z2, 2, 2, Side::kColumns, 1).basis;
    const auto n = estimate_joint_basis(z1, z2, 2, 2, Side::kRows, 1).basis;
    const auto [f1, f2] = solve_dmmd_signals(t.x1, t.x2, ranks, m, n, {});
    const DmmdIResult res = solve_dmmd_i(t.x1, t.x2, ranks, m, n, {});
    const auto& tr = res.objective_trace;
    ASSERT_FALSE(tr.empty());
    for (std::size_t i = 1; i < tr.size(); ++i) {
      EXPECT_LE(tr[i], tr[i - 1] + 1e-12 * tr[0]) << "seed " << seed;
    }
    EXPECT_NEAR(tr.front(), f1.objective() + f2.objective(), 1e-9 * tr.front());
    EXPECT_LE(res.fits[0].objective() + res.fits[1].objective(),
              f1.objective() + f2.objective() + 1e-9 * tr.front())
        << "seed " << seed;
  }
}

TEST(DmmdI, JointBasisStaysCloseToTruth) {
  const GroundTruth t = generate({60, 50, 6, 5, 2, 2, 2.0, 21});
  const RankProfile ranks{6, 5, 2, 2};
  const Matrix z1 = truncated_svd(t.x1, 6).reconstruct();
  const Matrix z2 = truncated_svd(t.x2, 5).reconstruct();
  const auto m = estimate_joint_basis(z1, z2, 6, 5, Side::kColumns, 2).basis;
  const auto n = estimate_joint_basis(z1, z2, 6, 5, Side::kRows, 2).basis;
  const DmmdIResult res = solve_dmmd_i(t.x1, t.x2, ranks, m, n, {});
  const double deg = 180.0 / 3.14159265358979323846;
  EXPECT_LT(principal_angles(res.decomposition.m_basis, t.m_true).angles.maxCoeff() * deg, 15.0);
  EXPECT_LT(principal_angles(res.decomposition.n_basis, t.n_true).angles.maxCoeff() * deg, 15.0);
}

TEST(DmmdI, OuterCapWarns) {
  const GroundTruth t = generate({30, 20, 4, 4, 2, 1, 0.5, 5});
  const RankProfile ranks{4, 4, 2, 1};
  const auto m = sum_pca_joint_basis({t.x1, t.x2}, 2, Side::kColumns);
  const auto n = sum_pca_joint_basis({t.x1, t.x2}, 1, Side::kRows);
  DmmdIConfig cfg;
  cfg.outer_t_max = 1;
  cfg.outer_epsilon = 1e-300;
  const DmmdIResult res = solve_dmmd_i(t.x1, t.x2, ranks, m, n, cfg);
  EXPECT_FALSE(res.converged);
  EXPECT_FALSE(res.warnings.empty());
}

TEST(DmmdI, Errors) {
  TestRng rng(6);
  const Matrix x = rng.gaussian(8, 6);
  DmmdIConfig cfg;
  cfg.outer_t_max = 0;
  EXPECT_THROW(solve_dmmd_i(x, x, {2, 2, 0, 0}, OrthonormalBasis(8), OrthonormalBasis(6), cfg),
               ParameterError);
  EXPECT_THROW(solve_dmmd_i(x, x, {2, 2, 1, 0}, OrthonormalBasis(8), OrthonormalBasis(6), {}),
               ParameterError);
}

}  // namespace
}  // namespace dmmd
