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

#include "dmmd/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dmmd/errors.hpp"
#include "dmmd/joint_structure.hpp"
#include "dmmd/random.hpp"

namespace dmmd {
namespace {

// Draws `count` distinct positions from [lo, hi) by a partial Fisher-Yates
// shuffle, returned in ascending order.
std::vector<Index> sample_positions(Rng& rng, Index lo, Index hi, Index count) {
  std::vector<Index> pool(static_cast<std::size_t>(hi - lo));
  std::iota(pool.begin(), pool.end(), lo);
  for (Index i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(i, static_cast<std::int64_t>(pool.size()) - 1));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

Matrix selector(Index dim, const std::vector<Index>& joint,
                const std::vector<Index>& individual) {
  Matrix f = Matrix::Zero(dim, static_cast<Index>(joint.size() + individual.size()));
  Index c = 0;
  for (Index pos : joint) f(pos, c++) = 1.0;
  for (Index pos : individual) f(pos, c++) = 1.0;
  return f;
}

Matrix random_orthogonal(Rng& rng, Index r) {
  return thin_svd(rng.gaussian_matrix(r, r)).left.vectors();
}

OrthonormalBasis column_space(const Matrix& x) {
  const Index k = numerical_rank(x);
  if (k == 0) return OrthonormalBasis(x.rows());
  return truncated_svd(x, k).left;
}

Index count_small_angles(const OrthonormalBasis& u, const OrthonormalBasis& v, double tol) {
  if (u.empty() || v.empty()) return 0;
  const PrincipalAngleSet set = principal_angles(u, v);
  return static_cast<Index>((set.angles.array() < tol).count());
}

void check_direction(const Matrix& a1, const Matrix& a2, const OrthonormalBasis& joint,
                     Index r_joint, const char* label, double tol,
                     ConformanceReport& report) {
  auto fail = [&](const std::string& what) {
    report.ok = false;
    report.failures.push_back(std::string(label) + ": " + what);
  };
  const std::array<const Matrix*, 2> as{&a1, &a2};
  std::array<OrthonormalBasis, 2> spaces{column_space(a1), column_space(a2)};
  std::array<Matrix, 2> individual;
  for (int k = 0; k < 2; ++k) {
    const double scale = std::max(as[k]->norm(), 1.0);
    const std::string view = " (view " + std::to_string(k + 1) + ")";
    if (joint.size() > 0 && project_out(spaces[k], joint.vectors(), Side::kColumns).norm() > tol) {
      fail("joint basis is not contained in the signal space" + view);
    }
    const Matrix j = project_onto(joint, *as[k], Side::kColumns);
    individual[k] = *as[k] - j;
    if (numerical_rank(j) != r_joint) fail("joint part does not span the joint basis" + view);
    if (joint.size() > 0 && (joint.vectors().transpose() * individual[k]).norm() > tol * scale) {
      fail("individual part is not orthogonal to the joint basis" + view);
    }
  }
  if (count_small_angles(spaces[0], spaces[1], tol) != r_joint) {
    fail("signal-space intersection dimension differs from the joint rank");
  }
  if (count_small_angles(column_space(individual[0]), column_space(individual[1]), tol) != 0) {
    fail("individual spaces intersect non-trivially");
  }
}

}  // namespace

void SimulationConfig::validate() const {
  if (n < 4 || p < 4) throw ParameterError("simulation requires n >= 4 and p >= 4");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw ParameterError("snr must be positive");
  if (r1 < 1 || r2 < 1) throw ParameterError("r1 and r2 must be >= 1");
  ranks().validate(n, p);
  if (r_c > n / 2) throw ParameterError("r_c exceeds the joint position pool floor(n/2)");
  if (r_r > p / 2) throw ParameterError("r_r exceeds the joint position pool floor(p/2)");
  for (Index rk : {r1, r2}) {
    if (rk - r_c > n / 4) {
      throw ParameterError("r_k - r_c exceeds the individual position pool floor(n/4)");
    }
    if (rk - r_r > p / 4) {
      throw ParameterError("r_k - r_r exceeds the individual position pool floor(p/4)");
    }
  }
}

GroundTruth generate(const SimulationConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const Index n_half = cfg.n / 2, n_quarter = cfg.n / 4;
  const Index p_half = cfg.p / 2, p_quarter = cfg.p / 4;

  const auto joint_rows = sample_positions(rng, 0, n_half, cfg.r_c);
  const auto joint_cols = sample_positions(rng, 0, p_half, cfg.r_r);
  const std::array<Index, 2> rk{cfg.r1, cfg.r2};
  const std::array<Index, 2> row_lo{n_half, n_half + n_quarter};
  const std::array<Index, 2> col_lo{p_half, p_half + p_quarter};

  GroundTruth out;
  for (int k = 0; k < 2; ++k) {
    const auto ind_rows = sample_positions(rng, row_lo[k], row_lo[k] + n_quarter, rk[k] - cfg.r_c);
    const auto ind_cols = sample_positions(rng, col_lo[k], col_lo[k] + p_quarter, rk[k] - cfg.r_r);
    const Matrix f = selector(cfg.n, joint_rows, ind_rows);
    const Matrix g = selector(cfg.p, joint_cols, ind_cols);
    const Matrix q1 = random_orthogonal(rng, rk[k]);
    const Matrix q2 = random_orthogonal(rng, rk[k]);
    Vector d(rk[k]);
    for (Index i = 0; i < rk[k]; ++i) d(i) = rng.uniform(0.5, 1.5);
    d *= std::sqrt(static_cast<double>(rk[k]) / d.squaredNorm());
    (k == 0 ? out.a1 : out.a2) = f * q1 * d.asDiagonal() * q2.transpose() * g.transpose();
  }
  out.m_true = OrthonormalBasis::from_orthonormal(selector(cfg.n, joint_rows, {}));
  out.n_true = OrthonormalBasis::from_orthonormal(selector(cfg.p, joint_cols, {}));

  const double np = static_cast<double>(cfg.n) * static_cast<double>(cfg.p);
  out.sigma1 = std::sqrt(static_cast<double>(cfg.r1) / (np * cfg.snr));
  out.sigma2 = std::sqrt(static_cast<double>(cfg.r2) / (np * cfg.snr));
  out.x1 = out.a1 + out.sigma1 * rng.gaussian_matrix(cfg.n, cfg.p);
  out.x2 = out.a2 + out.sigma2 * rng.gaussian_matrix(cfg.n, cfg.p);
  return out;
}

DmmdDecomposition planted_parts(const GroundTruth& truth, const RankProfile& ranks) {
  DmmdDecomposition out;
  out.ranks = ranks;
  out.m_basis = truth.m_true;
  out.n_basis = truth.n_true;
  for (int k = 0; k < 2; ++k) {
    ViewParts& v = out.views[k];
    v.a = truth.a(k);
    v.j_col = project_onto(truth.m_true, v.a, Side::kColumns);
    v.i_col = v.a - v.j_col;
    v.j_row = project_onto(truth.n_true, v.a, Side::kRows);
    v.i_row = v.a - v.j_row;
  }
  return out;
}

ConformanceReport verify_ground_truth(const GroundTruth& truth, const RankProfile& ranks,
                                      double tol) {
  ConformanceReport report;
  for (int k = 0; k < 2; ++k) {
    if (numerical_rank(truth.a(k)) != ranks.total(k)) {
      report.ok = false;
      report.failures.push_back("signal " + std::to_string(k + 1) +
                                " does not have the planted rank");
    }
  }
  check_direction(truth.a1, truth.a2, truth.m_true, ranks.r_c, "column", tol, report);
  check_direction(truth.a1.transpose(), truth.a2.transpose(), truth.n_true, ranks.r_r, "row",
                  tol, report);
  return report;
}

double relative_error(const Matrix& est, const Matrix& truth) {
  const double denom = truth.squaredNorm();
  if (denom == 0.0) {
    throw ParameterError("relative_error: truth is zero; use absolute_error");
  }
  return absolute_error(est, truth) / denom;
}

double absolute_error(const Matrix& est, const Matrix& truth) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols()) {
    throw ParameterError("error metric: shape mismatch");
  }
  return (est - truth).squaredNorm();
}

double chordal_distance(const OrthonormalBasis& u, const OrthonormalBasis& v) {
  if (u.empty() || v.empty()) throw ParameterError("chordal_distance: empty basis");
  const PrincipalAngleSet set = principal_angles(u, v);
  const double k = static_cast<double>(set.angles.size());
  return std::sqrt(set.angles.array().sin().square().sum() / k);
}

}  // namespace dmmd
