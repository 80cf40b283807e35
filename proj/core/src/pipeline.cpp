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

#include "dmmd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmmd/errors.hpp"

namespace dmmd {
namespace {

Index resolve_total_rank(const Matrix& x, const std::optional<Index>& override_rank,
                         std::optional<TotalRankEstimate>& estimate) {
  if (override_rank) return *override_rank;
  estimate = estimate_total_rank(x);
  return estimate->rank;
}

// Largest deviation of row means/variances from (0, 1).
double row_deviation(const Matrix& x) {
  double worst = 0.0;
  const double denom = static_cast<double>(x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).mean();
    const double var = (x.row(i).array() - mean).square().sum() / denom;
    worst = std::max({worst, std::abs(mean), std::abs(var - 1.0)});
  }
  return worst;
}

void standardize_rows(Matrix& x, int sweep, const char* label) {
  const double denom = static_cast<double>(x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double magnitude = x.row(i).cwiseAbs().maxCoeff();
    const double mean = x.row(i).mean();
    x.row(i).array() -= mean;
    const double var = x.row(i).squaredNorm() / denom;
    if (!(var > std::pow(1e-13 * magnitude, 2)) || var == 0.0) {
      throw DegeneracyError("double_standardize: " + std::string(label) + " " +
                            std::to_string(i) + " is constant at sweep " +
                            std::to_string(sweep));
    }
    x.row(i) /= std::sqrt(var);
  }
}

}  // namespace

PipelineResult dmmd(const Matrix& x1, const Matrix& x2, const RankOverrides& overrides,
                    const PipelineConfig& cfg) {
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) {
    throw ParameterError("dmmd: views must have the same shape");
  }
  require_finite(x1, "x1");
  require_finite(x2, "x2");
  const Index n = x1.rows(), p = x1.cols();
  if (overrides.r1 && overrides.r2) {
    RankProfile{*overrides.r1, *overrides.r2, overrides.r_c.value_or(0),
                overrides.r_r.value_or(0)}
        .validate(n, p);
  }

  PipelineResult out;
  RankProfile ranks;
  ranks.r1 = resolve_total_rank(x1, overrides.r1, out.total_rank[0]);
  ranks.r2 = resolve_total_rank(x2, overrides.r2, out.total_rank[1]);
  ranks.r_c = overrides.r_c.value_or(0);
  ranks.r_r = overrides.r_r.value_or(0);
  ranks.validate(n, p);

  const Matrix z1 = truncated_svd(x1, ranks.r1).reconstruct();
  const Matrix z2 = truncated_svd(x2, ranks.r2).reconstruct();
  out.column_joint =
      estimate_joint_basis(z1, z2, ranks.r1, ranks.r2, Side::kColumns, overrides.r_c);
  out.row_joint = estimate_joint_basis(z1, z2, ranks.r1, ranks.r2, Side::kRows, overrides.r_r);
  ranks.r_c = out.column_joint.rank;
  ranks.r_r = out.row_joint.rank;
  out.ranks = ranks;

  const OrthonormalBasis& m = out.column_joint.basis;
  const OrthonormalBasis& nb = out.row_joint.basis;
  if (cfg.variant == Variant::kPlain) {
    auto fits = solve_dmmd_signals(x1, x2, ranks, m, nb, cfg.solver);
    out.decomposition = extract_parts(fits.first, fits.second, m, nb, ranks);
    out.fits = {std::move(fits.first), std::move(fits.second)};
    for (int k = 0; k < 2; ++k) {
      for (const std::string& w : out.fits[k].warnings) {
        out.warnings.push_back("view " + std::to_string(k + 1) + ": " + w);
      }
    }
  } else {
    DmmdIConfig icfg = cfg.iterative;
    icfg.initial = cfg.solver;
    DmmdIResult res = solve_dmmd_i(x1, x2, ranks, m, nb, icfg);
    out.decomposition = std::move(res.decomposition);
    out.fits = std::move(res.fits);
    out.outer_trace = std::move(res.objective_trace);
    out.outer_iterations = res.iterations;
    out.warnings = std::move(res.warnings);
  }
  return out;
}

VarianceExplained variance_explained(const Matrix& x, const ViewParts& parts) {
  const double total = x.squaredNorm();
  if (total == 0.0) throw ParameterError("variance_explained: data matrix is zero");
  auto pct = [total](const Matrix& part) { return 100.0 * part.squaredNorm() / total; };
  return {pct(parts.j_col), pct(parts.i_col), pct(parts.j_row), pct(parts.i_row),
          pct(parts.a)};
}

Vector normalize_to_anchor(const Vector& v, Index anchor) {
  if (anchor < 0 || anchor >= v.size()) {
    throw ParameterError("normalize_to_anchor: anchor index out of range");
  }
  if (!(std::abs(v(anchor)) > 1e-10)) {
    throw DegeneracyError("normalize_to_anchor: anchor coefficient is zero");
  }
  return v / v(anchor);
}

Matrix normalized_basis_report(const OrthonormalBasis& basis, Index anchor) {
  Matrix out(basis.ambient_dim(), basis.size());
  for (Index j = 0; j < basis.size(); ++j) {
    out.col(j) = normalize_to_anchor(basis.vectors().col(j), anchor);
  }
  return out;
}

Matrix double_standardize(const Matrix& x, double tol, int max_sweeps) {
  if (x.rows() < 2 || x.cols() < 2) {
    throw ParameterError("double_standardize: requires at least 2 rows and 2 columns");
  }
  if (!(tol > 0.0) || max_sweeps < 1) {
    throw ParameterError("double_standardize: tol must be > 0 and max_sweeps >= 1");
  }
  require_finite(x, "double_standardize input");
  Matrix y = x;
  auto deviation = [&y] { return std::max(row_deviation(y), row_deviation(y.transpose())); };
  double dev = deviation();
  if (dev < tol) return y;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    standardize_rows(y, sweep, "row");
    Matrix yt = y.transpose();
    standardize_rows(yt, sweep, "column");
    y = yt.transpose();
    dev = deviation();
    if (dev < tol) return y;
  }
  throw DegeneracyError("double_standardize: not converged after " +
                        std::to_string(max_sweeps) + " sweeps (max deviation " +
                        std::to_string(dev) + ")");
}

}  // namespace dmmd
