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

#include "dmmd/dmmd_iterative.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmmd/errors.hpp"

namespace dmmd {
namespace {

OrthonormalBasis leading_left(const Matrix& y, Index k, const char* what) {
  if (numerical_rank(y) < k) {
    throw DegeneracyError(std::string(what) + ": stacked matrix has rank below " +
                          std::to_string(k));
  }
  return truncated_svd(y, k).left;
}

// Basis of span(v) re-expressed orthogonally to `joint`; nullopt if the
// projection loses a dimension.
std::optional<OrthonormalBasis> reorthogonalize(const OrthonormalBasis& joint,
                                                const OrthonormalBasis& v) {
  if (v.empty()) return v;
  OrthonormalBasis q = gram_schmidt(project_out(joint, v.vectors(), Side::kColumns));
  if (q.size() != v.size()) return std::nullopt;
  return q;
}

struct OuterState {
  OrthonormalBasis m;
  OrthonormalBasis n;
  std::array<ConstrainedFit, 2> fits;

  OrthonormalBasis individual_cols(int k) const {
    const Matrix& v = fits[k].col_basis.vectors();
    return OrthonormalBasis::from_orthonormal(v.rightCols(v.cols() - m.size()));
  }
  OrthonormalBasis individual_rows(int k) const {
    const Matrix& v = fits[k].row_basis.vectors();
    return OrthonormalBasis::from_orthonormal(v.rightCols(v.cols() - n.size()));
  }
  double total() const { return fits[0].objective() + fits[1].objective(); }
};

}  // namespace

void DmmdIConfig::validate() const {
  if (outer_t_max < 1) throw ParameterError("outer_t_max must be >= 1");
  if (!(outer_epsilon > 0.0)) throw ParameterError("outer_epsilon must be > 0");
  inner.validate();
  initial.validate();
}

OrthonormalBasis update_joint_column(
    const Matrix& x1, const Matrix& x2,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& r_pairs,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& n_full_pairs, Index r_c) {
  if (r_c < 1) throw ParameterError("update_joint_column: r_c must be >= 1");
  const std::array<const Matrix*, 2> xs{&x1, &x2};
  const std::array<const OrthonormalBasis*, 2> rs{&r_pairs.first, &r_pairs.second};
  const std::array<const OrthonormalBasis*, 2> ns{&n_full_pairs.first,
                                                  &n_full_pairs.second};
  // X N~ N~^T and X N~ share left singular vectors, so stack the thin blocks.
  Matrix y(x1.rows(), ns[0]->size() + ns[1]->size());
  Index offset = 0;
  for (int k = 0; k < 2; ++k) {
    if (xs[k]->rows() != x1.rows() || ns[k]->ambient_dim() != xs[k]->cols() ||
        rs[k]->ambient_dim() != xs[k]->rows()) {
      throw ParameterError("update_joint_column: dimension mismatch");
    }
    const Matrix block = project_out(*rs[k], *xs[k] * ns[k]->vectors(), Side::kColumns);
    y.middleCols(offset, block.cols()) = block;
    offset += block.cols();
  }
  return leading_left(y, r_c, "update_joint_column");
}

OrthonormalBasis update_joint_row(
    const Matrix& x1, const Matrix& x2,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& s_pairs,
    const std::pair<OrthonormalBasis, OrthonormalBasis>& m_full_pairs, Index r_r) {
  if (r_r < 1) throw ParameterError("update_joint_row: r_r must be >= 1");
  return update_joint_column(x1.transpose(), x2.transpose(), s_pairs, m_full_pairs, r_r);
}

DmmdIResult solve_dmmd_i(const Matrix& x1, const Matrix& x2, const RankProfile& ranks,
                         const OrthonormalBasis& m0, const OrthonormalBasis& n0,
                         const DmmdIConfig& cfg) {
  cfg.validate();
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) {
    throw ParameterError("solve_dmmd_i: views have different shapes");
  }
  ranks.validate(x1.rows(), x1.cols());
  if (m0.size() != ranks.r_c || n0.size() != ranks.r_r) {
    throw ParameterError("solve_dmmd_i: joint bases do not match r_c, r_r");
  }
  const std::array<const Matrix*, 2> xs{&x1, &x2};
  const std::array<Index, 2> rk{ranks.r1, ranks.r2};
  const double scale = std::max(x1.squaredNorm(), x2.squaredNorm());

  DmmdIResult out;
  OuterState state{m0, n0, {}};
  for (int k = 0; k < 2; ++k) {
    state.fits[k] = solve_dmmd_view(*xs[k], rk[k], m0, n0, cfg.initial);
  }
  out.objective_trace.push_back(state.total());

  const bool has_joint = ranks.r_c > 0 || ranks.r_r > 0;
  for (int t = 0; has_joint && t < cfg.outer_t_max; ++t) {
    OuterState next{state.m, state.n, {}};
    std::array<OrthonormalBasis, 2> r_ind{state.individual_cols(0), state.individual_cols(1)};
    std::array<OrthonormalBasis, 2> s_ind{state.individual_rows(0), state.individual_rows(1)};
    std::string failure;
    try {
      if (ranks.r_c > 0) {
        next.m = update_joint_column(x1, x2, {r_ind[0], r_ind[1]},
                                     {state.fits[0].row_basis, state.fits[1].row_basis},
                                     ranks.r_c);
        for (int k = 0; k < 2 && failure.empty(); ++k) {
          auto q = reorthogonalize(next.m, r_ind[k]);
          if (!q) failure = "individual column basis collapsed onto the new M";
          else r_ind[k] = std::move(*q);
        }
      }
      if (ranks.r_r > 0 && failure.empty()) {
        const OrthonormalBasis m_full1 = next.m.append(r_ind[0]);
        const OrthonormalBasis m_full2 = next.m.append(r_ind[1]);
        next.n = update_joint_row(x1, x2, {s_ind[0], s_ind[1]}, {m_full1, m_full2},
                                  ranks.r_r);
      }
      for (int k = 0; k < 2 && failure.empty(); ++k) {
        next.fits[k] = solve_dmmd_view(*xs[k], rk[k], next.m, next.n, cfg.inner, r_ind[k]);
      }
    } catch (const DegeneracyError& e) {
      failure = e.what();
    }
    if (!failure.empty()) {
      out.warnings.push_back("outer iteration " + std::to_string(t + 1) +
                             " rejected: " + failure);
      break;
    }

    const double prev_total = state.total();
    if (next.total() > prev_total + 1e-12 * scale) {
      out.warnings.push_back("outer iteration " + std::to_string(t + 1) +
                             " rejected: summed objective increased");
      out.converged = true;
      break;
    }
    double change = 0.0;
    for (int k = 0; k < 2; ++k) {
      change = std::max(change,
                        std::abs(next.fits[k].objective() - state.fits[k].objective()));
    }
    state = std::move(next);
    out.objective_trace.push_back(state.total());
    out.iterations = t + 1;
    if (change < cfg.outer_epsilon * scale) {
      out.converged = true;
      break;
    }
  }
  if (!has_joint) out.converged = true;
  if (has_joint && !out.converged && out.warnings.empty()) {
    out.warnings.push_back("outer loop stopped at outer_t_max = " +
                           std::to_string(cfg.outer_t_max));
  }

  for (int k = 0; k < 2; ++k) {
    for (const std::string& w : state.fits[k].warnings) out.warnings.push_back(w);
  }
  out.decomposition = extract_parts(state.fits[0], state.fits[1], state.m, state.n, ranks);
  out.fits = std::move(state.fits);
  return out;
}

}  // namespace dmmd
