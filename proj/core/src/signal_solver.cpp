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

#include "dmmd/signal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dmmd/errors.hpp"
#include "dmmd/random.hpp"

namespace dmmd {
namespace {

constexpr double kRankTol = 1e-10;

std::string rank_str(Index k) { return std::to_string(k); }

// Leading k singular vectors on `side` plus the spectrum facts the solver
// needs: numerical rank and whether the truncation point is a tie.
struct LeadingVectors {
  Matrix vectors;
  Index rank = 0;
  bool tie = false;
};

LeadingVectors leading_vectors(const Matrix& w, Index k, Side side) {
  LeadingVectors out;
  if (k == 0) {
    out.vectors.resize(side == Side::kColumns ? w.rows() : w.cols(), 0);
    out.rank = numerical_rank(w, kRankTol);
    return out;
  }
  const SvdFactors svd = svd_factors(w, side == Side::kColumns, side == Side::kRows);
  const Vector& s = svd.s;
  if (s.size() > 0 && s(0) > 0.0) {
    for (Index i = 0; i < s.size(); ++i) out.rank += s(i) > kRankTol * s(0) ? 1 : 0;
    if (k < s.size()) out.tie = (s(k - 1) - s(k)) <= 1e-10 * s(k - 1);
  }
  if (k > s.size()) return out;  // caller reports the rank shortfall
  out.vectors = side == Side::kColumns ? Matrix(svd.u.leftCols(k)) : Matrix(svd.v.leftCols(k));
  return out;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

void check_shape(const Matrix& x, const OrthonormalBasis& basis, Side side,
                 const char* what) {
  const Index dim = side == Side::kColumns ? x.rows() : x.cols();
  if (basis.ambient_dim() != dim) {
    throw ParameterError(std::string(what) + ": basis dimension " +
                         rank_str(basis.ambient_dim()) + " does not match data (" +
                         rank_str(dim) + ")");
  }
}

double residual(const Matrix& x, const Matrix& mt, const Matrix& nt) {
  const Matrix core = mt.transpose() * x * nt;
  return (x - mt * core * nt.transpose()).squaredNorm();
}

ConstrainedFit run_alternating(const Matrix& x, Index r, const OrthonormalBasis& m,
                               const OrthonormalBasis& n, const SolverConfig& cfg,
                               Matrix r_basis) {
  const Index rc = m.size();
  const Index rr = n.size();
  const Matrix& mv = m.vectors();
  const Matrix& nv = n.vectors();
  const double scale = x.squaredNorm();

  ConstrainedFit fit;
  Matrix mt = hcat(mv, r_basis);
  Matrix nt;
  // Column-only objective of the starting point; it bounds L(1) from below
  // and equals it when the row constraint is inactive.
  double prev = (x - mt * (mt.transpose() * x)).squaredNorm();
  bool tie = false;

  for (int t = 0; t < cfg.t_max; ++t) {
    // Row update: S from (M M^T + R R^T) X (I - N N^T). With M~ orthonormal
    // the right singular vectors are those of M~^T X (I - N N^T).
    Matrix b = mt.transpose() * x;
    if (rr > 0) b -= (b * nv) * nv.transpose();
    LeadingVectors s = leading_vectors(b, r - rr, Side::kRows);
    if (s.rank < r - rr) {
      throw DegeneracyError("alternating solver, iteration " + rank_str(t + 1) +
                            ": (M M^T + R R^T) X (I - N N^T) has rank " +
                            rank_str(s.rank) + " < r - r_r = " + rank_str(r - rr));
    }
    nt = hcat(nv, s.vectors);

    // Column update: R from (I - M M^T) X (N N^T + S S^T), via X N~.
    Matrix c = x * nt;
    if (rc > 0) c -= mv * (mv.transpose() * c);
    LeadingVectors rv = leading_vectors(c, r - rc, Side::kColumns);
    if (rv.rank < r - rc) {
      throw DegeneracyError("alternating solver, iteration " + rank_str(t + 1) +
                            ": (I - M M^T) X (N N^T + S S^T) has rank " +
                            rank_str(rv.rank) + " < r - r_c = " + rank_str(r - rc));
    }
    mt = hcat(mv, rv.vectors);
    tie = s.tie || rv.tie;

    const double obj = residual(x, mt, nt);
    fit.objective_trace.push_back(obj);
    fit.iterations = t + 1;
    if (std::abs(obj - prev) < cfg.epsilon * scale) {
      fit.converged = true;
      break;
    }
    prev = obj;
  }

  if (tie && cfg.warn_on_ties) {
    fit.warnings.push_back(
        "tied singular values at a truncation point; the solution is not unique");
  }
  if (!fit.converged) {
    fit.warnings.push_back("alternating solver stopped at t_max = " +
                           rank_str(cfg.t_max) + " without converging");
  }
  const Matrix core = mt.transpose() * x * nt;
  fit.a_star = mt * core * nt.transpose();
  fit.col_basis = OrthonormalBasis::from_orthonormal(std::move(mt));
  fit.row_basis = OrthonormalBasis::from_orthonormal(std::move(nt));
  return fit;
}

}  // namespace

void RankProfile::validate(Index n, Index p) const {
  const Index cap = std::min(n, p);
  const auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (r1 < 1 || r2 < 1) fail("total ranks must be >= 1");
  if (r1 > cap || r2 > cap) fail("total rank exceeds min(n,p) = " + rank_str(cap));
  if (r_c < 0 || r_r < 0) fail("joint ranks must be >= 0");
  if (r_c > std::min(r1, r2)) fail("r_c exceeds min(r1,r2)");
  if (r_r > std::min(r1, r2)) fail("r_r exceeds min(r1,r2)");
}

void SolverConfig::validate() const {
  if (t_max < 1) throw ParameterError("t_max must be >= 1");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
  if (restarts < 0) throw ParameterError("restarts must be >= 0");
}

ConstrainedFit solve_column_constrained(const Matrix& x, const OrthonormalBasis& m,
                                        Index r, bool warn_on_ties) {
  require_finite(x, "solve_column_constrained");
  check_shape(x, m, Side::kColumns, "solve_column_constrained");
  const Index rc = m.size();
  if (r < rc || r > std::min(x.rows(), x.cols())) {
    throw ParameterError("solve_column_constrained: need r_c <= r <= min(n, p)");
  }
  if (rc > 0 && numerical_rank(m.vectors().transpose() * x, kRankTol) < rc) {
    throw PreconditionError("solve_column_constrained: M M^T X has rank below r_c = " +
                            rank_str(rc));
  }
  const Matrix w = project_out(m, x, Side::kColumns);
  LeadingVectors rv = leading_vectors(w, r - rc, Side::kColumns);
  if (rv.rank < r - rc) {
    throw DegeneracyError("solve_column_constrained: (I - M M^T) X has rank " +
                          rank_str(rv.rank) + " < r - r_c = " + rank_str(r - rc));
  }
  ConstrainedFit fit;
  Matrix mt = hcat(m.vectors(), rv.vectors);
  fit.a_star = mt * (mt.transpose() * x);
  fit.objective_trace.push_back((x - fit.a_star).squaredNorm());
  fit.converged = true;
  if (rv.tie && warn_on_ties) {
    fit.warnings.push_back(
        "(I - M M^T) X has tied singular values at the truncation point; "
        "the minimizer is not unique");
  }
  fit.col_basis = OrthonormalBasis::from_orthonormal(std::move(mt));
  fit.row_basis = OrthonormalBasis(x.cols());
  return fit;
}

ConstrainedFit solve_row_constrained(const Matrix& x, const OrthonormalBasis& n,
                                     Index r, bool warn_on_ties) {
  check_shape(x, n, Side::kRows, "solve_row_constrained");
  const Matrix xt = x.transpose();
  ConstrainedFit fit = solve_column_constrained(xt, n, r, warn_on_ties);
  fit.a_star.transposeInPlace();
  fit.row_basis = std::move(fit.col_basis);
  fit.col_basis = OrthonormalBasis(x.rows());
  return fit;
}

FixedSpaceFit best_fixed_spaces(const Matrix& x, const OrthonormalBasis& m_full,
                                const OrthonormalBasis& n_full) {
  require_finite(x, "best_fixed_spaces");
  check_shape(x, m_full, Side::kColumns, "best_fixed_spaces");
  check_shape(x, n_full, Side::kRows, "best_fixed_spaces");
  if (m_full.empty() || n_full.empty()) {
    throw ParameterError("best_fixed_spaces: bases must be non-empty");
  }
  const Matrix& mv = m_full.vectors();
  const Matrix& nv = n_full.vectors();
  FixedSpaceFit out;
  out.a = mv * (mv.transpose() * x * nv) * nv.transpose();
  out.rank_deficient =
      numerical_rank(out.a, kRankTol) < std::min(m_full.size(), n_full.size());
  return out;
}

double fixed_space_objective(const Matrix& x, const OrthonormalBasis& m_full,
                             const OrthonormalBasis& n_full) {
  return residual(x, m_full.vectors(), n_full.vectors());
}

ConstrainedFit solve_dmmd_view(const Matrix& x, Index r, const OrthonormalBasis& m,
                               const OrthonormalBasis& n, const SolverConfig& cfg,
                               const std::optional<OrthonormalBasis>& initial_r) {
  require_finite(x, "solve_dmmd_view");
  cfg.validate();
  check_shape(x, m, Side::kColumns, "solve_dmmd_view");
  check_shape(x, n, Side::kRows, "solve_dmmd_view");
  const Index rc = m.size();
  const Index rr = n.size();
  if (r < std::max(rc, rr) || r > std::min(x.rows(), x.cols())) {
    throw ParameterError("solve_dmmd_view: need max(r_c, r_r) <= r <= min(n, p)");
  }

  Matrix start;
  if (initial_r) {
    if (initial_r->ambient_dim() != x.rows() || initial_r->size() != r - rc) {
      throw ParameterError("solve_dmmd_view: initial R has the wrong shape");
    }
    start = initial_r->vectors();
  } else {
    start = solve_column_constrained(x, m, r, false).col_basis.vectors().rightCols(r - rc);
  }
  ConstrainedFit best = run_alternating(x, r, m, n, cfg, start);

  for (int i = 0; i < cfg.restarts; ++i) {
    Rng rng = Rng::substream(cfg.restart_seed, static_cast<std::uint64_t>(i));
    const Matrix g = project_out(m, rng.gaussian_matrix(x.rows(), r - rc), Side::kColumns);
    OrthonormalBasis q = gram_schmidt(g);
    if (q.size() != r - rc) continue;
    ConstrainedFit trial = run_alternating(x, r, m, n, cfg, q.vectors());
    if (trial.objective() < best.objective()) best = std::move(trial);
  }
  return best;
}

std::pair<ConstrainedFit, ConstrainedFit> solve_dmmd_signals(
    const Matrix& x1, const Matrix& x2, const RankProfile& ranks,
    const OrthonormalBasis& m, const OrthonormalBasis& n, const SolverConfig& cfg) {
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) {
    throw ParameterError("solve_dmmd_signals: views have different shapes");
  }
  ranks.validate(x1.rows(), x1.cols());
  if (m.size() != ranks.r_c || n.size() != ranks.r_r) {
    throw ParameterError("solve_dmmd_signals: joint bases do not match r_c, r_r");
  }
  ConstrainedFit f1 = solve_dmmd_view(x1, ranks.r1, m, n, cfg);
  ConstrainedFit f2 = solve_dmmd_view(x2, ranks.r2, m, n, cfg);
  return {std::move(f1), std::move(f2)};
}

DmmdDecomposition extract_parts(const ConstrainedFit& fit1, const ConstrainedFit& fit2,
                                const OrthonormalBasis& m, const OrthonormalBasis& n,
                                const RankProfile& ranks) {
  DmmdDecomposition out;
  const std::array<const ConstrainedFit*, 2> fits{&fit1, &fit2};
  for (int k = 0; k < 2; ++k) {
    const Matrix& a = fits[k]->a_star;
    check_shape(a, m, Side::kColumns, "extract_parts");
    check_shape(a, n, Side::kRows, "extract_parts");
    ViewParts& v = out.views[k];
    v.a = a;
    v.j_col = project_onto(m, a, Side::kColumns);
    v.i_col = a - v.j_col;
    v.j_row = project_onto(n, a, Side::kRows);
    v.i_row = a - v.j_row;
  }
  out.ranks = ranks;
  out.m_basis = m;
  out.n_basis = n;
  return out;
}

}  // namespace dmmd
