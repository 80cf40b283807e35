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

#include "dmmd/settings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "dmmd/errors.hpp"
#include "dmmd/format.hpp"
#include "dmmd/random.hpp"

namespace dmmd {
namespace {

struct PresetInfo {
  Preset preset;
  const char* name;
};

constexpr PresetInfo kPresets[] = {
    {Preset::kS1, "S1"}, {Preset::kS2, "S2"},     {Preset::kS3, "S3"},
    {Preset::kS4, "S4"}, {Preset::kS5, "S5"},     {Preset::kS6, "S6"},
    {Preset::kTcga, "TCGA"}, {Preset::kCustom, "custom"},
};

void clamp_to_capacity(SimulationConfig& c) {
  for (int pass = 0; pass < 3; ++pass) {
    for (Index* rk : {&c.r1, &c.r2}) {
      *rk = std::min({*rk, c.n / 4 + c.r_c, c.p / 4 + c.r_r, std::min(c.n, c.p)});
    }
    c.r_c = std::min({c.r_c, c.r1, c.r2, c.n / 2});
    c.r_r = std::min({c.r_r, c.r1, c.r2, c.p / 2});
  }
}

// Quarter blocks: none, rows only, columns only, both.
void quarter_block_joint(SimulationConfig& c, int rep, int reps) {
  const int block = static_cast<int>((4LL * rep) / reps);
  const Index r_min = std::min(c.r1, c.r2);
  c.r_c = (block == 2 || block == 3) ? r_min : 0;
  c.r_r = (block == 1 || block == 3) ? r_min : 0;
}

class RowSink {
 public:
  RowSink(std::vector<ResultRow>& rows, ResultRow base) : rows_(rows), base_(std::move(base)) {}

  void set_fitted(const RankProfile& fitted) { base_.fitted = fitted; }

  void add(const std::string& method, const std::string& quantity, int view,
           const std::string& metric, double value, const std::string& note = {}) {
    ResultRow row = base_;
    row.method = method;
    row.quantity = quantity;
    row.view = view;
    row.metric = metric;
    row.value = value;
    row.note = note;
    rows_.push_back(std::move(row));
  }

 private:
  std::vector<ResultRow>& rows_;
  ResultRow base_;
};

const char* const kPartNames[] = {"A", "Jc", "Ic", "Jr", "Ir"};

std::array<const Matrix*, 5> parts_of(const ViewParts& v) {
  return {&v.a, &v.j_col, &v.i_col, &v.j_row, &v.i_row};
}

void signal_metrics(RowSink& sink, const std::string& method, const DmmdDecomposition& est,
                    const DmmdDecomposition& truth) {
  double err_total = 0.0, norm_total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const auto e = parts_of(est.views[k]);
    const auto t = parts_of(truth.views[k]);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double abs_err = absolute_error(*e[i], *t[i]);
      sink.add(method, kPartNames[i], k + 1, "absolute_error", abs_err);
      const double norm = t[i]->squaredNorm();
      if (norm > 0.0) sink.add(method, kPartNames[i], k + 1, "relative_error", abs_err / norm);
    }
    err_total += absolute_error(est.views[k].a, truth.views[k].a);
    norm_total += truth.views[k].a.squaredNorm();
  }
  sink.add(method, "A", 0, "relative_error", err_total / norm_total);
  if (!est.m_basis.empty() && !truth.m_basis.empty()) {
    sink.add(method, "M", 0, "chordal_distance", chordal_distance(est.m_basis, truth.m_basis));
  }
  if (!est.n_basis.empty() && !truth.n_basis.empty()) {
    sink.add(method, "N", 0, "chordal_distance", chordal_distance(est.n_basis, truth.n_basis));
  }
}

void fit_metrics(RowSink& sink, const std::string& method,
                 const std::array<ConstrainedFit, 2>& fits) {
  for (int k = 0; k < 2; ++k) {
    sink.add(method, "objective", k + 1, "value", fits[k].objective());
    sink.add(method, "iterations", k + 1, "value", fits[k].iterations);
  }
  sink.add(method, "objective", 0, "value", fits[0].objective() + fits[1].objective());
}

}  // namespace

std::optional<Preset> parse_preset(std::string_view name) {
  for (const PresetInfo& info : kPresets) {
    if (name == info.name) return info.preset;
  }
  return std::nullopt;
}

std::string preset_name(Preset preset) {
  for (const PresetInfo& info : kPresets) {
    if (info.preset == preset) return info.name;
  }
  return "unknown";
}

SimulationConfig replication_config(Preset preset, int rep, int reps, double scale,
                                    std::uint64_t seed, const SimulationConfig& custom) {
  if (reps < 1 || rep < 0 || rep >= reps) throw ParameterError("replication index out of range");
  if (!(scale > 0.0 && scale <= 1.0)) throw ParameterError("scale must lie in (0, 1]");
  auto dim = [scale](Index d) {
    return std::max<Index>(8, static_cast<Index>(std::llround(static_cast<double>(d) * scale)));
  };
  auto rank = [scale](Index r) -> Index {
    if (r == 0) return 0;
    return std::max<Index>(1, static_cast<Index>(std::llround(static_cast<double>(r) * scale)));
  };

  Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(rep));
  SimulationConfig c;
  c.snr = (preset == Preset::kS2 || preset == Preset::kS5) ? 0.5 : 1.0;
  switch (preset) {
    case Preset::kS1:
    case Preset::kS2:
    case Preset::kS3: {
      c.n = dim(240);
      c.p = dim(200);
      const Index hi = std::max<Index>(2, rank(20));
      c.r1 = rng.uniform_int(2, hi);
      c.r2 = rng.uniform_int(2, hi);
      if (preset == Preset::kS3) {
        quarter_block_joint(c, rep, reps);
      } else {
        const Index j_hi = std::min({c.r1, c.r2, rank(5)});
        c.r_c = rng.uniform_int(1, j_hi);
        c.r_r = rng.uniform_int(1, j_hi);
      }
      break;
    }
    case Preset::kS4:
    case Preset::kS5:
    case Preset::kS6:
      c.n = dim(240);
      c.p = dim(200);
      c.r1 = rank(20);
      c.r2 = rank(18);
      if (preset == Preset::kS6) {
        quarter_block_joint(c, rep, reps);
      } else {
        c.r_c = rank(4);
        c.r_r = rank(3);
      }
      break;
    case Preset::kTcga:
      c.n = dim(88);
      c.p = dim(736);
      c.r1 = rank(8);
      c.r2 = rank(6);
      c.r_c = 0;
      c.r_r = rank(2);
      break;
    case Preset::kCustom:
      c.n = dim(custom.n);
      c.p = dim(custom.p);
      c.r1 = rank(custom.r1);
      c.r2 = rank(custom.r2);
      c.r_c = rank(custom.r_c);
      c.r_r = rank(custom.r_r);
      c.snr = custom.snr;
      break;
  }
  clamp_to_capacity(c);
  c.seed = rng.next_u64();
  c.validate();
  return c;
}

std::vector<ResultRow> run_replication(Preset preset, int rep, int reps, double scale,
                                       std::uint64_t seed, const SettingOptions& options) {
  const SimulationConfig cfg = replication_config(preset, rep, reps, scale, seed, options.custom);
  const RankProfile truth_ranks = cfg.ranks();
  std::vector<ResultRow> rows;
  ResultRow base;
  base.preset = preset_name(preset);
  base.rep = rep;
  base.seed = cfg.seed;
  base.n = cfg.n;
  base.p = cfg.p;
  base.snr = cfg.snr;
  base.truth = truth_ranks;
  RowSink sink(rows, base);

  const GroundTruth truth = generate(cfg);
  const DmmdDecomposition planted = planted_parts(truth, truth_ranks);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::string stage = "PL";
  try {
    RankProfile est;
    est.r1 = estimate_total_rank(truth.x1).rank;
    est.r2 = estimate_total_rank(truth.x2).rank;
    const Matrix z1 = truncated_svd(truth.x1, est.r1).reconstruct();
    const Matrix z2 = truncated_svd(truth.x2, est.r2).reconstruct();
    est.r_c = estimate_joint_basis(z1, z2, est.r1, est.r2, Side::kColumns).rank;
    est.r_r = estimate_joint_basis(z1, z2, est.r1, est.r2, Side::kRows).rank;
    const RankProfile fitted = options.use_true_ranks ? truth_ranks : est;
    sink.set_fitted(fitted);
    const std::pair<const char*, std::pair<Index, Index>> rank_rows[] = {
        {"r1", {est.r1, truth_ranks.r1}},
        {"r2", {est.r2, truth_ranks.r2}},
        {"rc", {est.r_c, truth_ranks.r_c}},
        {"rr", {est.r_r, truth_ranks.r_r}},
    };
    int view = 1;
    for (const auto& [name, vals] : rank_rows) {
      const int v = view <= 2 ? view : 0;
      sink.add("PL", name, v, "estimate", static_cast<double>(vals.first));
      sink.add("PL", name, v, "error", static_cast<double>(vals.first - vals.second));
      ++view;
    }

    stage = "SVD";
    DmmdDecomposition baseline;
    baseline.ranks = fitted;
    baseline.m_basis = OrthonormalBasis(cfg.n);
    baseline.n_basis = OrthonormalBasis(cfg.p);
    for (int k = 0; k < 2; ++k) {
      baseline.views[k].a = truncated_svd(truth.x(k), fitted.total(k)).reconstruct();
    }
    double err_total = 0.0, norm_total = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double abs_err = absolute_error(baseline.views[k].a, truth.a(k));
      sink.add("SVD", "A", k + 1, "absolute_error", abs_err);
      sink.add("SVD", "A", k + 1, "relative_error", abs_err / truth.a(k).squaredNorm());
      err_total += abs_err;
      norm_total += truth.a(k).squaredNorm();
    }
    sink.add("SVD", "A", 0, "relative_error", err_total / norm_total);

    PipelineConfig pcfg;
    pcfg.solver = options.solver;
    pcfg.iterative = options.iterative;
    stage = "DMMD";
    const PipelineResult plain =
        dmmd(truth.x1, truth.x2, RankOverrides::all(fitted), pcfg);
    signal_metrics(sink, "DMMD", plain.decomposition, planted);
    fit_metrics(sink, "DMMD", plain.fits);

    if (options.with_dmmd_i) {
      stage = "DMMD-i";
      pcfg.variant = Variant::kIterative;
      const PipelineResult iter =
          dmmd(truth.x1, truth.x2, RankOverrides::all(fitted), pcfg);
      signal_metrics(sink, "DMMD-i", iter.decomposition, planted);
      fit_metrics(sink, "DMMD-i", iter.fits);
      sink.add("DMMD-i", "outer_iterations", 0, "value", iter.outer_iterations);
    }
  } catch (const Error& e) {
    sink.add(stage, "run", 0, "failed", nan, e.what());
  }
  return rows;
}

std::vector<ResultRow> run_setting(Preset preset, int reps, double scale, std::uint64_t seed,
                                   const SettingOptions& options) {
  if (reps < 1) throw ParameterError("reps must be >= 1");
  for (int rep = 0; rep < reps; ++rep) {
    replication_config(preset, rep, reps, scale, seed, options.custom);
  }
  std::vector<std::vector<ResultRow>> per_rep(static_cast<std::size_t>(reps));
  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(reps));

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> failures(threads);
  auto worker = [&](unsigned id) {
    try {
      for (int rep = next++; rep < reps; rep = next++) {
        per_rep[static_cast<std::size_t>(rep)] =
            run_replication(preset, rep, reps, scale, seed, options);
      }
    } catch (...) {
      failures[id] = std::current_exception();
      next = reps;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::vector<ResultRow> rows;
  for (auto& chunk : per_rep) {
    std::move(chunk.begin(), chunk.end(), std::back_inserter(rows));
  }
  return rows;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns = {
      "preset", "rep",    "seed",   "n",      "p",        "snr",  "r1",
      "r2",     "rc",     "rr",     "fit_r1", "fit_r2",   "fit_rc", "fit_rr",
      "method", "quantity", "view", "metric", "value",    "note"};
  return columns;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const ResultRow& r : rows) {
    out << csv_escape(r.preset) << ',' << r.rep << ',' << r.seed << ',' << r.n << ',' << r.p
        << ',' << format_double(r.snr) << ',' << r.truth.r1 << ',' << r.truth.r2 << ','
        << r.truth.r_c << ',' << r.truth.r_r << ',' << r.fitted.r1 << ',' << r.fitted.r2
        << ',' << r.fitted.r_c << ',' << r.fitted.r_r << ',' << csv_escape(r.method) << ','
        << csv_escape(r.quantity) << ',' << r.view << ',' << csv_escape(r.metric) << ','
        << format_double(r.value) << ',' << csv_escape(r.note) << '\n';
  }
}

}  // namespace dmmd
