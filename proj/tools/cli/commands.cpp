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

#include "commands.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <unistd.h>

#include "csv_io.hpp"
#include "dmmd/errors.hpp"
#include "dmmd/format.hpp"
#include "dmmd/pipeline.hpp"
#include "dmmd/settings.hpp"
#include "report.hpp"

namespace dmmd::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr const char* kResultsHelp =
    "results.csv columns: preset, rep, seed (replication generator seed), n, p, snr,\n"
    "r1, r2, rc, rr (planted ranks), fit_r1, fit_r2, fit_rc, fit_rr (ranks used for\n"
    "fitting), method (PL, SVD, DMMD, DMMD-i), quantity (r1, r2, rc, rr, A, Jc, Ic,\n"
    "Jr, Ir, M, N, objective, iterations, outer_iterations, run), view (1, 2, or 0\n"
    "for both views), metric (estimate, error, relative_error, absolute_error,\n"
    "chordal_distance, value, failed), value, note.";

// Writes into a sibling temporary directory and moves the files into place
// only on commit, so a failed run leaves the destination untouched.
class StagedOutput {
 public:
  explicit StagedOutput(fs::path destination) : final_(std::move(destination)) {
    final_ = final_.lexically_normal();
    if (!final_.has_filename()) final_ = final_.parent_path();
    const fs::path parent = final_.has_parent_path() ? final_.parent_path() : fs::path(".");
    fs::create_directories(parent);
    for (int attempt = 0;; ++attempt) {
      tmp_ = parent / ("." + final_.filename().string() + ".tmp-" +
                       std::to_string(::getpid()) + "-" + std::to_string(attempt));
      if (fs::create_directory(tmp_)) break;
    }
  }
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;
  ~StagedOutput() {
    std::error_code ec;
    if (!committed_) fs::remove_all(tmp_, ec);
  }

  fs::path file(const std::string& name) const { return tmp_ / name; }

  void commit() {
    if (!fs::exists(final_)) {
      fs::rename(tmp_, final_);
    } else {
      if (!fs::is_directory(final_)) throw Error(final_.string() + " exists and is not a directory");
      for (const auto& entry : fs::directory_iterator(tmp_)) {
        fs::rename(entry.path(), final_ / entry.path().filename());
      }
      fs::remove_all(tmp_);
    }
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path tmp_;
  bool committed_ = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json optional_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

struct InputFlags {
  std::string x1;
  std::string x2;
  bool header = false;
  char delimiter = ',';
  bool standardize = false;
  std::optional<std::int64_t> r1, r2, rc, rr;

  void add_to(CLI::App& app) {
    app.add_option("--x1", x1, "First view, CSV")->required();
    app.add_option("--x2", x2, "Second view, CSV")->required();
    app.add_flag("--header", header, "Skip the first row of each CSV");
    app.add_option("--delimiter", delimiter, "CSV field delimiter")->capture_default_str();
    app.add_flag("--standardize", standardize,
                 "Double-standardize each view (rows and columns) before fitting");
    app.add_option("--r1", r1, "Total rank of view 1 (default: profile likelihood)");
    app.add_option("--r2", r2, "Total rank of view 2 (default: profile likelihood)");
    app.add_option("--rc", rc, "Joint column rank (default: principal-angle selection)");
    app.add_option("--rr", rr, "Joint row rank (default: principal-angle selection)");
  }

  RankOverrides overrides() const {
    auto cast = [](const std::optional<std::int64_t>& v) -> std::optional<Index> {
      if (!v) return std::nullopt;
      if (*v < 0) throw ParameterError("ranks must be non-negative");
      return static_cast<Index>(*v);
    };
    RankOverrides o{cast(r1), cast(r2), cast(rc), cast(rr)};
    for (const auto& total : {o.r1, o.r2}) {
      if (!total) continue;
      if (o.r_c && *o.r_c > *total) throw ParameterError("r_c exceeds min(r1,r2)");
      if (o.r_r && *o.r_r > *total) throw ParameterError("r_r exceeds min(r1,r2)");
    }
    return o;
  }

  void echo(json& config) const {
    config["x1"] = x1;
    config["x2"] = x2;
    config["header"] = header;
    config["delimiter"] = std::string(1, delimiter);
    config["standardize"] = standardize;
    config["r1"] = optional_json(r1);
    config["r2"] = optional_json(r2);
    config["rc"] = optional_json(rc);
    config["rr"] = optional_json(rr);
  }

  std::pair<Matrix, Matrix> load() const {
    const CsvOptions opts{header, delimiter};
    Matrix a = read_matrix_csv(x1, opts);
    Matrix b = read_matrix_csv(x2, opts);
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw InputError("x1 is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                       " but x2 is " + std::to_string(b.rows()) + "x" +
                       std::to_string(b.cols()));
    }
    return {std::move(a), std::move(b)};
  }
};

struct DecomposeFlags {
  InputFlags input;
  std::string variant = "plain";
  double tol = SolverConfig{}.epsilon;
  int max_iter = SolverConfig{}.t_max;
  double outer_tol = DmmdIConfig{}.outer_epsilon;
  int outer_max_iter = DmmdIConfig{}.outer_t_max;
  std::optional<std::int64_t> anchor_m, anchor_n;
  bool timings = false;
  std::string out;
};

int cmd_decompose(const DecomposeFlags& f, std::ostream& out) {
  const auto start = Clock::now();
  const RankOverrides overrides = f.input.overrides();
  PipelineConfig cfg;
  cfg.variant = f.variant == "iterative" ? Variant::kIterative : Variant::kPlain;
  cfg.solver.epsilon = f.tol;
  cfg.solver.t_max = f.max_iter;
  cfg.iterative.outer_epsilon = f.outer_tol;
  cfg.iterative.outer_t_max = f.outer_max_iter;
  cfg.solver.validate();
  cfg.iterative.validate();

  auto [x1, x2] = f.input.load();
  StagedOutput staged(f.out);
  if (f.input.standardize) {
    x1 = double_standardize(x1);
    x2 = double_standardize(x2);
    write_matrix_csv(staged.file("X1_standardized.csv"), x1);
    write_matrix_csv(staged.file("X2_standardized.csv"), x2);
  }
  const auto fit_start = Clock::now();
  const PipelineResult result = dmmd(x1, x2, overrides, cfg);
  const auto fit_end = Clock::now();

  const DmmdDecomposition& d = result.decomposition;
  for (int k = 0; k < 2; ++k) {
    const std::string s = std::to_string(k + 1);
    write_matrix_csv(staged.file("A" + s + ".csv"), d.views[k].a);
    write_matrix_csv(staged.file("Jc" + s + ".csv"), d.views[k].j_col);
    write_matrix_csv(staged.file("Ic" + s + ".csv"), d.views[k].i_col);
    write_matrix_csv(staged.file("Jr" + s + ".csv"), d.views[k].j_row);
    write_matrix_csv(staged.file("Ir" + s + ".csv"), d.views[k].i_row);
  }
  write_matrix_csv(staged.file("M.csv"), d.m_basis.vectors());
  write_matrix_csv(staged.file("N.csv"), d.n_basis.vectors());
  if (f.anchor_m) {
    write_matrix_csv(staged.file("M_normalized.csv"),
                     normalized_basis_report(d.m_basis, static_cast<Index>(*f.anchor_m)));
  }
  if (f.anchor_n) {
    write_matrix_csv(staged.file("N_normalized.csv"),
                     normalized_basis_report(d.n_basis, static_cast<Index>(*f.anchor_n)));
  }

  RunReport report = make_report(result, x1, x2, overrides, cfg.variant);
  f.input.echo(report.config);
  report.config["variant"] = f.variant;
  report.config["tol"] = f.tol;
  report.config["max-iter"] = f.max_iter;
  report.config["outer-tol"] = f.outer_tol;
  report.config["outer-max-iter"] = f.outer_max_iter;
  report.config["anchor-m"] = optional_json(f.anchor_m);
  report.config["anchor-n"] = optional_json(f.anchor_n);
  if (f.timings) {
    report.timings = std::map<std::string, double>{
        {"fit_seconds", std::chrono::duration<double>(fit_end - fit_start).count()},
        {"total_seconds", std::chrono::duration<double>(Clock::now() - start).count()},
    };
  }
  write_text(staged.file("report.json"), dump(to_json(report)));
  staged.commit();
  out << "ranks r1=" << result.ranks.r1 << " r2=" << result.ranks.r2
      << " rc=" << result.ranks.r_c << " rr=" << result.ranks.r_r << "; wrote " << f.out << "\n";
  return kExitOk;
}

int cmd_ranks(const InputFlags& f, std::ostream& out) {
  const RankOverrides overrides = f.overrides();
  auto [x1, x2] = f.load();
  if (f.standardize) {
    x1 = double_standardize(x1);
    x2 = double_standardize(x2);
  }
  std::array<std::optional<TotalRankEstimate>, 2> totals;
  std::array<Index, 2> r{};
  const std::array<const Matrix*, 2> xs{&x1, &x2};
  const std::array<std::optional<Index>, 2> given{overrides.r1, overrides.r2};
  for (int k = 0; k < 2; ++k) {
    if (given[k]) {
      r[k] = *given[k];
    } else {
      totals[k] = estimate_total_rank(*xs[k]);
      r[k] = totals[k]->rank;
    }
  }
  RankProfile{r[0], r[1], overrides.r_c.value_or(0), overrides.r_r.value_or(0)}.validate(
      x1.rows(), x1.cols());
  const Matrix z1 = truncated_svd(x1, r[0]).reconstruct();
  const Matrix z2 = truncated_svd(x2, r[1]).reconstruct();
  const JointBasisEstimate col =
      estimate_joint_basis(z1, z2, r[0], r[1], Side::kColumns, overrides.r_c);
  const JointBasisEstimate row =
      estimate_joint_basis(z1, z2, r[0], r[1], Side::kRows, overrides.r_r);

  auto flag = [](bool present, bool value) { return present ? json(value) : json(nullptr); };
  const auto& a_col = col.angles.angles;
  const auto& a_row = row.angles.angles;
  json j{
      {"r1", r[0]},
      {"r2", r[1]},
      {"rc", col.rank},
      {"rr", row.rank},
      {"angles_col", std::vector<double>(a_col.data(), a_col.data() + a_col.size())},
      {"angles_row", std::vector<double>(a_row.data(), a_row.data() + a_row.size())},
      {"flags",
       {{"r1_low_confidence", flag(totals[0].has_value(), totals[0] && totals[0]->split.low_confidence)},
        {"r2_low_confidence", flag(totals[1].has_value(), totals[1] && totals[1]->split.low_confidence)},
        {"rc_low_confidence",
         flag(col.selection.has_value(), col.selection && col.selection->split.low_confidence)},
        {"rr_low_confidence",
         flag(row.selection.has_value(), row.selection && row.selection->split.low_confidence)}}},
  };
  out << dump(j);
  return kExitOk;
}

struct SimulateFlags {
  std::string preset = "S4";
  std::optional<std::int64_t> n, p, r1, r2, rc, rr;
  double snr = 1.0;
  int reps = 1;
  std::uint64_t seed = 0;
  double scale = 1.0;
  unsigned threads = 0;
  bool dmmd_i = false;
  bool true_ranks = false;
  double tol = SolverConfig{}.epsilon;
  int max_iter = SolverConfig{}.t_max;
  std::string out;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  const auto preset = parse_preset(f.preset);
  if (!preset) throw ParameterError("unknown preset '" + f.preset + "'");
  if (f.reps < 1) throw ParameterError("--reps must be >= 1");
  SettingOptions options;
  options.use_true_ranks = f.true_ranks;
  options.with_dmmd_i = f.dmmd_i;
  options.threads = f.threads;
  options.solver.epsilon = f.tol;
  options.solver.t_max = f.max_iter;
  options.solver.validate();
  options.iterative.initial = options.solver;
  const bool any_custom = f.n || f.p || f.r1 || f.r2 || f.rc || f.rr;
  if (*preset == Preset::kCustom) {
    if (!(f.n && f.p && f.r1 && f.r2 && f.rc && f.rr)) {
      throw ParameterError("--preset custom requires --n --p --r1 --r2 --rc --rr");
    }
    if (*f.n < 0 || *f.p < 0 || *f.r1 < 0 || *f.r2 < 0 || *f.rc < 0 || *f.rr < 0) {
      throw ParameterError("dimensions and ranks must be non-negative");
    }
    options.custom = {*f.n, *f.p, *f.r1, *f.r2, *f.rc, *f.rr, f.snr, 0};
  } else if (any_custom) {
    throw ParameterError("--n, --p and rank flags are only valid with --preset custom");
  }

  json replications = json::array();
  for (int rep = 0; rep < f.reps; ++rep) {
    const SimulationConfig c = replication_config(*preset, rep, f.reps, f.scale, f.seed, options.custom);
    replications.push_back(json{{"rep", rep}, {"seed", c.seed}, {"n", c.n}, {"p", c.p},
                                {"r1", c.r1}, {"r2", c.r2}, {"rc", c.r_c}, {"rr", c.r_r},
                                {"snr", c.snr}});
  }
  const std::vector<ResultRow> rows = run_setting(*preset, f.reps, f.scale, f.seed, options);

  StagedOutput staged(f.out);
  {
    std::ofstream csv(staged.file("results.csv"), std::ios::binary);
    write_results_csv(csv, rows);
    if (!csv) throw Error("cannot write results.csv");
  }
  json config{{"preset", f.preset},   {"reps", f.reps},          {"seed", f.seed},
              {"scale", f.scale},     {"true-ranks", f.true_ranks}, {"dmmd-i", f.dmmd_i},
              {"tol", f.tol},         {"max-iter", f.max_iter},   {"replications", replications}};
  write_text(staged.file("config.json"), dump(config));
  staged.commit();
  out << "wrote " << rows.size() << " rows for " << f.reps << " replication(s) to " << f.out
      << "\n";
  return kExitOk;
}

// Expands `--config FILE` into flags placed right after the subcommand, so
// explicit command-line flags (parsed later, last value wins) take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path);
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError("config file " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw InputError("config file " + path + ": expected a JSON object");
    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
      const std::string flag = "--" + key;
      if (value.is_boolean()) {
        if (value.get<bool>()) injected.push_back(flag);
      } else if (value.is_string()) {
        injected.push_back(flag);
        injected.push_back(value.get<std::string>());
      } else if (value.is_number_integer() || value.is_number_unsigned()) {
        injected.push_back(flag);
        injected.push_back(value.dump());
      } else if (value.is_number_float()) {
        injected.push_back(flag);
        injected.push_back(format_double(value.get<double>()));
      } else if (!value.is_null()) {
        throw ParameterError("config key '" + key + "' must be a scalar");
      }
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
    const std::size_t at = args.size() > 1 ? 2 : 1;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
    break;
  }
  return args;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-matched matrix decomposition (DMMD)", "dmmd"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 2 invalid flags or parameters, 3 unreadable input,\n"
      "4 numerical degeneracy. Every flag may also be given in a JSON file passed\n"
      "with --config, using the flag name without dashes as key.");
  std::string config_path;

  DecomposeFlags dec;
  CLI::App* decompose = app.add_subcommand("decompose", "Fit DMMD to two matched views");
  dec.input.add_to(*decompose);
  decompose->add_option("--variant", dec.variant, "plain or iterative (DMMD-i)")
      ->check(CLI::IsMember({"plain", "iterative"}))
      ->capture_default_str();
  decompose->add_option("--tol", dec.tol, "Relative objective tolerance of the alternating solver")
      ->capture_default_str();
  decompose->add_option("--max-iter", dec.max_iter, "Iteration cap of the alternating solver")
      ->capture_default_str();
  decompose->add_option("--outer-tol", dec.outer_tol, "Outer tolerance for --variant iterative")
      ->capture_default_str();
  decompose->add_option("--outer-max-iter", dec.outer_max_iter,
                        "Outer iteration cap for --variant iterative")
      ->capture_default_str();
  decompose->add_option("--anchor-m", dec.anchor_m,
                        "Also write M normalized to this row index (M_normalized.csv)");
  decompose->add_option("--anchor-n", dec.anchor_n,
                        "Also write N normalized to this column index (N_normalized.csv)");
  decompose->add_flag("--timings", dec.timings, "Record wall-clock timings in report.json");
  decompose->add_option("--out", dec.out, "Output directory")->required();
  decompose->add_option("--config", config_path, "JSON file of flag values");

  InputFlags rk;
  CLI::App* ranks = app.add_subcommand("ranks", "Estimate total and joint ranks; JSON to stdout");
  rk.add_to(*ranks);
  ranks->add_option("--config", config_path, "JSON file of flag values");

  SimulateFlags sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a simulation preset");
  simulate->add_option("--preset", sim.preset, "S1..S6, TCGA or custom")->capture_default_str();
  simulate->add_option("--n", sim.n, "Rows (custom preset)");
  simulate->add_option("--p", sim.p, "Columns (custom preset)");
  simulate->add_option("--r1", sim.r1, "Total rank of view 1 (custom preset)");
  simulate->add_option("--r2", sim.r2, "Total rank of view 2 (custom preset)");
  simulate->add_option("--rc", sim.rc, "Joint column rank (custom preset)");
  simulate->add_option("--rr", sim.rr, "Joint row rank (custom preset)");
  simulate->add_option("--snr", sim.snr, "Signal-to-noise ratio (custom preset)")
      ->capture_default_str();
  simulate->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  simulate->add_option("--scale", sim.scale,
                       "Shrink n, p and ranks by this factor in (0, 1] (n, p >= 8; ranks >= 1)")
      ->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads; 0 uses all cores")
      ->envname("DMMD_THREADS")
      ->capture_default_str();
  simulate->add_flag("--dmmd-i", sim.dmmd_i, "Also fit DMMD-i");
  simulate->add_flag("--true-ranks", sim.true_ranks, "Fit with planted ranks instead of estimates");
  simulate->add_option("--tol", sim.tol, "Relative objective tolerance")->capture_default_str();
  simulate->add_option("--max-iter", sim.max_iter, "Iteration cap")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--config", config_path, "JSON file of flag values");
  simulate->footer(kResultsHelp);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    std::vector<const char*> ptrs;
    for (const std::string& a : args) ptrs.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e, out, err);
      err << "error: " << e.what() << "\n\n" << app.help();
      return kExitUsage;
    }
    if (decompose->parsed()) return cmd_decompose(dec, out);
    if (ranks->parsed()) return cmd_ranks(rk, out);
    return cmd_simulate(sim, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegeneracyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace dmmd::cli
