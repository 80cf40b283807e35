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

#ifndef DMMD_SETTINGS_HPP_
#define DMMD_SETTINGS_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dmmd/pipeline.hpp"
#include "dmmd/simulation.hpp"

namespace dmmd {

enum class Preset { kS1, kS2, kS3, kS4, kS5, kS6, kTcga, kCustom };

std::optional<Preset> parse_preset(std::string_view name);
std::string preset_name(Preset preset);

struct SettingOptions {
  // Fit with the planted ranks instead of profile-likelihood estimates.
  bool use_true_ranks = false;
  bool with_dmmd_i = false;
  unsigned threads = 1;
  SolverConfig solver;
  DmmdIConfig iterative;
  // Dimensions, ranks and SNR for Preset::kCustom; its seed is ignored.
  SimulationConfig custom;
};

// Simulation parameters of replication `rep` out of `reps`. The replication
// seed is drawn from substream `rep` of `seed`, as are any sampled ranks.
// `scale` in (0, 1] shrinks dimensions and ranks with floors n, p >= 8 and
// rank >= 1, then clamps ranks to the generator's capacity.
SimulationConfig replication_config(Preset preset, int rep, int reps, double scale,
                                    std::uint64_t seed, const SimulationConfig& custom = {});

// One long-format result line. `view` is 1 or 2, or 0 for quantities that
// cover both views.
struct ResultRow {
  std::string preset;
  int rep = 0;
  std::uint64_t seed = 0;
  Index n = 0;
  Index p = 0;
  double snr = 0.0;
  RankProfile truth;
  RankProfile fitted;
  std::string method;
  std::string quantity;
  int view = 0;
  std::string metric;
  double value = 0.0;
  std::string note;
};

std::vector<ResultRow> run_replication(Preset preset, int rep, int reps, double scale,
                                       std::uint64_t seed, const SettingOptions& options);

// Rows of all replications in replication order, independent of `threads`.
std::vector<ResultRow> run_setting(Preset preset, int reps, double scale, std::uint64_t seed,
                                   const SettingOptions& options = {});

// Header line and column order of the results table.
const std::vector<std::string>& result_columns();

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace dmmd

#endif  // DMMD_SETTINGS_HPP_
