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


#include <benchmark/benchmark.h>

#include "dmmd/dmmd_iterative.hpp"
#include "dmmd/linalg.hpp"
#include "dmmd/pipeline.hpp"
#include "dmmd/settings.hpp"
#include "dmmd/signal_solver.hpp"
#include "dmmd/simulation.hpp"

namespace {

using dmmd::Index;

dmmd::SimulationConfig timing_config(std::uint64_t seed) {
  return {100, 80, 10, 8, 4, 3, 1.0, seed};
}

void BM_TruncatedSvd(benchmark::State& state) {
  const Index n = state.range(0);
  const Index p = state.range(1);
  dmmd::Matrix x = dmmd::generate({n, p, 10, 8, 4, 3, 1.0, 7}).x1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmmd::truncated_svd(x, 10));
  }
}
BENCHMARK(BM_TruncatedSvd)->Args({100, 80})->Args({240, 200})->Unit(benchmark::kMicrosecond);

void BM_AlternatingSolver(benchmark::State& state) {
  const auto truth = dmmd::generate({240, 200, 20, 18, 6, 5, 1.0, 11});
  const dmmd::SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dmmd::solve_dmmd_view(truth.x1, 20, truth.m_true, truth.n_true, cfg));
  }
}
BENCHMARK(BM_AlternatingSolver)->Unit(benchmark::kMillisecond);

void BM_PipelineEstimatedRanks(benchmark::State& state) {
  const auto truth = dmmd::generate(timing_config(3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmmd::dmmd(truth.x1, truth.x2));
  }
}
BENCHMARK(BM_PipelineEstimatedRanks)->Unit(benchmark::kMillisecond);

void BM_PipelineIterative(benchmark::State& state) {
  const auto cfg = timing_config(5);
  const auto truth = dmmd::generate(cfg);
  dmmd::PipelineConfig pc;
  pc.variant = dmmd::Variant::kIterative;
  const auto overrides = dmmd::RankOverrides::all(cfg.ranks());
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmmd::dmmd(truth.x1, truth.x2, overrides, pc));
  }
}
BENCHMARK(BM_PipelineIterative)->Unit(benchmark::kMillisecond);

void BM_SettingReplication(benchmark::State& state) {
  dmmd::SettingOptions options;
  options.use_true_ranks = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dmmd::run_replication(dmmd::Preset::kS4, 0, 1, 1.0, 20240502, options));
  }
}
BENCHMARK(BM_SettingReplication)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
