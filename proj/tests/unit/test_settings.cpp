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

#include <cmath>
#include <sstream>

#include "dmmd/errors.hpp"
#include "dmmd/settings.hpp"

namespace dmmd {
namespace {

std::string table(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

TEST(Presets, NamesRoundTrip) {
  for (Preset p : {Preset::kS1, Preset::kS2, Preset::kS3, Preset::kS4, Preset::kS5,
                   Preset::kS6, Preset::kTcga, Preset::kCustom}) {
    ASSERT_TRUE(parse_preset(preset_name(p)).has_value());
    EXPECT_EQ(*parse_preset(preset_name(p)), p);
  }
  EXPECT_FALSE(parse_preset("S7").has_value());
  EXPECT_FALSE(parse_preset("s1").has_value());
}

TEST(Presets, SettingFourTruth) {
  const SimulationConfig c = replication_config(Preset::kS4, 0, 1, 1.0, 11);
  EXPECT_EQ(c.n, 240);
  EXPECT_EQ(c.p, 200);
  EXPECT_EQ(c.ranks(), (RankProfile{20, 18, 4, 3}));
  EXPECT_EQ(c.snr, 1.0);
  EXPECT_EQ(replication_config(Preset::kS5, 0, 1, 1.0, 11).snr, 0.5);
}

TEST(Presets, SettingFourTableCarriesTruth) {
  SettingOptions opts;
  opts.use_true_ranks = true;
  const auto rows = run_setting(Preset::kS4, 1, 1.0, 5, opts);
  ASSERT_FALSE(rows.empty());
  for (const ResultRow& row : rows) {
    EXPECT_EQ(row.truth, (RankProfile{20, 18, 4, 3}));
    EXPECT_EQ(row.fitted, (RankProfile{20, 18, 4, 3}));
    EXPECT_NE(row.metric, "failed") << row.note;
  }
}

TEST(Presets, SettingThreeFirstQuarterHasNoJointStructure) {
  const int reps = 8;
  for (int rep = 0; rep < reps; ++rep) {
    const SimulationConfig c = replication_config(Preset::kS3, rep, reps, 1.0, 3);
    if (rep < reps / 4) {
      EXPECT_EQ(c.r_c, 0);
      EXPECT_EQ(c.r_r, 0);
    } else if (rep < reps / 2) {
      EXPECT_EQ(c.r_c, 0);
      EXPECT_EQ(c.r_r, std::min(c.r1, c.r2));
    } else if (rep < 3 * reps / 4) {
      EXPECT_EQ(c.r_c, std::min(c.r1, c.r2));
      EXPECT_EQ(c.r_r, 0);
    } else {
      EXPECT_EQ(c.r_c, std::min(c.r1, c.r2));
      EXPECT_EQ(c.r_r, std::min(c.r1, c.r2));
    }
  }
}

TEST(Presets, RanksWithinPublishedRanges) {
  for (int rep = 0; rep < 40; ++rep) {
    const SimulationConfig c = replication_config(Preset::kS1, rep, 40, 1.0, 17);
    EXPECT_GE(c.r1, 2);
    EXPECT_LE(c.r1, 20);
    EXPECT_GE(c.r_c, 1);
    EXPECT_LE(c.r_c, std::min<Index>({5, c.r1, c.r2}));
    EXPECT_LE(c.r_r, std::min<Index>({5, c.r1, c.r2}));
  }
  const SimulationConfig t = replication_config(Preset::kTcga, 0, 1, 1.0, 1);
  EXPECT_EQ(t.n, 88);
  EXPECT_EQ(t.p, 736);
  EXPECT_EQ(t.ranks(), (RankProfile{8, 6, 0, 2}));
}

TEST(Presets, ScaleFloors) {
  const SimulationConfig c = replication_config(Preset::kS4, 0, 1, 0.01, 1);
  EXPECT_EQ(c.n, 8);
  EXPECT_EQ(c.p, 8);
  EXPECT_GE(c.r1, 1);
  EXPECT_GE(c.r_c, 1);
  EXPECT_NO_THROW(c.validate());
  const SimulationConfig half = replication_config(Preset::kS4, 0, 1, 0.5, 1);
  EXPECT_EQ(half.n, 120);
  EXPECT_EQ(half.ranks(), (RankProfile{10, 9, 2, 2}));
  EXPECT_THROW(replication_config(Preset::kS4, 0, 1, 0.0, 1), ParameterError);
  EXPECT_THROW(replication_config(Preset::kS4, 0, 1, 1.5, 1), ParameterError);
  EXPECT_THROW(replication_config(Preset::kS4, 1, 1, 1.0, 1), ParameterError);
}

TEST(Presets, CustomUsesGivenShape) {
  SimulationConfig custom{40, 32, 4, 3, 1, 2, 2.0, 0};
  const SimulationConfig c = replication_config(Preset::kCustom, 0, 1, 1.0, 1, custom);
  EXPECT_EQ(c.n, 40);
  EXPECT_EQ(c.ranks(), (RankProfile{4, 3, 1, 2}));
  EXPECT_EQ(c.snr, 2.0);
}

TEST(Harness, SameSeedGivesIdenticalTables) {
  SettingOptions opts;
  opts.with_dmmd_i = true;
  const auto a = table(run_setting(Preset::kS1, 2, 0.2, 42, opts));
  const auto b = table(run_setting(Preset::kS1, 2, 0.2, 42, opts));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, table(run_setting(Preset::kS1, 2, 0.2, 43, opts)));
}

TEST(Harness, ThreadCountDoesNotChangeOutput) {
  SettingOptions serial;
  SettingOptions parallel;
  parallel.threads = 3;
  EXPECT_EQ(table(run_setting(Preset::kS6, 4, 0.2, 8, serial)),
            table(run_setting(Preset::kS6, 4, 0.2, 8, parallel)));
}

TEST(Harness, EmitsExpectedMetrics) {
  SettingOptions opts;
  opts.use_true_ranks = true;
  opts.with_dmmd_i = true;
  const auto rows = run_setting(Preset::kS4, 1, 0.25, 1, opts);
  const auto has = [&](const std::string& method, const std::string& quantity,
                       const std::string& metric) {
    for (const auto& r : rows) {
      if (r.method == method && r.quantity == quantity && r.metric == metric) return true;
    }
    return false;
  };
  EXPECT_TRUE(has("SVD", "A", "relative_error"));
  EXPECT_TRUE(has("DMMD", "A", "relative_error"));
  EXPECT_TRUE(has("DMMD", "Jc", "absolute_error"));
  EXPECT_TRUE(has("DMMD", "M", "chordal_distance"));
  EXPECT_TRUE(has("DMMD-i", "A", "relative_error"));
  EXPECT_TRUE(has("DMMD-i", "outer_iterations", "value"));
}

TEST(Harness, CsvHeaderMatchesColumns) {
  const std::string csv = table({});
  std::string header;
  for (std::size_t i = 0; i < result_columns().size(); ++i) {
    header += (i ? "," : "") + result_columns()[i];
  }
  EXPECT_EQ(csv, header + "\n");
}

TEST(Harness, RejectsBadReps) {
  EXPECT_THROW(run_setting(Preset::kS1, 0, 1.0, 1), ParameterError);
}

}  // namespace
}  // namespace dmmd
