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

#ifndef DMMD_TOOLS_REPORT_HPP_
#define DMMD_TOOLS_REPORT_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmmd/pipeline.hpp"

namespace dmmd::cli {

struct ViewReport {
  VarianceExplained variance;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  std::optional<bool> total_rank_low_confidence;  // absent when overridden
};

// Schema version 1. Keys:
//   schema_version, variant, ranks{r1,r2,rc,rr}, overrides{r1,r2,rc,rr} (null
//   when estimated), joint_rank_low_confidence{rc,rr} (null when overridden),
//   angles{column,row}{radians,degrees}, views[2]{variance_explained{joint_col,
//   individual_col,joint_row,individual_row,total_signal}, objective_trace,
//   iterations, converged, total_rank_low_confidence}, outer_trace,
//   outer_iterations, warnings, config, timings (only when requested).
struct RunReport {
  std::string variant = "plain";
  RankProfile ranks;
  RankOverrides overrides;
  std::optional<bool> rc_low_confidence;
  std::optional<bool> rr_low_confidence;
  std::vector<double> angles_col;  // radians
  std::vector<double> angles_row;  // radians
  std::array<ViewReport, 2> views;
  std::vector<double> outer_trace;
  int outer_iterations = 0;
  std::vector<std::string> warnings;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::optional<std::map<std::string, double>> timings;
};

RunReport make_report(const PipelineResult& result, const Matrix& x1, const Matrix& x2,
                      const RankOverrides& overrides, Variant variant);

nlohmann::ordered_json to_json(const RunReport& report);

// Throws InputError on a missing key or wrong type.
RunReport report_from_json(const nlohmann::ordered_json& j);

double degrees(double radians);

}  // namespace dmmd::cli

#endif  // DMMD_TOOLS_REPORT_HPP_
