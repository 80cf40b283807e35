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

#include "report.hpp"

#include <numbers>

#include "dmmd/errors.hpp"

namespace dmmd::cli {
namespace {

using json = nlohmann::ordered_json;

std::vector<double> to_vector(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json optional_value(const std::optional<Index>& v) { return v ? json(*v) : json(nullptr); }
json optional_value(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

json angle_block(const std::vector<double>& radians) {
  std::vector<double> deg;
  deg.reserve(radians.size());
  for (double r : radians) deg.push_back(degrees(r));
  return json{{"radians", radians}, {"degrees", deg}};
}

template <typename T>
std::optional<T> read_optional(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace

double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

RunReport make_report(const PipelineResult& result, const Matrix& x1, const Matrix& x2,
                      const RankOverrides& overrides, Variant variant) {
  RunReport r;
  r.variant = variant == Variant::kPlain ? "plain" : "iterative";
  r.ranks = result.ranks;
  r.overrides = overrides;
  if (result.column_joint.selection) {
    r.rc_low_confidence = result.column_joint.selection->split.low_confidence;
  }
  if (result.row_joint.selection) {
    r.rr_low_confidence = result.row_joint.selection->split.low_confidence;
  }
  r.angles_col = to_vector(result.column_joint.angles.angles);
  r.angles_row = to_vector(result.row_joint.angles.angles);
  const std::array<const Matrix*, 2> xs{&x1, &x2};
  for (int k = 0; k < 2; ++k) {
    ViewReport& v = r.views[k];
    v.variance = variance_explained(*xs[k], result.decomposition.views[k]);
    v.objective_trace = result.fits[k].objective_trace;
    v.iterations = result.fits[k].iterations;
    v.converged = result.fits[k].converged;
    if (result.total_rank[k]) v.total_rank_low_confidence = result.total_rank[k]->split.low_confidence;
  }
  r.outer_trace = result.outer_trace;
  r.outer_iterations = result.outer_iterations;
  r.warnings = result.warnings;
  return r;
}

json to_json(const RunReport& r) {
  json views = json::array();
  for (const ViewReport& v : r.views) {
    views.push_back(json{
        {"variance_explained",
         {{"joint_col", v.variance.joint_col},
          {"individual_col", v.variance.individual_col},
          {"joint_row", v.variance.joint_row},
          {"individual_row", v.variance.individual_row},
          {"total_signal", v.variance.total_signal}}},
        {"objective_trace", v.objective_trace},
        {"iterations", v.iterations},
        {"converged", v.converged},
        {"total_rank_low_confidence", optional_value(v.total_rank_low_confidence)},
    });
  }
  json j{
      {"schema_version", 1},
      {"variant", r.variant},
      {"ranks", {{"r1", r.ranks.r1}, {"r2", r.ranks.r2}, {"rc", r.ranks.r_c}, {"rr", r.ranks.r_r}}},
      {"overrides",
       {{"r1", optional_value(r.overrides.r1)},
        {"r2", optional_value(r.overrides.r2)},
        {"rc", optional_value(r.overrides.r_c)},
        {"rr", optional_value(r.overrides.r_r)}}},
      {"joint_rank_low_confidence",
       {{"rc", optional_value(r.rc_low_confidence)}, {"rr", optional_value(r.rr_low_confidence)}}},
      {"angles", {{"column", angle_block(r.angles_col)}, {"row", angle_block(r.angles_row)}}},
      {"views", views},
      {"outer_trace", r.outer_trace},
      {"outer_iterations", r.outer_iterations},
      {"warnings", r.warnings},
      {"config", r.config},
  };
  if (r.timings) j["timings"] = *r.timings;
  return j;
}

RunReport report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != 1) throw InputError("unsupported schema_version");
    RunReport r;
    r.variant = j.at("variant").get<std::string>();
    const json& ranks = j.at("ranks");
    r.ranks = {ranks.at("r1").get<Index>(), ranks.at("r2").get<Index>(),
               ranks.at("rc").get<Index>(), ranks.at("rr").get<Index>()};
    const json& ov = j.at("overrides");
    r.overrides = {read_optional<Index>(ov, "r1"), read_optional<Index>(ov, "r2"),
                   read_optional<Index>(ov, "rc"), read_optional<Index>(ov, "rr")};
    const json& lc = j.at("joint_rank_low_confidence");
    r.rc_low_confidence = read_optional<bool>(lc, "rc");
    r.rr_low_confidence = read_optional<bool>(lc, "rr");
    r.angles_col = j.at("angles").at("column").at("radians").get<std::vector<double>>();
    r.angles_row = j.at("angles").at("row").at("radians").get<std::vector<double>>();
    const json& views = j.at("views");
    if (!views.is_array() || views.size() != 2) throw InputError("views must hold two entries");
    for (std::size_t k = 0; k < 2; ++k) {
      const json& v = views[k];
      const json& ve = v.at("variance_explained");
      ViewReport& out = r.views[k];
      out.variance = {ve.at("joint_col").get<double>(), ve.at("individual_col").get<double>(),
                      ve.at("joint_row").get<double>(), ve.at("individual_row").get<double>(),
                      ve.at("total_signal").get<double>()};
      out.objective_trace = v.at("objective_trace").get<std::vector<double>>();
      out.iterations = v.at("iterations").get<int>();
      out.converged = v.at("converged").get<bool>();
      out.total_rank_low_confidence = read_optional<bool>(v, "total_rank_low_confidence");
    }
    r.outer_trace = j.at("outer_trace").get<std::vector<double>>();
    r.outer_iterations = j.at("outer_iterations").get<int>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.config = j.at("config");
    if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("report.json: ") + e.what());
  }
}

}  // namespace dmmd::cli
