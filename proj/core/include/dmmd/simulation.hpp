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

#ifndef DMMD_SIMULATION_HPP_
#define DMMD_SIMULATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dmmd/linalg.hpp"
#include "dmmd/signal_solver.hpp"

namespace dmmd {

struct SimulationConfig {
  Index n = 0;
  Index p = 0;
  Index r1 = 0;
  Index r2 = 0;
  Index r_c = 0;
  Index r_r = 0;
  double snr = 1.0;
  std::uint64_t seed = 0;

  RankProfile ranks() const { return {r1, r2, r_c, r_r}; }
  // Throws ParameterError when the position pools cannot hold the bases:
  // r_c <= n/2, r_k - r_c <= n/4, and likewise on p.
  void validate() const;
};

struct GroundTruth {
  Matrix a1;
  Matrix a2;
  OrthonormalBasis m_true;  // standard basis vectors at the joint row positions
  OrthonormalBasis n_true;  // standard basis vectors at the joint column positions
  Matrix x1;
  Matrix x2;
  double sigma1 = 0.0;
  double sigma2 = 0.0;

  const Matrix& a(int view) const { return view == 0 ? a1 : a2; }
  const Matrix& x(int view) const { return view == 0 ? x1 : x2; }
};

GroundTruth generate(const SimulationConfig& cfg);

// Signal parts of the planted pair in the same layout as a fitted decomposition.
DmmdDecomposition planted_parts(const GroundTruth& truth, const RankProfile& ranks);

struct ConformanceReport {
  bool ok = true;
  std::vector<std::string> failures;
};

// Checks that the planted pair satisfies the unique-decomposition conditions
// in both directions: the joint basis equals the intersection of the signal
// spaces, individual parts are orthogonal to it, and the individual spaces
// intersect trivially.
ConformanceReport verify_ground_truth(const GroundTruth& truth, const RankProfile& ranks,
                                      double tol = 1e-8);

// ||est - truth||_F^2 / ||truth||_F^2.
double relative_error(const Matrix& est, const Matrix& truth);

// ||est - truth||_F^2.
double absolute_error(const Matrix& est, const Matrix& truth);

// sqrt(k - sum cos^2(theta_i)) / sqrt(k), k = min(dim u, dim v).
double chordal_distance(const OrthonormalBasis& u, const OrthonormalBasis& v);

}  // namespace dmmd

#endif  // DMMD_SIMULATION_HPP_
