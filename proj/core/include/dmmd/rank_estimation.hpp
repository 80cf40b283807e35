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

#ifndef DMMD_RANK_ESTIMATION_HPP_
#define DMMD_RANK_ESTIMATION_HPP_

// Profile-likelihood split of an ordered sequence into a "large" leading
// group and a "small" trailing group, each modelled as Gaussian with a common
// variance. Used on singular values (total rank) and on principal angles
// bracketed by 0 and pi/2 (joint rank).

#include <span>
#include <vector>

#include "dmmd/linalg.hpp"

namespace dmmd {

struct PlSplit {
  Index q_hat = 0;       // size of the leading group, 1 <= q_hat <= m - 1
  double mu1 = 0.0;      // leading-group mean
  double mu2 = 0.0;      // trailing-group mean
  double sigma2 = 0.0;   // pooled variance after flooring
  double loglik = 0.0;   // log-likelihood at q_hat
  // loglik for q = 1..m-1, index q-1.
  std::vector<double> loglik_curve;
  // Advisory: the likelihood curve is nearly flat, so the split carries
  // little evidence (e.g. a pure-noise spectrum).
  bool low_confidence = false;
};

// values must be non-increasing with at least two entries. Ties in the
// maximized likelihood resolve to the smallest q.
PlSplit profile_likelihood_split(std::span<const double> values);

struct TotalRankEstimate {
  Index rank = 0;
  PlSplit split;
  Vector singular_values;
};

// Profile-likelihood split over all min(rows, cols) singular values of x.
TotalRankEstimate estimate_total_rank(const Matrix& x);

struct JointRankEstimate {
  Index rank = 0;
  PlSplit split;  // computed on the augmented angle sequence
};

// angles: principal angles in [0, pi/2], non-decreasing, at least one.
// Brackets them with artificial 0 and pi/2, splits, and returns q_hat - 1
// clamped to [0, angles.size()].
JointRankEstimate estimate_joint_rank(std::span<const double> angles);

}  // namespace dmmd

#endif  // DMMD_RANK_ESTIMATION_HPP_
