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

#include "dmmd/rank_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dmmd/errors.hpp"

namespace dmmd {
namespace {

// Split without order validation; `values` may run in either direction and
// the leading group is always the first q entries.
PlSplit split_impl(std::span<const double> values) {
  const Index m = static_cast<Index>(values.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  const double floor = 1e-12 * range * range + 1e-300;

  const auto group_stats = [&](Index begin, Index end, double& mean, double& ss) {
    mean = 0.0;
    for (Index i = begin; i < end; ++i) mean += values[i];
    mean /= static_cast<double>(end - begin);
    ss = 0.0;
    for (Index i = begin; i < end; ++i) {
      const double d = values[i] - mean;
      ss += d * d;
    }
  };

  PlSplit best;
  best.loglik_curve.reserve(m - 1);
  const double md = static_cast<double>(m);
  for (Index q = 1; q < m; ++q) {
    double mu1 = 0.0, mu2 = 0.0, ss1 = 0.0, ss2 = 0.0;
    group_stats(0, q, mu1, ss1);
    group_stats(q, m, mu2, ss2);
    // (q-1) s1^2 + (m-q-1) s2^2 is the pooled sum of squared deviations.
    const double sigma2 = std::max((ss1 + ss2) / md, floor);
    const double ll = -0.5 * md * std::log(2.0 * std::numbers::pi * sigma2) -
                      (ss1 + ss2) / (2.0 * sigma2);
    best.loglik_curve.push_back(ll);
    if (q == 1 || ll > best.loglik) {
      best.q_hat = q;
      best.loglik = ll;
      best.sigma2 = sigma2;
      best.mu1 = mu1;
      best.mu2 = mu2;
    }
  }

  std::vector<double> sorted = best.loglik_curve;
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  double median = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + mid);
    median = 0.5 * (median + lower);
  }
  best.low_confidence = (best.loglik - median) < 1e-6 * std::abs(median);
  return best;
}

}  // namespace

PlSplit profile_likelihood_split(std::span<const double> values) {
  if (values.size() < 2) {
    throw ParameterError("profile_likelihood_split: need at least 2 values, got " +
                         std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InputError("profile_likelihood_split: non-finite value");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw InputError("profile_likelihood_split: values must be non-increasing");
    }
  }
  return split_impl(values);
}

TotalRankEstimate estimate_total_rank(const Matrix& x) {
  require_finite(x, "estimate_total_rank");
  if (std::min(x.rows(), x.cols()) < 2) {
    throw ParameterError("estimate_total_rank: min(rows, cols) must be >= 2");
  }
  TotalRankEstimate out;
  out.singular_values = singular_values(x);
  out.split = profile_likelihood_split(
      std::span<const double>(out.singular_values.data(), out.singular_values.size()));
  out.rank = out.split.q_hat;
  return out;
}

JointRankEstimate estimate_joint_rank(std::span<const double> angles) {
  if (angles.empty()) {
    throw ParameterError("estimate_joint_rank: no angles");
  }
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  std::vector<double> augmented;
  augmented.reserve(angles.size() + 2);
  augmented.push_back(0.0);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double a = angles[i];
    if (!(a >= 0.0 && a <= kHalfPi)) {
      throw InputError("estimate_joint_rank: angle outside [0, pi/2]");
    }
    if (i > 0 && a < angles[i - 1]) {
      throw InputError("estimate_joint_rank: angles must be non-decreasing");
    }
    augmented.push_back(a);
  }
  augmented.push_back(kHalfPi);

  JointRankEstimate out;
  out.split = split_impl(augmented);
  const Index l = static_cast<Index>(angles.size());
  out.rank = std::clamp<Index>(out.split.q_hat - 1, 0, l);
  return out;
}

}  // namespace dmmd
