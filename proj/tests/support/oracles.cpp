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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace dmmd::oracle {
namespace {

// Maximizes f over the unit sphere in R^d (d <= 3).
Vec maximize_on_sphere(const std::function<double(const Vec&)>& f, int d) {
  if (d == 1) return Vec::Ones(1);
  auto point = [d](double a, double b) {
    Vec x(d);
    if (d == 2) {
      x << std::cos(a), std::sin(a);
    } else {
      x << std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a);
    }
    return x;
  };
  const int na = d == 2 ? 4000 : 400;
  const int nb = d == 2 ? 1 : 800;
  double best = -1.0, ba = 0.0, bb = 0.0;
  for (int i = 0; i < na; ++i) {
    const double a = std::numbers::pi * i / na;
    for (int j = 0; j < nb; ++j) {
      const double b = 2.0 * std::numbers::pi * j / nb;
      const double val = f(point(a, b));
      if (val > best) {
        best = val;
        ba = a;
        bb = b;
      }
    }
  }
  double step = std::numbers::pi / na;
  while (step > 1e-12) {
    bool moved = false;
    for (int da = -1; da <= 1; ++da) {
      for (int db = -1; db <= 1; ++db) {
        if (d == 2 && db != 0) continue;
        const double a = ba + da * step, b = bb + db * step;
        const double val = f(point(a, b));
        if (val > best) {
          best = val;
          ba = a;
          bb = b;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return point(ba, bb);
}

// Orthonormal basis of the complement of unit vector `a` in R^d.
Mat complement(const Vec& a) {
  const Eigen::Index d = a.size();
  Mat full(d, d);
  full.col(0) = a;
  full.rightCols(d - 1) = Mat::Identity(d, d).leftCols(d - 1);
  Eigen::HouseholderQR<Mat> qr(full);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  return q.rightCols(d - 1);
}

}  // namespace

Mat TestRng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  Mat x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = normal();
  }
  return x;
}

Mat TestRng::orthonormal(Eigen::Index rows, Eigen::Index cols) {
  if (cols == 0) return Mat(rows, 0);
  return householder_basis(gaussian(rows, cols));
}

PlResult brute_force_pl(const std::vector<double>& values) {
  const int m = static_cast<int>(values.size());
  const double range = *std::max_element(values.begin(), values.end()) -
                       *std::min_element(values.begin(), values.end());
  const double floor = 1e-12 * range * range + 1e-300;
  PlResult out;
  double best = -std::numeric_limits<double>::infinity();
  for (int q = 1; q < m; ++q) {
    auto mean = [&](int lo, int hi) {
      double s = 0.0;
      for (int i = lo; i < hi; ++i) s += values[i];
      return s / (hi - lo);
    };
    auto sample_var = [&](int lo, int hi, double mu) {
      if (hi - lo < 2) return 0.0;
      double s = 0.0;
      for (int i = lo; i < hi; ++i) s += (values[i] - mu) * (values[i] - mu);
      return s / (hi - lo - 1);
    };
    const double mu1 = mean(0, q), mu2 = mean(q, m);
    double sigma2 = ((q - 1) * sample_var(0, q, mu1) + (m - q - 1) * sample_var(q, m, mu2)) / m;
    sigma2 = std::max(sigma2, floor);
    double ll = 0.0;
    for (int i = 0; i < m; ++i) {
      const double mu = i < q ? mu1 : mu2;
      ll += -0.5 * std::log(2.0 * std::numbers::pi * sigma2) -
            (values[i] - mu) * (values[i] - mu) / (2.0 * sigma2);
    }
    out.loglik.push_back(ll);
    if (ll > best) {
      best = ll;
      out.q_hat = q;
    }
  }
  return out;
}

std::vector<double> principal_angles_by_search(const Mat& u_in, const Mat& v_in) {
  Mat u = u_in.cols() <= v_in.cols() ? u_in : v_in;
  Mat v = u_in.cols() <= v_in.cols() ? v_in : u_in;
  std::vector<double> angles;
  while (u.cols() > 0) {
    const Mat cross = v.transpose() * u;
    const Vec a = maximize_on_sphere([&](const Vec& x) { return (cross * x).norm(); },
                                     static_cast<int>(u.cols()));
    const double c = std::min(1.0, (cross * a).norm());
    angles.push_back(std::acos(c));
    if (u.cols() == 1) break;
    const Vec b = (cross * a).normalized();
    u = u * complement(a);
    v = v * complement(b);
  }
  return angles;
}

Mat householder_basis(const Mat& x) {
  Eigen::HouseholderQR<Mat> qr(x);
  return qr.householderQ() * Mat::Identity(x.rows(), x.cols());
}

Mat projector(const Mat& q) { return q * q.transpose(); }

double eckart_young_tail(const Mat& x, Eigen::Index k) {
  Eigen::JacobiSVD<Mat> svd(x);
  const Vec s = svd.singularValues();
  return s.tail(s.size() - k).squaredNorm();
}

Mat project_columns(const Mat& x, const Mat& basis) { return basis * (basis.transpose() * x); }

}  // namespace dmmd::oracle
