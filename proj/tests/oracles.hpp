// Copyright 2026 The SplitNash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force reference computations. Nothing here calls the library's
// optimizers, share rules or membership tests; inputs are plain numbers or
// closures so a bug in the library cannot leak into its own oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// max of f on {lo, lo + step, ..., hi}; returns (argmax, value).
inline std::pair<double, double> grid_max(const std::function<double(double)>& f, double lo, double hi,
                                          double step) {
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  double best_x = lo, best_v = f(lo);
  for (long k = 1; k <= n; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return {best_x, best_v};
}

// Worked-example utilities, transcribed directly.
inline double e1_a(double x, double y, double z) { return x * y * z - 4 * x * x; }
inline double e1_b(double x, double y, double z) { return x * x * y * z - y * y * y * y / 8; }
inline double e1_c(double x, double y, double z) { return std::sqrt(x * y * z) - z / 2; }
inline double e2_d(double s, double t) { return s * t / 2 - s * s / 3; }
inline double e2_e(double s, double t) { return 48 * std::sqrt(s) * t - t * t * t * t / 48; }

// Regret of player c at (x, y, z) against a grid scan of [0, hi].
inline double e1_c_grid_regret(double x, double y, double z, double step, double hi) {
  const auto best = grid_max([&](double w) { return e1_c(x, y, w); }, 0.0, hi, step);
  return std::max(0.0, best.second - e1_c(x, y, z));
}

// Minimum of ||A x - (1, 0)|| over x >= 0 for A = [[1,2,1],[2,1,2]]. With
// w = x + z the objective is (w + 2y - 1)^2 + (2w + y)^2; the unconstrained
// minimizer is infeasible, and the best edge is w = 0, y = 2/5.
inline double example_unreachable_residual() { return std::sqrt(0.2); }

// Extended duopoly by the book: shares by the sign of p1 - lambda p2.
struct Duopoly {
  double c1, c2, base = 10, a = 1, b = 1;

  double demand(double p1, double p2) const { return std::max(0.0, base - a * p1 - b * p2); }
  std::pair<double, double> profit(double p1, double p2) const {
    const double d = demand(p1, p2);
    if (d <= 0) return {0.0, 0.0};
    const double lam = c1 / c2;
    double s1;
    if (std::abs(p1 - lam * p2) <= 1e-12) s1 = c1 / (c1 + c2);
    else s1 = p1 < lam * p2 ? 1.0 : 0.0;
    const double s2 = std::abs(p1 - lam * p2) <= 1e-12 ? c2 / (c1 + c2) : 1.0 - s1;
    return {(p1 - c1) * s1 * d, (p2 - c2) * s2 * d};
  }

  // Deviation set: grid plus the tie price, no precomputation.
  bool grid_nash(double p1, double p2, const std::vector<double>& grid, double tol) const {
    const auto [u1, u2] = profit(p1, p2);
    std::vector<double> dev1 = grid, dev2 = grid;
    dev1.push_back(c1 / c2 * p2);
    dev2.push_back(p1 * c2 / c1);
    for (double q : dev1) {
      if (q >= grid.front() && q <= grid.back() && profit(q, p2).first > u1 + tol) return false;
    }
    for (double q : dev2) {
      if (q >= grid.front() && q <= grid.back() && profit(p1, q).second > u2 + tol) return false;
    }
    return true;
  }
};

// Quadratic split instance f_i = -(x_i - a_i)^2, g_j = -(y_j - b_j)^2:
// z is in T(x, Ax) iff no coordinate of x (resp. Ax) is strictly closer to
// its target than z's (resp. Az's), up to slack.
struct QuadraticSplit {
  std::vector<double> a, b;
  std::vector<std::vector<double>> matrix;

  std::vector<double> image(const std::vector<double>& x) const {
    std::vector<double> y(matrix.size(), 0.0);
    for (std::size_t r = 0; r < matrix.size(); ++r)
      for (std::size_t c = 0; c < x.size(); ++c) y[r] += matrix[r][c] * x[c];
    return y;
  }

  bool t_member(const std::vector<double>& x, const std::vector<double>& z, double tol) const {
    auto leq = [&](double u, double v) { return u <= v + tol * std::max({1.0, std::abs(u), std::abs(v)}); };
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!leq(-(x[i] - a[i]) * (x[i] - a[i]), -(z[i] - a[i]) * (z[i] - a[i]))) return false;
    }
    const auto ax = image(x), az = image(z);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!leq(-(ax[j] - b[j]) * (ax[j] - b[j]), -(az[j] - b[j]) * (az[j] - b[j]))) return false;
    }
    return true;
  }

  // Double loop over the tensor grid.
  std::vector<std::vector<double>> intersection(const std::vector<std::vector<double>>& points, double tol) const {
    std::vector<std::vector<double>> out;
    for (const auto& z : points) {
      bool all = true;
      for (const auto& x : points) {
        if (!t_member(x, z, tol)) {
          all = false;
          break;
        }
      }
      if (all) out.push_back(z);
    }
    return out;
  }
};

inline std::vector<std::vector<double>> tensor_grid_2d(double lo, double hi, std::size_t n) {
  std::vector<std::vector<double>> pts;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> axis;
  for (std::size_t t = 0; t < n; ++t) axis.push_back(t + 1 == n ? hi : lo + static_cast<double>(t) * step);
  for (double x2 : axis)
    for (double x1 : axis) pts.push_back({x1, x2});
  return pts;
}

}  // namespace oracle
