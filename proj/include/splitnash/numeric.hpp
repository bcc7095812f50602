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

// Optimization substrate: intervals and boxes, box projection, 1-D
// maximization (grid scan + golden section), finite-difference gradients and
// projected gradient ascent. Everything here is a pure function of its
// arguments.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "splitnash/error.hpp"

namespace splitnash {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Closed interval [lo, hi] with finite lo; hi may be +infinity.
class Interval {
 public:
  explicit Interval(double lo, double hi = kInfinity) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo)) throw ValidationError("interval lower end must be finite");
    if (std::isnan(hi) || hi == -kInfinity || hi < lo) {
      std::ostringstream os;
      os << "invalid interval [" << lo << ", " << hi << "]";
      throw ValidationError(os.str());
    }
  }

  static Interval nonnegative() { return Interval(0.0); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool bounded() const { return hi_ != kInfinity; }
  double width() const { return hi_ - lo_; }

  bool contains(double x, double slack = 0.0) const {
    return x >= lo_ - slack && x <= hi_ + slack;
  }
  double clamp(double x) const { return std::min(std::max(x, lo_), hi_); }

  // Upper end of the searched or sampled range. Unbounded intervals are cut
  // at `cap` (or lo + cap when lo already exceeds the cap).
  double truncated_hi(double cap) const {
    if (bounded()) return hi_;
    return lo_ < cap ? cap : lo_ + cap;
  }

  bool operator==(const Interval&) const = default;

 private:
  double lo_;
  double hi_;
};

// Cartesian product of intervals, one per coordinate.
class Box {
 public:
  explicit Box(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    if (intervals_.empty()) throw ValidationError("box must have at least one coordinate");
  }
  Box(std::initializer_list<Interval> intervals)
      : Box(std::vector<Interval>(intervals)) {}

  static Box uniform(std::size_t dim, const Interval& interval) {
    return Box(std::vector<Interval>(dim, interval));
  }

  std::size_t size() const { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }
  const std::vector<Interval>& intervals() const { return intervals_; }

  bool contains(std::span<const double> point, double slack = 0.0) const {
    if (point.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!intervals_[i].contains(point[i], slack)) return false;
    }
    return true;
  }

  bool operator==(const Box&) const = default;

 private:
  std::vector<Interval> intervals_;
};

struct SearchBudget {
  double grid_step = 1e-2;
  int max_iterations = 500;
  double truncation_cap = 1e3;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(grid_step > 0) || !std::isfinite(grid_step))
      throw ValidationError("grid_step must be positive");
    if (max_iterations <= 0) throw ValidationError("max_iterations must be positive");
    if (!(truncation_cap > 0) || !std::isfinite(truncation_cap))
      throw ValidationError("truncation_cap must be positive");
    if (!(tolerance > 0) || !std::isfinite(tolerance))
      throw ValidationError("tolerance must be positive");
  }

  bool operator==(const SearchBudget&) const = default;
};

namespace detail {

// Upper bound on coarse-scan points in maximize_1d; wide ranges get a
// coarser scan step instead of more points.
inline constexpr std::size_t kMaxCoarsePoints = 4096;

inline void check_finite(double value, double at) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "non-finite objective value " << value << " at " << at;
    throw DomainError(os.str());
  }
}

inline void check_finite(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite objective value");
}

// Bit-portable uniform draw in [0, 1).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Relative slack used for comparisons between utility values that may be
// large in magnitude.
inline double slack(double tol, double a, double b) {
  return tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool approx_leq(double a, double b, double tol) { return a <= b + slack(tol, a, b); }

inline double inf_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace detail

inline std::vector<double> project_box(std::span<const double> point, const Box& box) {
  if (point.size() != box.size()) {
    throw DimensionError("project_box: point has " + std::to_string(point.size()) +
                         " coordinates, box has " + std::to_string(box.size()));
  }
  std::vector<double> out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) out[i] = box[i].clamp(point[i]);
  return out;
}

struct Maximum1d {
  double argmax;
  double value;
};

// Maximizes f over the interval. Unbounded intervals are searched on
// [lo, truncation_cap], doubling the range while f still increases at its
// right end. A coarse grid scan picks the best bracket, which golden-section
// search then refines. Ties go to the smaller argument.
template <typename F>
Maximum1d maximize_1d(F&& f, const Interval& interval, const SearchBudget& budget) {
  budget.validate();
  auto eval = [&](double x) {
    const double v = f(x);
    detail::check_finite(v, x);
    return v;
  };

  const double lo = interval.lo();
  double hi = interval.truncated_hi(budget.truncation_cap);
  if (!interval.bounded()) {
    for (int k = 0; k < budget.max_iterations; ++k) {
      const double probe = std::min(budget.grid_step, 0.5 * (hi - lo));
      if (!(eval(hi) > eval(hi - probe))) break;
      hi = lo + 2.0 * (hi - lo);
    }
  }
  if (hi == lo) return {lo, eval(lo)};

  const double width = hi - lo;
  auto n = static_cast<std::size_t>(std::ceil(width / budget.grid_step));
  n = std::clamp<std::size_t>(n, 2, detail::kMaxCoarsePoints);
  const double step = width / static_cast<double>(n);

  std::size_t best_k = 0;
  double best_x = lo;
  double best_v = eval(lo);
  for (std::size_t k = 1; k <= n; ++k) {
    const double x = k == n ? hi : lo + static_cast<double>(k) * step;
    const double v = eval(x);
    if (v > best_v) {
      best_k = k;
      best_x = x;
      best_v = v;
    }
  }

  double a = best_k == 0 ? lo : lo + static_cast<double>(best_k - 1) * step;
  double b = best_k == n ? hi : lo + static_cast<double>(best_k + 1) * step;
  b = std::min(b, hi);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < 200; ++it) {
    if (b - a <= 1e-11 * std::max({1.0, std::abs(a), std::abs(b)})) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fm = eval(mid);

  // Candidates in ascending order so strict comparison keeps the smaller x.
  std::pair<double, double> candidates[] = {{c, fc}, {mid, fm}, {d, fd}};
  std::sort(std::begin(candidates), std::end(candidates));
  Maximum1d result{best_x, best_v};
  for (const auto& [x, v] : candidates) {
    if (v > result.value || (v == result.value && x < result.argmax)) result = {x, v};
  }
  return result;
}

// Central differences with step 1e-6 * max(1, |x_i|); one-sided where the
// central stencil would leave the box.
template <typename F>
std::vector<double> finite_diff_gradient(F&& f, std::span<const double> point, const Box& box) {
  if (point.size() != box.size()) throw DimensionError("finite_diff_gradient: dimension mismatch");
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size(), 0.0);
  auto eval = [&](std::span<const double> p) {
    const double v = f(p);
    detail::check_finite(v);
    return v;
  };
  const double f0 = eval(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const Interval& iv = box[i];
    const double h = 1e-6 * std::max(1.0, std::abs(xi));
    const bool room_up = xi + h <= iv.hi();
    const bool room_down = xi - h >= iv.lo();
    if (room_up && room_down) {
      x[i] = xi + h;
      const double fp = eval(x);
      x[i] = xi - h;
      const double fm = eval(x);
      grad[i] = (fp - fm) / (2.0 * h);
    } else if (room_up || room_down) {
      const double step = room_up ? h : -h;
      x[i] = xi + step;
      grad[i] = (eval(x) - f0) / step;
    } else {
      // Interval narrower than the stencil: use whatever room exists.
      const double up = iv.hi() - xi;
      const double down = xi - iv.lo();
      const double step = up >= down ? up : -down;
      if (step != 0.0) {
        x[i] = xi + step;
        grad[i] = (eval(x) - f0) / step;
      }
    }
    x[i] = xi;
  }
  return grad;
}

struct BoxMaximum {
  std::vector<double> point;
  double value;
};

// Projected gradient ascent with backtracking: each iteration starts at
// eta = 1 and halves until the projected step improves f.
template <typename F>
BoxMaximum projected_gradient_ascent(F&& f, const Box& box, std::span<const double> start,
                                     const SearchBudget& budget) {
  budget.validate();
  if (start.size() != box.size()) throw DimensionError("projected_gradient_ascent: dimension mismatch");
  if (!box.contains(start)) throw InfeasibleProfile("projected_gradient_ascent: start outside box");

  std::vector<double> x(start.begin(), start.end());
  double fx = f(std::span<const double>(x));
  detail::check_finite(fx);
  std::vector<double> trial(x.size());
  for (int it = 0; it < budget.max_iterations; ++it) {
    const std::vector<double> grad = finite_diff_gradient(f, x, box);
    bool improved = false;
    double fy = fx;
    for (double eta = 1.0; eta > 1e-14; eta *= 0.5) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = box[i].clamp(x[i] + eta * grad[i]);
      fy = f(std::span<const double>(trial));
      detail::check_finite(fy);
      if (fy > fx) {
        improved = true;
        break;
      }
    }
    if (!improved) break;
    const double change = detail::inf_distance(trial, x);
    x.swap(trial);
    fx = fy;
    if (change < budget.tolerance) break;
  }
  return {std::move(x), fx};
}

}  // namespace splitnash
