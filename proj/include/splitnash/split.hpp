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

// Split Nash equilibrium problems: two games N and M related by a matrix A
// mapping N-profiles to M-profiles. A split equilibrium is a Nash equilibrium
// x of N such that Ax is a Nash equilibrium of M.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splitnash/error.hpp"
#include "splitnash/game.hpp"
#include "splitnash/numeric.hpp"
#include "splitnash/parallel.hpp"

namespace splitnash {

// Dense row-major matrix; row block j of the rows realizes the j-th player
// block of the target game.
class LinearOperator {
 public:
  LinearOperator(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("operator must have at least one row and column");
    if (entries_.size() != rows * cols) throw DimensionError("operator entry count does not match shape");
    for (double e : entries_) {
      if (!std::isfinite(e)) throw ValidationError("operator entries must be finite");
    }
  }

  static LinearOperator from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DimensionError("operator must have at least one row");
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw DimensionError("ragged operator rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return LinearOperator(rows.size(), rows.front().size(), std::move(flat));
  }

  static LinearOperator identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return LinearOperator(n, n, std::move(e));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(entries_).subspan(r * cols_, cols_);
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != cols_) {
      throw DimensionError("operator expects " + std::to_string(cols_) + " inputs, got " +
                           std::to_string(x.size()));
    }
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols_; ++c) s += entries_[r * cols_ + c] * x[c];
      y[r] = s;
    }
    return y;
  }

  // A^T y
  std::vector<double> apply_transpose(std::span<const double> y) const {
    std::vector<double> x(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) x[c] += entries_[r * cols_ + c] * y[r];
    }
    return x;
  }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < rows_; ++r) out.emplace_back(row(r).begin(), row(r).end());
    return out;
  }

  bool operator==(const LinearOperator&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

inline Profile apply_operator(const LinearOperator& op, const Profile& x) { return Profile(op.apply(x.span())); }

struct ImageRange {
  double lo;  // may be -infinity
  double hi;  // may be +infinity
};

struct RelatednessReport {
  bool holds = false;
  std::vector<ImageRange> image;          // exact per-coordinate range of A S_N
  std::vector<std::size_t> violated_rows; // coordinates where the range leaves S_M
};

namespace detail {

// a * [lo, hi] as an interval, with 0 * inf taken as 0.
inline ImageRange scale_interval(double a, const Interval& iv) {
  if (a == 0.0) return {0.0, 0.0};
  const double p = a * iv.lo();
  const double q = iv.bounded() ? a * iv.hi() : (a > 0 ? kInfinity : -kInfinity);
  return {std::min(p, q), std::max(p, q)};
}

inline RelatednessReport relatedness(const LinearOperator& op, const Box& from, const Box& to) {
  RelatednessReport report;
  report.holds = true;
  for (std::size_t r = 0; r < op.rows(); ++r) {
    ImageRange range{0.0, 0.0};
    for (std::size_t c = 0; c < op.cols(); ++c) {
      const ImageRange term = scale_interval(op(r, c), from[c]);
      range.lo += term.lo;
      range.hi += term.hi;
    }
    report.image.push_back(range);
    if (range.lo < to[r].lo() || range.hi > to[r].hi()) {
      report.holds = false;
      report.violated_rows.push_back(r);
    }
  }
  return report;
}

}  // namespace detail

class SplitProblem {
 public:
  SplitProblem(Game game_n, Game game_m, LinearOperator op)
      : game_n_(std::move(game_n)), game_m_(std::move(game_m)), op_(std::move(op)) {
    if (op_.cols() != game_n_.dimension() || op_.rows() != game_m_.dimension()) {
      throw DimensionError("operator is " + std::to_string(op_.rows()) + "x" + std::to_string(op_.cols()) +
                           " but games need " + std::to_string(game_m_.dimension()) + "x" +
                           std::to_string(game_n_.dimension()));
    }
    relatedness_ = detail::relatedness(op_, game_n_.profile_box(), game_m_.profile_box());
  }

  const Game& game_n() const { return game_n_; }
  const Game& game_m() const { return game_m_; }
  const LinearOperator& op() const { return op_; }
  // Relatedness is recorded, not enforced.
  const RelatednessReport& relatedness() const { return relatedness_; }

  // A x, checked against S_M up to a rounding slack and clamped into it.
  Profile image(const Profile& x) const {
    std::vector<double> y = op_.apply(x.span());
    const Box box = game_m_.profile_box();
    for (std::size_t r = 0; r < y.size(); ++r) {
      const double slack = 1e-9 * std::max(1.0, std::abs(y[r]));
      if (!box[r].contains(y[r], slack)) {
        throw RelatednessViolation("image coordinate " + std::to_string(r) + " = " + std::to_string(y[r]) +
                                   " lies outside the target strategy set");
      }
      y[r] = box[r].clamp(y[r]);
    }
    return Profile(std::move(y));
  }

 private:
  Game game_n_;
  Game game_m_;
  LinearOperator op_;
  RelatednessReport relatedness_;
};

// Interval-arithmetic check of A S_N within S_M.
inline RelatednessReport check_relatedness(const SplitProblem& problem) {
  return detail::relatedness(problem.op(), problem.game_n().profile_box(), problem.game_m().profile_box());
}

struct Preimage {
  std::vector<double> x;
  double residual;  // ||A x - y||_2
};

// Projected gradient on ||A x - y||^2 over the box with step 1 / (2 ||A||_F^2).
inline Preimage least_squares_preimage(const LinearOperator& op, const Box& box, std::span<const double> y,
                                       const SearchBudget& budget) {
  if (y.size() != op.rows() || box.size() != op.cols()) throw DimensionError("least squares: dimension mismatch");
  double frob2 = 0.0;
  for (std::size_t r = 0; r < op.rows(); ++r) {
    for (double a : op.row(r)) frob2 += a * a;
  }
  std::vector<double> zero(op.cols(), 0.0);
  std::vector<double> x = project_box(zero, box);
  auto residual_of = [&](std::span<const double> p) {
    const std::vector<double> ax = op.apply(p);
    double s = 0.0;
    for (std::size_t r = 0; r < ax.size(); ++r) s += (ax[r] - y[r]) * (ax[r] - y[r]);
    return std::sqrt(s);
  };
  if (frob2 == 0.0) return {x, residual_of(x)};

  double ynorm = 0.0;
  for (double v : y) ynorm += v * v;
  ynorm = std::sqrt(ynorm);
  const double target = 0.1 * budget.tolerance * std::max(1.0, ynorm);
  const double step = 1.0 / (2.0 * frob2);
  const int max_iter = std::max(budget.max_iterations, 1) * 100;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> r = op.apply(x);
    double rnorm = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] -= y[k];
      rnorm += r[k] * r[k];
    }
    if (std::sqrt(rnorm) <= target) break;
    const std::vector<double> g = op.apply_transpose(r);
    double change = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      const double next = box[c].clamp(x[c] - 2.0 * step * g[c]);
      change = std::max(change, std::abs(next - x[c]));
      x[c] = next;
    }
    if (change <= 1e-15 * std::max(1.0, ynorm)) break;
  }
  return {x, residual_of(x)};
}

struct SurjectivityWitness {
  std::vector<double> target;
  std::vector<double> best_preimage;
  double residual;
};

struct SurjectivityReport {
  bool surjective_on_samples = false;
  std::size_t samples = 0;
  double max_residual = 0.0;
  std::vector<SurjectivityWitness> failures;
};

// Samples targets in S_M (interior-biased, unbounded ends cut at the
// truncation cap) and solves a box-constrained least-squares preimage for
// each.
inline SurjectivityReport check_surjectivity(const SplitProblem& problem, std::size_t samples, std::uint64_t seed,
                                             const SearchBudget& budget = {}) {
  const Box to = problem.game_m().profile_box();
  const Box from = problem.game_n().profile_box();
  std::mt19937_64 rng(seed);
  SurjectivityReport report;
  report.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> y(to.size());
    double ynorm = 0.0;
    for (std::size_t k = 0; k < to.size(); ++k) {
      const double lo = to[k].lo();
      const double hi = to[k].truncated_hi(budget.truncation_cap);
      y[k] = lo + (0.05 + 0.9 * detail::uniform01(rng)) * (hi - lo);
      ynorm += y[k] * y[k];
    }
    Preimage pre = least_squares_preimage(problem.op(), from, y, budget);
    report.max_residual = std::max(report.max_residual, pre.residual);
    if (pre.residual > budget.tolerance * std::max(1.0, std::sqrt(ynorm))) {
      report.failures.push_back({std::move(y), std::move(pre.x), pre.residual});
    }
  }
  report.surjective_on_samples = report.failures.empty();
  return report;
}

struct SplitReport {
  bool verdict = false;
  double tolerance = 0.0;
  Profile profile;
  Profile image;
  NashReport game_n;
  NashReport game_m;
};

inline SplitReport verify_split_equilibrium(const SplitProblem& problem, const Profile& x,
                                            const SearchBudget& budget) {
  SplitReport report;
  report.tolerance = budget.tolerance;
  report.profile = x;
  report.game_n = verify_nash(problem.game_n(), x, budget);
  report.image = problem.image(x);
  report.game_m = verify_nash(problem.game_m(), report.image, budget);
  report.verdict = report.game_n.verdict && report.game_m.verdict;
  return report;
}

// Nash equilibria of N (from solve_nash) whose images are equilibria of M.
inline std::vector<Profile> solve_split(const SplitProblem& problem, const SearchBudget& budget,
                                        const NashSolveOptions& options = {}) {
  std::vector<Profile> out;
  for (const Profile& x : solve_nash(problem.game_n(), budget, options)) {
    try {
      if (verify_split_equilibrium(problem, x, budget).verdict) out.push_back(x);
    } catch (const RelatednessViolation&) {
    }
  }
  return out;
}

enum class CdpProperty {
  kJoint,             // the coupled either/or of the CDP definition
  kVectorFormN,       // F(u, w) <= f(w) or F(v, w) <= f(w)
  kVectorFormM,       // the same on images in game M
  kMinDominanceN,     // min(f_i(u_i, w_-i), f_i(v_i, w_-i)) <= f_i(w)
  kMinDominanceM,
};

inline const char* to_string(CdpProperty p) {
  switch (p) {
    case CdpProperty::kJoint: return "joint";
    case CdpProperty::kVectorFormN: return "vector_form_n";
    case CdpProperty::kVectorFormM: return "vector_form_m";
    case CdpProperty::kMinDominanceN: return "min_dominance_n";
    case CdpProperty::kMinDominanceM: return "min_dominance_m";
  }
  return "?";
}

struct CdpWitness {
  CdpProperty property;
  Profile u;
  Profile v;
  double lambda;
  std::optional<std::size_t> player;  // set for min-dominance witnesses
};

struct CdpReport {
  std::size_t samples_tested = 0;
  std::size_t image_checks_skipped = 0;  // samples whose images left S_M
  std::vector<CdpWitness> joint_failures;
  std::vector<CdpWitness> vector_form_failures;
  std::vector<CdpWitness> min_dominance_failures;
};

namespace detail {

struct CdpOutcome {
  bool images_feasible = true;
  bool joint = true;
  bool vector_n = true;
  bool vector_m = true;
  std::vector<std::size_t> min_dom_n;  // failing players
  std::vector<std::size_t> min_dom_m;
};

inline std::vector<std::size_t> min_dominance_failures(const Game& game, const Profile& u, const Profile& v,
                                                       const Profile& w, double tol) {
  const std::vector<double> fu = diagonal_payoff(game, u, w);
  const std::vector<double> fv = diagonal_payoff(game, v, w);
  const std::vector<double> fw = game.utilities(w);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fw.size(); ++i) {
    if (!approx_leq(std::min(fu[i], fv[i]), fw[i], tol)) out.push_back(i);
  }
  return out;
}

inline CdpOutcome evaluate_cdp(const SplitProblem& problem, const Profile& u, const Profile& v, double lambda,
                               double tol) {
  const Game& gn = problem.game_n();
  const Game& gm = problem.game_m();
  std::vector<double> wv(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) wv[k] = lambda * u[k] + (1.0 - lambda) * v[k];
  const Profile w(project_box(wv, gn.profile_box()));

  CdpOutcome out;
  const std::vector<double> fw = gn.utilities(w);
  const bool n_u = order_leq(diagonal_payoff(gn, u, w), fw, tol);
  const bool n_v = order_leq(diagonal_payoff(gn, v, w), fw, tol);
  out.vector_n = n_u || n_v;
  out.min_dom_n = min_dominance_failures(gn, u, v, w, tol);

  Profile au, av, aw;
  try {
    au = problem.image(u);
    av = problem.image(v);
    aw = problem.image(w);
  } catch (const RelatednessViolation&) {
    out.images_feasible = false;
    out.joint = true;
    return out;
  }
  const std::vector<double> gw = gm.utilities(aw);
  const bool m_u = order_leq(diagonal_payoff(gm, au, aw), gw, tol);
  const bool m_v = order_leq(diagonal_payoff(gm, av, aw), gw, tol);
  out.vector_m = m_u || m_v;
  out.joint = (n_u && m_u) || (n_v && m_v);
  out.min_dom_m = min_dominance_failures(gm, au, av, aw, tol);
  return out;
}

}  // namespace detail

// Samples (u, v, lambda) and records violations of the joint CDP condition,
// its vector-form halves, and the per-component min-dominance property.
// Every witness replays: re-evaluating its (u, v, lambda) reproduces the
// violation.
inline CdpReport cdp_sample_check(const SplitProblem& problem, std::size_t samples, std::uint64_t seed,
                                  const SearchBudget& budget = {}) {
  const Box box = problem.game_n().profile_box();
  std::mt19937_64 rng(seed);
  CdpReport report;
  report.samples_tested = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> u(box.size()), v(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) {
      const double hi = box[k].truncated_hi(budget.truncation_cap);
      u[k] = detail::uniform(rng, box[k].lo(), hi);
      v[k] = detail::uniform(rng, box[k].lo(), hi);
    }
    const double lambda = detail::uniform01(rng);
    const Profile pu(std::move(u));
    const Profile pv(std::move(v));
    const detail::CdpOutcome o = detail::evaluate_cdp(problem, pu, pv, lambda, budget.tolerance);
    if (!o.images_feasible) ++report.image_checks_skipped;
    if (!o.joint) report.joint_failures.push_back({CdpProperty::kJoint, pu, pv, lambda, std::nullopt});
    if (!o.vector_n) report.vector_form_failures.push_back({CdpProperty::kVectorFormN, pu, pv, lambda, std::nullopt});
    if (!o.vector_m) report.vector_form_failures.push_back({CdpProperty::kVectorFormM, pu, pv, lambda, std::nullopt});
    for (std::size_t i : o.min_dom_n)
      report.min_dominance_failures.push_back({CdpProperty::kMinDominanceN, pu, pv, lambda, i});
    for (std::size_t j : o.min_dom_m)
      report.min_dominance_failures.push_back({CdpProperty::kMinDominanceM, pu, pv, lambda, j});
  }
  return report;
}

// Re-evaluates a witness; true when the recorded violation reproduces.
inline bool replay_cdp_witness(const SplitProblem& problem, const CdpWitness& w, double tolerance) {
  const detail::CdpOutcome o = detail::evaluate_cdp(problem, w.u, w.v, w.lambda, tolerance);
  switch (w.property) {
    case CdpProperty::kJoint: return !o.joint;
    case CdpProperty::kVectorFormN: return !o.vector_n;
    case CdpProperty::kVectorFormM: return !o.vector_m;
    case CdpProperty::kMinDominanceN:
      return std::find(o.min_dom_n.begin(), o.min_dom_n.end(), *w.player) != o.min_dom_n.end();
    case CdpProperty::kMinDominanceM:
      return std::find(o.min_dom_m.begin(), o.min_dom_m.end(), *w.player) != o.min_dom_m.end();
  }
  return false;
}

// (z, Az) in T(x, Ax): F(x, z) <= f(z) and G(Ax, Az) <= g(Az).
inline bool kkm_t_membership(const SplitProblem& problem, const Profile& x, const Profile& z, double tolerance) {
  const Game& gn = problem.game_n();
  const Game& gm = problem.game_m();
  if (!order_leq(diagonal_payoff(gn, x, z), gn.utilities(z), tolerance)) return false;
  const Profile ax = problem.image(x);
  const Profile az = problem.image(z);
  return order_leq(diagonal_payoff(gm, ax, az), gm.utilities(az), tolerance);
}

struct ProbeGrid {
  std::size_t points_per_axis = 8;
  std::optional<Box> region;  // sub-box of S_N to probe; defaults to S_N
};

struct ProbeResult {
  std::size_t points_per_axis = 0;
  std::size_t grid_points = 0;
  std::vector<double> axis_steps;
  double cell_diameter = 0.0;
  double check_tolerance = 0.0;  // 2 * cell_diameter
  std::vector<Profile> members;
  std::vector<SplitReport> checks;  // verify_split at check_tolerance, per member
  bool all_members_pass = true;
};

// Finite version of the intersection of T(x, Ax) over the graph of A: grid
// points z of S_N lying in T(x, Ax) for every grid point x.
inline ProbeResult kkm_intersection_probe(const SplitProblem& problem, const ProbeGrid& grid,
                                          const SearchBudget& budget) {
  if (grid.points_per_axis < 2) throw ValidationError("probe grid needs at least two points per axis");
  const Game& gn = problem.game_n();
  const Game& gm = problem.game_m();
  const Box box = grid.region ? *grid.region : gn.profile_box();
  const std::size_t d = box.size();
  const std::size_t p = grid.points_per_axis;
  if (d != gn.dimension()) throw DimensionError("probe region dimension does not match game N");
  const Box feasible = gn.profile_box();
  for (std::size_t k = 0; k < d; ++k) {
    const Interval& s = feasible[k];
    if (box[k].lo() < s.lo() || box[k].hi() > s.hi()) throw ValidationError("probe region must lie inside S_N");
  }

  ProbeResult result;
  result.points_per_axis = p;
  std::vector<std::vector<double>> axes(d);
  double diam2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double lo = box[k].lo();
    const double hi = box[k].truncated_hi(budget.truncation_cap);
    const double step = (hi - lo) / static_cast<double>(p - 1);
    for (std::size_t t = 0; t < p; ++t) axes[k].push_back(t + 1 == p ? hi : lo + static_cast<double>(t) * step);
    result.axis_steps.push_back(step);
    diam2 += step * step;
  }
  result.cell_diameter = std::sqrt(diam2);
  result.check_tolerance = 2.0 * result.cell_diameter;

  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= p;
  result.grid_points = total;
  std::vector<Profile> points;
  points.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<double> v(d);
    std::size_t rest = idx;
    for (std::size_t k = 0; k < d; ++k) {
      v[k] = axes[k][rest % p];
      rest /= p;
    }
    points.emplace_back(std::move(v));
  }
  std::vector<Profile> images;
  images.reserve(total);
  for (const auto& pt : points) images.push_back(problem.image(pt));

  // Game N: F(x, z)_i only involves x's block i, so scan each player's block
  // values. Game M: (Ax)_j ranges over the distinct row-j image values.
  std::vector<std::vector<std::vector<double>>> n_blocks(gn.num_players());
  for (std::size_t i = 0; i < gn.num_players(); ++i) {
    for (const auto& pt : points) {
      const auto b = gn.block(pt, i);
      std::vector<double> blk(b.begin(), b.end());
      if (std::find(n_blocks[i].begin(), n_blocks[i].end(), blk) == n_blocks[i].end()) n_blocks[i].push_back(blk);
    }
  }
  std::vector<std::vector<std::vector<double>>> m_blocks(gm.num_players());
  for (std::size_t j = 0; j < gm.num_players(); ++j) {
    for (const auto& im : images) {
      const auto b = gm.block(im, j);
      std::vector<double> blk(b.begin(), b.end());
      if (std::find(m_blocks[j].begin(), m_blocks[j].end(), blk) == m_blocks[j].end()) m_blocks[j].push_back(blk);
    }
  }

  auto is_member = [&](std::size_t zi) -> bool {
    const Profile& z = points[zi];
    const Profile& az = images[zi];
    for (std::size_t i = 0; i < gn.num_players(); ++i) {
      const double fz = gn.utility(i, z);
      for (const auto& blk : n_blocks[i]) {
        if (!detail::approx_leq(gn.utility(i, gn.with_block(z, i, blk)), fz, budget.tolerance)) return false;
      }
    }
    for (std::size_t j = 0; j < gm.num_players(); ++j) {
      const double gz = gm.utility(j, az);
      for (const auto& blk : m_blocks[j]) {
        if (!detail::approx_leq(gm.utility(j, gm.with_block(az, j, blk)), gz, budget.tolerance)) return false;
      }
    }
    return true;
  };
  const std::vector<char> member = detail::parallel_map(total, [&](std::size_t zi) -> char { return is_member(zi); });

  SearchBudget check_budget = budget;
  check_budget.tolerance = result.check_tolerance;
  for (std::size_t zi = 0; zi < total; ++zi) {
    if (!member[zi]) continue;
    result.members.push_back(points[zi]);
    result.checks.push_back(verify_split_equilibrium(problem, points[zi], check_budget));
    result.all_members_pass = result.all_members_pass && result.checks.back().verdict;
  }
  return result;
}

}  // namespace splitnash
