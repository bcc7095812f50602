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

// Price duopoly with unequal unit costs c1 <= c2. Firm 1 takes the whole
// market when p1 < lambda * p2 (lambda = c1 / c2), firm 2 when p1 > lambda * p2,
// and on the tie line they split it c1 : c2. Profits are discontinuous on
// the tie line, so equilibria are audited on price grids that always include
// the exact tie price.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitnash/error.hpp"
#include "splitnash/parallel.hpp"

namespace splitnash {

// Truncated linear demand max(0, base - a * p1 - b * p2).
struct LinearDemand {
  double base = 10.0;
  double slope1 = 1.0;
  double slope2 = 1.0;

  double operator()(double p1, double p2) const { return std::max(0.0, base - slope1 * p1 - slope2 * p2); }
  // Own price at which demand vanishes whatever the rival charges.
  std::array<double, 2> price_caps() const { return {base / slope1, base / slope2}; }
};

struct Demand {
  std::function<double(double, double)> eval;
  std::array<double, 2> caps;
};

inline Demand make_demand(const LinearDemand& d) {
  if (!(d.base > 0) || !(d.slope1 > 0) || !(d.slope2 > 0)) {
    throw ValidationError("linear demand needs positive base and slopes");
  }
  return {d, d.price_caps()};
}

inline constexpr double kTieTolerance = 1e-12;

struct Shares {
  double first;
  double second;
};

struct PricePair {
  double p1;
  double p2;
  bool operator==(const PricePair&) const = default;
};

class BertrandModel {
 public:
  BertrandModel(double c1, double c2, Demand demand = make_demand(LinearDemand{}))
      : c1_(c1), c2_(c2), demand_(std::move(demand)) {
    if (!(c1 > 0) || !(c2 > 0) || !std::isfinite(c1) || !std::isfinite(c2)) {
      throw ValidationError("unit costs must be positive and finite");
    }
    if (c1 > c2) throw ValidationError("firm 1 cost must not exceed firm 2 cost");
    lambda_ = c1_ / c2_;
    const double at_cost = demand_.eval(c1_, c2_);
    if (!(at_cost > 0) || !std::isfinite(at_cost)) {
      throw ValidationError("demand at cost prices must be positive and finite");
    }
  }

  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double cost(int firm) const { return firm == 1 ? c1_ : c2_; }
  double lambda() const { return lambda_; }
  double demand(double p1, double p2) const { return demand_.eval(p1, p2); }
  const std::array<double, 2>& price_caps() const { return demand_.caps; }

  // Price at which `firm` ties the rival's price.
  double tie_price(int firm, double rival_price) const {
    return firm == 1 ? lambda_ * rival_price : rival_price / lambda_;
  }

 private:
  double c1_;
  double c2_;
  double lambda_;
  Demand demand_;
};

namespace detail {

inline void check_prices(double p1, double p2) {
  if (!(p1 >= 0) || !(p2 >= 0) || !std::isfinite(p1) || !std::isfinite(p2)) {
    throw DomainError("prices must be nonnegative and finite");
  }
}

inline int firm_index(int firm) {
  if (firm != 1 && firm != 2) throw ValidationError("firm must be 1 or 2");
  return firm;
}

}  // namespace detail

// Market shares; (0, 0) when there is no demand.
inline Shares sales_shares(const BertrandModel& m, double p1, double p2) {
  detail::check_prices(p1, p2);
  if (!(m.demand(p1, p2) > 0)) return {0.0, 0.0};
  const double gap = p1 - m.lambda() * p2;
  if (std::abs(gap) <= kTieTolerance) {
    const double first = m.c1() / (m.c1() + m.c2());
    return {first, 1.0 - first};
  }
  return gap < 0 ? Shares{1.0, 0.0} : Shares{0.0, 1.0};
}

// Units sold by each firm.
inline Shares sales(const BertrandModel& m, double p1, double p2) {
  const Shares s = sales_shares(m, p1, p2);
  const double total = m.demand(p1, p2);
  if (!(total > 0)) return {0.0, 0.0};
  return {s.first * total, s.second * total};
}

inline std::array<double, 2> profits(const BertrandModel& m, double p1, double p2) {
  const Shares q = sales(m, p1, p2);
  return {(p1 - m.c1()) * q.first, (p2 - m.c2()) * q.second};
}

inline double profit(const BertrandModel& m, int firm, double own_price, double rival_price) {
  return detail::firm_index(firm) == 1 ? profits(m, own_price, rival_price)[0]
                                       : profits(m, rival_price, own_price)[1];
}

// lo, lo + step, ... up to hi (inclusive within rounding).
inline std::vector<double> price_grid(double step, double lo, double hi) {
  if (!(step > 0) || !std::isfinite(step)) throw ValidationError("grid step must be positive");
  if (!(lo >= 0) || !(hi >= lo) || !std::isfinite(hi)) throw ValidationError("price range must satisfy 0 <= lo <= hi");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(lo + static_cast<double>(k) * step);
  return grid;
}

// [0, min(cap_j, 5 * c2)] for each firm.
inline std::array<double, 2> default_price_limit(const BertrandModel& m) {
  return {std::min(m.price_caps()[0], 5.0 * m.c2()), std::min(m.price_caps()[1], 5.0 * m.c2())};
}

struct GridResponse {
  double price;
  double profit;
};

// Exhaustive search over the grid plus the exact tie price (when it lies in
// the grid's span). Ascending order with strict improvement keeps the lowest
// maximizing price.
inline GridResponse grid_best_response(const BertrandModel& m, int firm, double rival_price,
                                       const std::vector<double>& grid) {
  if (grid.empty()) throw ValidationError("best-response grid is empty");
  const double tie = m.tie_price(detail::firm_index(firm), rival_price);
  std::vector<double> candidates = grid;
  if (tie >= grid.front() && tie <= grid.back()) {
    candidates.insert(std::upper_bound(candidates.begin(), candidates.end(), tie), tie);
  }
  GridResponse best{candidates.front(), profit(m, firm, candidates.front(), rival_price)};
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double v = profit(m, firm, candidates[k], rival_price);
    if (v > best.profit) best = {candidates[k], v};
  }
  return best;
}

inline bool is_grid_equilibrium(const BertrandModel& m, double p1, double p2, const std::vector<double>& grid1,
                                const std::vector<double>& grid2, double tolerance) {
  const auto current = profits(m, p1, p2);
  return grid_best_response(m, 1, p2, grid1).profit <= current[0] + tolerance &&
         grid_best_response(m, 2, p1, grid2).profit <= current[1] + tolerance;
}

struct PriceRange {
  double lo1, hi1, lo2, hi2;
};

inline PriceRange default_price_range(const BertrandModel& m) {
  const auto lim = default_price_limit(m);
  return {0.0, lim[0], 0.0, lim[1]};
}

// Grid points from which neither firm gains more than `tolerance` by a
// tie-augmented grid deviation. Output is ordered by p1, then p2.
inline std::vector<PricePair> enumerate_grid_equilibria(const BertrandModel& m, double step,
                                                        std::optional<PriceRange> range = std::nullopt,
                                                        double tolerance = 1e-6) {
  const PriceRange r = range ? *range : default_price_range(m);
  const std::vector<double> g1 = price_grid(step, r.lo1, r.hi1);
  const std::vector<double> g2 = price_grid(step, r.lo2, r.hi2);
  // Best deviation value for each rival price, computed once.
  const std::vector<double> best1 =
      detail::parallel_map(g2.size(), [&](std::size_t k) { return grid_best_response(m, 1, g2[k], g1).profit; });
  const std::vector<double> best2 =
      detail::parallel_map(g1.size(), [&](std::size_t k) { return grid_best_response(m, 2, g1[k], g2).profit; });
  const std::vector<std::vector<PricePair>> rows = detail::parallel_map(g1.size(), [&](std::size_t i) {
    std::vector<PricePair> row;
    for (std::size_t k = 0; k < g2.size(); ++k) {
      const auto u = profits(m, g1[i], g2[k]);
      if (best1[k] <= u[0] + tolerance && best2[i] <= u[1] + tolerance) row.push_back({g1[i], g2[k]});
    }
    return row;
  });
  std::vector<PricePair> out;
  for (const auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

// Regions of the uniqueness argument for cost pricing. Each non-equilibrium
// region comes with a deviation that strictly improves one firm's profit.
enum class PricingRegion {
  kCostPricing,                 // d = (c1, c2)
  kFirm2SellsBelowCostVsCheap,  // d1 < c1, d1 > lambda d2: firm 2 raises to c2
  kFirm1SellsBelowCost,         // d1 < c1, d1 <= lambda d2: firm 1 prices itself out
  kFirm1UndercutAvailable,      // d1 > lambda d2 > c1: firm 1 drops to the gap midpoint
  kFirm2SellsBelowCost,         // d1 > c1 > lambda d2: firm 2 raises to c2
  kFirm2AtCostRoomAbove,        // d1 > lambda d2 = c1: firm 2 raises toward d1 / lambda
  kSharedMarket,                // d1 = lambda d2 > c1: firm 2 undercuts by a small epsilon
  kFirm2Idle,                   // c1 < d1 < lambda d2: firm 2 moves to the tie price
  kFirm2BelowCostVsCostRival,   // d1 = c1, d2 < c2: firm 2 raises above c2
  kFirm1RoomBelowRival,         // d1 = c1, d2 > c2: firm 1 raises to the gap midpoint
  kNoDemand,                    // outside the priced-to-sell region
};

inline const char* to_string(PricingRegion r) {
  switch (r) {
    case PricingRegion::kCostPricing: return "cost_pricing";
    case PricingRegion::kFirm2SellsBelowCostVsCheap: return "firm2_sells_below_cost_vs_cheap_rival";
    case PricingRegion::kFirm1SellsBelowCost: return "firm1_sells_below_cost";
    case PricingRegion::kFirm1UndercutAvailable: return "firm1_undercut_available";
    case PricingRegion::kFirm2SellsBelowCost: return "firm2_sells_below_cost";
    case PricingRegion::kFirm2AtCostRoomAbove: return "firm2_at_cost_room_above";
    case PricingRegion::kSharedMarket: return "shared_market";
    case PricingRegion::kFirm2Idle: return "firm2_idle";
    case PricingRegion::kFirm2BelowCostVsCostRival: return "firm2_below_cost_vs_cost_rival";
    case PricingRegion::kFirm1RoomBelowRival: return "firm1_room_below_rival";
    case PricingRegion::kNoDemand: return "no_demand";
  }
  return "?";
}

struct DeviationCertificate {
  PricingRegion region;
  int firm = 0;               // deviating firm; 0 for cost pricing or no demand
  double deviation_price = 0.0;
  double current_profit = 0.0;
  double deviation_profit = 0.0;
  bool valid = false;  // deviation strictly improves (vacuously true at cost pricing)
};

namespace detail {

inline int tie_sign(double a, double b) {
  const double gap = a - b;
  if (std::abs(gap) <= kTieTolerance) return 0;
  return gap < 0 ? -1 : 1;
}

}  // namespace detail

// Classifies d and evaluates the region's improving deviation in the
// continuous model. Deviations are anchor + t (target - anchor) with t halved
// from 1 until profit strictly improves; the anchor is the region boundary
// the argument approaches, where the gain stays positive.
inline DeviationCertificate deviation_certificate(const BertrandModel& m, double d1, double d2) {
  detail::check_prices(d1, d2);
  const double c1 = m.c1();
  const double c2 = m.c2();
  const double lam = m.lambda();
  DeviationCertificate cert{PricingRegion::kNoDemand};
  if (!(m.demand(d1, d2) > 0)) return cert;

  double anchor = 0.0;
  double target = 0.0;
  auto set = [&](PricingRegion region, int firm, double from, double to) {
    cert.region = region;
    cert.firm = firm;
    anchor = from;
    target = to;
  };
  const int vs_cost1 = detail::tie_sign(d1, c1);
  const int vs_tie = detail::tie_sign(d1, lam * d2);
  if (vs_cost1 < 0) {
    if (vs_tie > 0) set(PricingRegion::kFirm2SellsBelowCostVsCheap, 2, c2, c2);
    else set(PricingRegion::kFirm1SellsBelowCost, 1, lam * d2 + c1, lam * d2 + c1);
  } else if (vs_cost1 > 0) {
    if (vs_tie == 0) {
      set(PricingRegion::kSharedMarket, 2, d2, d2 - 0.5 * (d2 - c2));
    } else if (vs_tie < 0) {
      set(PricingRegion::kFirm2Idle, 2, d1 / lam, d1 / lam);
    } else {
      const int tie_vs_cost = detail::tie_sign(lam * d2, c1);
      if (tie_vs_cost > 0) set(PricingRegion::kFirm1UndercutAvailable, 1, c1, 0.5 * (c1 + lam * d2));
      else if (tie_vs_cost < 0) set(PricingRegion::kFirm2SellsBelowCost, 2, c2, c2);
      else set(PricingRegion::kFirm2AtCostRoomAbove, 2, c2, 0.5 * (c2 + d1 / lam));
    }
  } else {
    const int vs_cost2 = detail::tie_sign(d2, c2);
    if (vs_cost2 == 0) {
      cert.region = PricingRegion::kCostPricing;
      cert.valid = true;
      return cert;
    }
    if (vs_cost2 < 0) set(PricingRegion::kFirm2BelowCostVsCostRival, 2, c2 + 0.5 * (c2 - d2), c2 + 0.5 * (c2 - d2));
    else set(PricingRegion::kFirm1RoomBelowRival, 1, c1, 0.5 * (c1 + lam * d2));
  }

  const double rival = cert.firm == 1 ? d2 : d1;
  cert.current_profit = profits(m, d1, d2)[cert.firm - 1];
  double t = 1.0;
  for (int k = 0; k < 80; ++k, t *= 0.5) {
    cert.deviation_price = anchor + t * (target - anchor);
    if (cert.deviation_price < 0) break;
    cert.deviation_profit = profit(m, cert.firm, cert.deviation_price, rival);
    if (cert.deviation_profit > cert.current_profit || anchor == target) break;
  }
  cert.valid = cert.deviation_price >= 0 && cert.deviation_profit > cert.current_profit;
  return cert;
}

// Column-stochastic 2x2 price update [[alpha, 1 - beta], [1 - alpha, beta]].
struct MarkovPriceMatrix {
  double alpha;
  double beta;

  void validate() const {
    if (!(alpha >= 0 && alpha <= 1) || !(beta >= 0 && beta <= 1)) {
      throw ValidationError("Markov price weights must lie in [0, 1]");
    }
  }
  bool is_identity() const { return alpha == 1.0 && beta == 1.0; }
};

inline PricePair markov_price_transform(const MarkovPriceMatrix& a, double p1, double p2) {
  return {a.alpha * p1 + (1.0 - a.beta) * p2, (1.0 - a.alpha) * p1 + a.beta * p2};
}

struct MarkovSplitSample {
  MarkovPriceMatrix matrix;
  PricePair transformed;
  bool base_is_equilibrium = false;
  bool transformed_is_equilibrium = false;
  bool verdict = false;          // split equilibrium on the grid
  bool oracle = false;           // transform(c) = c
  bool claimed = false;          // what the published statement predicts
  bool verdict_matches_oracle = false;
  bool claim_agrees = false;
};

struct MarkovSplitAudit {
  double c1 = 0.0;
  double c2 = 0.0;
  bool equal_costs = false;
  double grid_step = 0.0;
  double tolerance = 0.0;
  std::vector<MarkovSplitSample> samples;

  bool all_match_oracle() const {
    return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.verdict_matches_oracle; });
  }
  std::size_t claim_disagreements() const {
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const auto& s) { return !s.claim_agrees; }));
  }
};

// For each matrix, decides on the price grid whether cost pricing and its
// image are both equilibria. The published claim is: with equal costs every
// matrix works; with unequal costs only the identity does.
inline MarkovSplitAudit audit_markov_split(const BertrandModel& m, const std::vector<MarkovPriceMatrix>& matrices,
                                           double grid_step, double tolerance = 1e-6,
                                           std::optional<PriceRange> range = std::nullopt) {
  const PriceRange r = range ? *range : default_price_range(m);
  const std::vector<double> g1 = price_grid(grid_step, r.lo1, r.hi1);
  const std::vector<double> g2 = price_grid(grid_step, r.lo2, r.hi2);
  MarkovSplitAudit audit;
  audit.c1 = m.c1();
  audit.c2 = m.c2();
  audit.equal_costs = m.c1() == m.c2();
  audit.grid_step = grid_step;
  audit.tolerance = tolerance;
  const bool base = is_grid_equilibrium(m, m.c1(), m.c2(), g1, g2, tolerance);
  audit.samples = detail::parallel_map(matrices.size(), [&](std::size_t k) {
    const MarkovPriceMatrix& a = matrices[k];
    a.validate();
    MarkovSplitSample s;
    s.matrix = a;
    s.transformed = markov_price_transform(a, m.c1(), m.c2());
    s.base_is_equilibrium = base;
    s.transformed_is_equilibrium = is_grid_equilibrium(m, s.transformed.p1, s.transformed.p2, g1, g2, tolerance);
    s.verdict = s.base_is_equilibrium && s.transformed_is_equilibrium;
    s.oracle = std::abs(s.transformed.p1 - m.c1()) <= 1e-9 && std::abs(s.transformed.p2 - m.c2()) <= 1e-9;
    s.claimed = audit.equal_costs || a.is_identity();
    s.verdict_matches_oracle = s.verdict == s.oracle;
    s.claim_agrees = s.claimed == s.verdict;
    return s;
  });
  return audit;
}

// n x n grid of (alpha, beta) in [0, 1]^2; diagonal_only keeps alpha = beta.
inline std::vector<MarkovPriceMatrix> markov_matrix_grid(std::size_t n, bool diagonal_only = false) {
  if (n < 2) throw ValidationError("matrix grid needs at least two points per axis");
  std::vector<MarkovPriceMatrix> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (diagonal_only && i != j) continue;
      out.push_back({static_cast<double>(i) / static_cast<double>(n - 1),
                     static_cast<double>(j) / static_cast<double>(n - 1)});
    }
  }
  return out;
}

}  // namespace splitnash
