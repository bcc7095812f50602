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

// Property suites with hand-rolled generators; every generator is seeded.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "splitnash/bertrand.hpp"
#include "splitnash/models.hpp"
#include "splitnash/repeated.hpp"

namespace splitnash {
namespace {

using Rng = std::mt19937_64;

double draw(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Profile random_profile(Rng& rng, const Game& g, double cap) {
  const Box box = g.profile_box();
  std::vector<double> v(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) v[k] = draw(rng, box[k].lo(), box[k].truncated_hi(cap));
  return Profile(std::move(v));
}

std::vector<Game> sample_games() {
  return {example_e1(), example_e2(), builtin_instance("quadratic-sanity:N").game(),
          builtin_instance("quadratic-sanity:M").game()};
}

TEST(Properties, DiagonalPayoffOnTheDiagonalIsUtility) {
  Rng rng(1);
  for (const Game& g : sample_games()) {
    for (int s = 0; s < 1000; ++s) {
      const Profile x = random_profile(rng, g, 50);
      EXPECT_EQ(diagonal_payoff(g, x, x), g.utilities(x));
    }
  }
}

TEST(Properties, GammaAndTAreReflexive) {
  Rng rng(2);
  for (const Game& g : sample_games()) {
    for (int s = 0; s < 1000; ++s) {
      const Profile z = random_profile(rng, g, 50);
      ASSERT_TRUE(gamma_membership(g, z, z, 0.0));
    }
  }
  const SplitProblem p = builtin_instance("quadratic-sanity").split();
  for (int s = 0; s < 1000; ++s) {
    const Profile z = random_profile(rng, p.game_n(), 50);
    ASSERT_TRUE(kkm_t_membership(p, z, z, 0.0));
  }
}

TEST(Properties, OrderAxioms) {
  Rng rng(3);
  auto vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(pick(rng, 4));  // small support forces ties
    return v;
  };
  for (int s = 0; s < 2000; ++s) {
    const std::size_t n = 1 + pick(rng, 3);
    const auto u = vec(n), v = vec(n), w = vec(n);
    EXPECT_TRUE(order_leq(u, u));
    if (order_leq(u, v) && order_leq(v, u)) {
      EXPECT_EQ(u, v);
    }
    if (order_leq(u, v) && order_leq(v, w)) {
      EXPECT_TRUE(order_leq(u, w));
    }
    if (order_leq(u, v)) {
      std::vector<double> uw(n), vw(n), su(n), sv(n);
      const double scale = draw(rng, 0, 3);
      for (std::size_t k = 0; k < n; ++k) {
        uw[k] = u[k] + w[k];
        vw[k] = v[k] + w[k];
        su[k] = scale * u[k];
        sv[k] = scale * v[k];
      }
      EXPECT_TRUE(order_leq(uw, vw));
      EXPECT_TRUE(order_leq(su, sv));
    }
  }
}

TEST(Properties, ConcaveGamesSatisfyMinDominance) {
  for (const char* id : {"quadratic-sanity", "quadratic-markov", "example-4.1"}) {
    const CdpReport r = cdp_sample_check(builtin_instance(id).split(), 1000, 4);
    EXPECT_TRUE(r.min_dominance_failures.empty()) << id;
  }
}

UtilityExpr random_expr(Rng& rng, int depth) {
  static const char* kNames[] = {"a", "b", "x1", "price"};
  if (depth == 0 || pick(rng, 4) == 0) {
    if (pick(rng, 2) == 0) return UtilityExpr::variable(kNames[pick(rng, 4)]);
    const double c = pick(rng, 2) == 0 ? static_cast<double>(pick(rng, 10)) : draw(rng, 0, 100);
    return UtilityExpr::constant(c);
  }
  switch (pick(rng, 5)) {
    case 0: return UtilityExpr::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 1: return UtilityExpr::subtract(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 2: {
      std::vector<UtilityExpr> f;
      const std::size_t n = 2 + pick(rng, 2);
      for (std::size_t k = 0; k < n; ++k) f.push_back(random_expr(rng, depth - 1));
      return UtilityExpr::multiply(std::move(f));
    }
    case 3: return UtilityExpr::negate(random_expr(rng, depth - 1));
    default: return UtilityExpr::power(random_expr(rng, depth - 1), static_cast<double>(pick(rng, 4)) * 0.5);
  }
}

TEST(Properties, ParserRoundTrip) {
  Rng rng(5);
  for (int s = 0; s < 500; ++s) {
    const UtilityExpr e = random_expr(rng, 4);
    const std::string text = e.to_string();
    UtilityExpr back = UtilityExpr::constant(0);
    ASSERT_NO_THROW(back = parse_utility(text)) << text;
    EXPECT_EQ(back, e) << text << " -> " << back.to_string();
  }
}

std::vector<std::vector<double>> random_stochastic(Rng& rng, std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (auto& row : rows) {
    double sum = 0;
    for (auto& x : row) sum += (x = pick(rng, 3) == 0 ? 0.0 : draw(rng, 0, 1));
    if (sum == 0) row[0] = sum = 1;
    for (auto& x : row) x /= sum;
  }
  return rows;
}

TEST(Properties, TransitionMatrixValidation) {
  Rng rng(6);
  for (int s = 0; s < 500; ++s) {
    const std::size_t n = 1 + pick(rng, 5);
    auto rows = random_stochastic(rng, n);
    ASSERT_NO_THROW(validate_transition_matrix(rows));
    auto negative = rows;
    negative[pick(rng, n)][pick(rng, n)] = -draw(rng, 1e-9, 1);
    EXPECT_THROW(validate_transition_matrix(negative), TransitionMatrixError);
    auto off = rows;
    off[pick(rng, n)][pick(rng, n)] += draw(rng, 1e-9, 1);
    try {
      validate_transition_matrix(off);
      ADD_FAILURE();
    } catch (const TransitionMatrixError& e) {
      EXPECT_EQ(e.kind(), TransitionViolation::kRowSum);
    }
  }
}

TEST(Properties, StochasticMatricesFixConstantProfiles) {
  Rng rng(7);
  for (int s = 0; s < 500; ++s) {
    const std::size_t n = 1 + pick(rng, 5);
    const TransitionMatrix m = validate_transition_matrix(random_stochastic(rng, n));
    const double c = draw(rng, 0, 100);
    for (double y : m.op().apply(std::vector<double>(n, c))) EXPECT_NEAR(y, c, 1e-12 * std::max(1.0, c));
  }
}

TEST(Properties, OperatorIsLinear) {
  Rng rng(8);
  for (int s = 0; s < 1000; ++s) {
    const std::size_t r = 1 + pick(rng, 4), c = 1 + pick(rng, 4);
    std::vector<double> entries(r * c), x(c), y(c), mix(c);
    for (auto& e : entries) e = draw(rng, -5, 5);
    const LinearOperator a(r, c, entries);
    const double al = draw(rng, -3, 3), be = draw(rng, -3, 3);
    for (std::size_t k = 0; k < c; ++k) {
      x[k] = draw(rng, -10, 10);
      y[k] = draw(rng, -10, 10);
      mix[k] = al * x[k] + be * y[k];
    }
    const auto ax = a.apply(x), ay = a.apply(y), am = a.apply(mix);
    for (std::size_t k = 0; k < r; ++k) {
      const double want = al * ax[k] + be * ay[k];
      EXPECT_NEAR(am[k], want, 1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(Properties, RelatednessAgreesWithCornerImages) {
  // A linear image of a box attains its extremes at corners, so checking all
  // corners decides inclusion exactly; interior samples must agree when it holds.
  Rng rng(9);
  for (int s = 0; s < 300; ++s) {
    const std::size_t n = 1 + pick(rng, 3), m = 1 + pick(rng, 2);
    std::vector<Interval> from, to;
    std::vector<std::string> xs, ys;
    std::vector<UtilityExpr> fu, gu;
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = draw(rng, 0, 2);
      from.emplace_back(lo, lo + draw(rng, 0.1, 2));
      xs.push_back("x" + std::to_string(k));
      fu.push_back(UtilityExpr::variable(xs.back()));
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double lo = draw(rng, -3, 1);
      to.emplace_back(lo, lo + draw(rng, 1, 8));
      ys.push_back("y" + std::to_string(k));
      gu.push_back(UtilityExpr::variable(ys.back()));
    }
    std::vector<double> entries(m * n);
    for (auto& e : entries) e = pick(rng, 4) == 0 ? 0.0 : draw(rng, -1.5, 1.5);
    const LinearOperator a(m, n, entries);
    const SplitProblem p(Game::from_expressions(xs, from, fu), Game::from_expressions(ys, to, gu), a);

    bool corners_inside = true;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<double> corner(n);
      for (std::size_t k = 0; k < n; ++k) corner[k] = (mask >> k) & 1 ? from[k].hi() : from[k].lo();
      const auto y = a.apply(corner);
      for (std::size_t k = 0; k < m; ++k) corners_inside = corners_inside && to[k].contains(y[k], 1e-12);
    }
    EXPECT_EQ(p.relatedness().holds, corners_inside);
    if (corners_inside) {
      for (int t = 0; t < 50; ++t) {
        std::vector<double> x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = draw(rng, from[k].lo(), from[k].hi());
        EXPECT_NO_THROW(p.image(Profile(x)));
      }
    }
  }
}

TEST(Properties, SharesAreConserved) {
  Rng rng(10);
  const BertrandModel models[] = {BertrandModel(1, 2), BertrandModel(1, 1), BertrandModel(0.7, 3)};
  for (int s = 0; s < 10000; ++s) {
    const BertrandModel& m = models[pick(rng, 3)];
    const double p2 = draw(rng, 0, 6);
    const double p1 = s % 5 == 0 ? m.lambda() * p2 : draw(rng, 0, 6);
    const Shares sh = sales_shares(m, p1, p2);
    const Shares q = sales(m, p1, p2);
    if (m.demand(p1, p2) > 0) {
      EXPECT_EQ(sh.first + sh.second, 1.0);
      EXPECT_NEAR(q.first + q.second, m.demand(p1, p2), 1e-12);
    } else {
      EXPECT_EQ(sh.first, 0.0);
      EXPECT_EQ(sh.second, 0.0);
    }
  }
  for (const auto& m : models) {
    const auto u = profits(m, m.c1(), m.c2());
    EXPECT_EQ(u[0], 0.0);
    EXPECT_EQ(u[1], 0.0);
  }
}

TEST(Properties, ShareDependsOnlyOnThresholdSign) {
  Rng rng(11);
  const BertrandModel m(1, 2);
  for (int s = 0; s < 5000; ++s) {
    const double p1 = draw(rng, 0, 4), p2 = draw(rng, 0, 4);
    const double q1 = draw(rng, 0, 4), q2 = draw(rng, 0, 4);
    if (m.demand(p1, p2) <= 0 || m.demand(q1, q2) <= 0) continue;
    const bool same_side = (p1 < m.lambda() * p2) == (q1 < m.lambda() * q2);
    if (same_side) {
      EXPECT_EQ(sales_shares(m, p1, p2).first, sales_shares(m, q1, q2).first);
    }
    // Scaling both prices keeps the side of the threshold.
    const double k = draw(rng, 0.1, 1.0);
    if (m.demand(k * p1, k * p2) > 0) {
      EXPECT_EQ(sales_shares(m, p1, p2).first, sales_shares(m, k * p1, k * p2).first);
    }
  }
}

TEST(Properties, MarkovTransformConservesTotalPrice) {
  Rng rng(12);
  for (int s = 0; s < 5000; ++s) {
    const MarkovPriceMatrix a{draw(rng, 0, 1), draw(rng, 0, 1)};
    const double cap = draw(rng, 0.5, 20);
    const double p1 = draw(rng, 0, cap), p2 = draw(rng, 0, cap);
    const PricePair q = markov_price_transform(a, p1, p2);
    EXPECT_NEAR(q.p1 + q.p2, p1 + p2, 4e-16 * (p1 + p2) + 1e-300);
    EXPECT_GE(q.p1, 0.0);
    EXPECT_GE(q.p2, 0.0);
    EXPECT_LE(q.p1, 2 * cap);
    EXPECT_LE(q.p2, 2 * cap);
  }
}

TEST(Properties, MarkovTransformCanLeaveTheSquare) {
  // Column-stochastic weights bound each output by the total, not by the cap.
  const PricePair q = markov_price_transform({1, 0}, 3, 3);
  EXPECT_EQ(q.p1, 6.0);
  EXPECT_EQ(q.p2, 0.0);
}

TEST(Properties, EnumeratedMembersReplay) {
  for (const auto& m : {BertrandModel(1, 2), BertrandModel(1, 1), BertrandModel(0.5, 1.5)}) {
    const double step = 0.05;
    const auto grid = price_grid(step, 0, 5);
    for (const auto& p : enumerate_grid_equilibria(m, step, PriceRange{0, 5, 0, 5})) {
      EXPECT_GE(profits(m, p.p1, p.p2)[0] + 1e-6, grid_best_response(m, 1, p.p2, grid).profit);
      EXPECT_GE(profits(m, p.p1, p.p2)[1] + 1e-6, grid_best_response(m, 2, p.p1, grid).profit);
    }
  }
}

}  // namespace
}  // namespace splitnash
