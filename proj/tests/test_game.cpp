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

#include <cmath>
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "splitnash/game.hpp"
#include "splitnash/models.hpp"

namespace splitnash {
namespace {

Game quadratic(double a1, double a2) {
  return Game::from_expressions({"p", "q"}, {Interval(0, 10), Interval(0, 10)},
                                {UtilityExpr::negate(UtilityExpr::power(
                                     UtilityExpr::subtract(UtilityExpr::variable("p"), UtilityExpr::constant(a1)), 2)),
                                 UtilityExpr::negate(UtilityExpr::power(
                                     UtilityExpr::subtract(UtilityExpr::variable("q"), UtilityExpr::constant(a2)), 2))});
}

TEST(Game, Validation) {
  EXPECT_THROW(Game(std::vector<PlayerSpec>{}), ValidationError);
  auto u = [](std::span<const double>) { return 0.0; };
  EXPECT_THROW(Game({{"a", Box{Interval(0)}, u, {}}, {"a", Box{Interval(0)}, u, {}}}), ValidationError);
  EXPECT_THROW(Game({{"a", Box{Interval(0)}, nullptr, {}}}), ValidationError);
  EXPECT_THROW(Game::from_expressions({"a"}, {Interval(0), Interval(0)}, {parse_utility("a")}), ValidationError);
  EXPECT_THROW(Game::from_expressions({"a"}, {Interval(0)}, {parse_utility("a + z")}), ValidationError);
}

TEST(Game, BlocksAndOffsets) {
  auto u = [](std::span<const double> x) { return x[0]; };
  const Game g({{"one", Box{Interval(0, 1)}, u, {}}, {"two", Box{Interval(0, 1), Interval(0, 1)}, u, {}}});
  EXPECT_EQ(g.dimension(), 3u);
  EXPECT_EQ(g.offset(1), 1u);
  EXPECT_EQ(g.block_size(1), 2u);
  const Profile x{0.1, 0.2, 0.3};
  const auto b = g.block(x, 1);
  EXPECT_EQ(b[0], 0.2);
  EXPECT_EQ(b[1], 0.3);
  EXPECT_EQ(g.with_block(x, 1, std::vector<double>{0.7, 0.8}), (Profile{0.1, 0.7, 0.8}));
  EXPECT_EQ(g.player_index("two"), 1u);
  EXPECT_TRUE(g.feasible(x));
  EXPECT_FALSE(g.feasible(Profile{2, 0, 0}));
}

TEST(Game, NonFiniteUtilityIsDomainError) {
  const Game g = Game::from_expressions({"x"}, {Interval(0)}, {parse_utility("x^2 * 1e308 * 1e308")});
  EXPECT_THROW(g.utility(0, Profile{1}), DomainError);
}

TEST(Order, ComponentwiseAndSlack) {
  const std::vector<double> u{1, 2}, v{1, 3}, w{2, 1};
  EXPECT_TRUE(order_leq(u, v));
  EXPECT_FALSE(order_leq(v, u));
  EXPECT_FALSE(order_leq(u, w));
  EXPECT_FALSE(order_leq(w, u));
  EXPECT_TRUE(order_leq(std::vector<double>{1 + 1e-9}, std::vector<double>{1}, 1e-6));
}

TEST(DiagonalPayoff, MatchesHandSubstitution) {
  const Game e1 = example_e1();
  const Profile z{3, 0.5, 1}, x{1, 2, 4};
  const auto f = diagonal_payoff(e1, z, x);
  EXPECT_DOUBLE_EQ(f[0], oracle::e1_a(3, 2, 4));
  EXPECT_DOUBLE_EQ(f[1], oracle::e1_b(1, 0.5, 4));
  EXPECT_DOUBLE_EQ(f[2], oracle::e1_c(1, 2, 1));
  EXPECT_EQ(diagonal_payoff(e1, x, x), e1.utilities(x));
}

TEST(BestResponse, WorkedSecondEconomy) {
  const Game e2 = example_e2();
  const Profile y{9, 12};
  EXPECT_NEAR(best_response(e2, 0, y, {}).strategy[0], 9.0, 1e-6);
  EXPECT_NEAR(best_response(e2, 1, y, {}).strategy[0], 12.0, 1e-5);
}

TEST(BestResponse, MultiDimensionalBlock) {
  auto u = [](std::span<const double> x) { return -(x[0] - 1) * (x[0] - 1) - (x[1] - 2) * (x[1] - 2) + x[2]; };
  auto v = [](std::span<const double> x) { return -x[2] * x[2]; };
  const Game g({{"pair", Box{Interval(0, 5), Interval(0, 5)}, u, {}}, {"single", Box{Interval(0, 5)}, v, {}}});
  const auto br = best_response(g, 0, Profile{4, 4, 1}, {});
  EXPECT_NEAR(br.strategy[0], 1.0, 1e-5);
  EXPECT_NEAR(br.strategy[1], 2.0, 1e-5);
}

TEST(VerifyNash, SecondEconomyPasses) {
  const NashReport r = verify_nash(example_e2(), Profile{9, 12}, {});
  EXPECT_TRUE(r.verdict);
  EXPECT_LE(r.max_regret(), 1e-6);
}

TEST(VerifyNash, FirstEconomyFailsOnlyForPlayerC) {
  const NashReport r = verify_nash(example_e1(), Profile{1, 2, 4}, {});
  EXPECT_FALSE(r.verdict);
  EXPECT_EQ(r.failing_players(), std::vector<std::size_t>{2});
  EXPECT_LE(r.players[0].regret, 1e-6);
  EXPECT_LE(r.players[1].regret, 1e-6);
  EXPECT_NEAR(r.players[2].regret, 3 - 2 * std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(r.players[2].best_response[0], 2.0, 1e-4);
  EXPECT_NEAR(r.players[2].regret, oracle::e1_c_grid_regret(1, 2, 4, 1e-3, 50), 1e-4);
}

TEST(VerifyNash, InputErrors) {
  EXPECT_THROW(verify_nash(example_e2(), Profile{9}, {}), DimensionError);
  EXPECT_THROW(verify_nash(example_e2(), Profile{-1, 12}, {}), InfeasibleProfile);
  SearchBudget bad;
  bad.tolerance = -1;
  EXPECT_THROW(verify_nash(example_e2(), Profile{9, 12}, bad), ValidationError);
}

TEST(SolveNash, QuadraticHasDominantProfile) {
  const auto eq = solve_nash(quadratic(1, 2), {});
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_NEAR(eq[0][0], 1, 1e-5);
  EXPECT_NEAR(eq[0][1], 2, 1e-5);
}

TEST(SolveNash, SecondEconomyFindsInteriorEquilibrium) {
  const auto eq = solve_nash(example_e2(), {});
  bool found = false;
  for (const auto& p : eq) {
    EXPECT_TRUE(verify_nash(example_e2(), p, {}).verdict);
    found = found || (std::abs(p[0] - 9) < 1e-3 && std::abs(p[1] - 12) < 1e-3);
  }
  EXPECT_TRUE(found);
}

TEST(Gamma, SelfMembershipAndEquilibrium) {
  const Game g = quadratic(1, 2);
  EXPECT_TRUE(gamma_membership(g, Profile{5, 5}, Profile{5, 5}, 1e-9));
  EXPECT_TRUE(gamma_membership(g, Profile{7, 0}, Profile{1, 2}, 1e-9));
  EXPECT_FALSE(gamma_membership(g, Profile{1, 2}, Profile{7, 0}, 1e-9));
}

TEST(Concavity, DetectsConvexUtilities) {
  EXPECT_TRUE(concavity_sample_check(quadratic(1, 2), 200, 1).pass());
  EXPECT_TRUE(concavity_sample_check(example_e1(), 200, 1).pass());
  const auto bad = concavity_sample_check(
      Game::from_expressions({"x"}, {Interval(0, 1)}, {parse_utility("x^2")}), 200, 1);
  EXPECT_FALSE(bad.pass());
  EXPECT_FALSE(bad.player_pass[0]);
  for (const auto& w : bad.violations) EXPECT_LT(w.combined_value, w.interpolated_value);
}

}  // namespace
}  // namespace splitnash
