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

// Built-in instances: the two-economy worked example, a quadratic sanity
// family with dominant strategies, and the cost-asymmetric price duopoly.
// Each instance carries the reference answers its audits replay.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "splitnash/bertrand.hpp"
#include "splitnash/error.hpp"
#include "splitnash/expr.hpp"
#include "splitnash/game.hpp"
#include "splitnash/repeated.hpp"
#include "splitnash/split.hpp"

namespace splitnash {

// Where a reference value comes from.
enum class ClaimSource {
  kPublished,  // stated in the source material
  kImmediate,  // follows directly from definitions
  kDerived,    // recomputed by an independent oracle
};

inline const char* to_string(ClaimSource s) {
  switch (s) {
    case ClaimSource::kPublished: return "published";
    case ClaimSource::kImmediate: return "immediate";
    case ClaimSource::kDerived: return "derived";
  }
  return "?";
}

struct ReferenceClaim {
  std::string description;
  std::vector<double> value;
  ClaimSource source;
  std::string citation;  // quoted statement for published claims
  // Set when a published value disagrees with the oracle's.
  std::optional<std::vector<double>> oracle_value;
};

using InstanceProblem = std::variant<SplitProblem, Game, BertrandModel>;

struct NamedInstance {
  std::string id;
  InstanceProblem problem;
  std::vector<ReferenceClaim> claims;

  const SplitProblem& split() const { return std::get<SplitProblem>(problem); }
  const Game& game() const { return std::get<Game>(problem); }
  const BertrandModel& bertrand() const { return std::get<BertrandModel>(problem); }
};

namespace detail {

inline Game parsed_game(const std::vector<std::string>& ids, const std::vector<std::string>& sources) {
  std::vector<UtilityExpr> utilities;
  for (const auto& s : sources) utilities.push_back(parse_utility(s));
  return Game::from_expressions(ids, std::vector<Interval>(ids.size(), Interval::nonnegative()), utilities);
}

// -(v - target)^2
inline UtilityExpr distance_penalty(const std::string& var, double target) {
  return UtilityExpr::negate(
      UtilityExpr::power(UtilityExpr::subtract(UtilityExpr::variable(var), UtilityExpr::constant(target)), 2.0));
}

inline Game quadratic_game(const std::string& prefix, const std::vector<double>& targets, double hi) {
  std::vector<std::string> ids;
  std::vector<UtilityExpr> utilities;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ids.push_back(prefix + std::to_string(i + 1));
    utilities.push_back(distance_penalty(ids.back(), targets[i]));
  }
  return Game::from_expressions(ids, std::vector<Interval>(ids.size(), Interval(0.0, hi)), utilities);
}

}  // namespace detail

// Economy E1 (players a, b, c), economy E2 (players d, e), and the 2x3
// operator linking them.
inline Game example_e1() {
  return detail::parsed_game({"a", "b", "c"}, {"a*b*c - 4*a^2", "a^2*b*c - 0.125*b^4", "a^0.5*b^0.5*c^0.5 - 0.5*c"});
}

// 1/3 and 1/48 are written as their nearest doubles.
inline Game example_e2() {
  return detail::parsed_game({"d", "e"}, {"0.5*d*e - 0.33333333333333331*d^2", "48*d^0.5*e - 0.020833333333333332*e^4"});
}

inline LinearOperator example_operator() { return LinearOperator::from_rows({{1, 2, 1}, {2, 1, 2}}); }

inline NamedInstance example_4_1() {
  const double c_regret = 3.0 - 2.0 * std::sqrt(2.0);
  return {"example-4.1",
          SplitProblem(example_e1(), example_e2(), example_operator()),
          {
              {"split equilibrium candidate", {1, 2, 4}, ClaimSource::kPublished,
               "(1, 2, 4) is a solution to the split Nash equilibrium problem", std::nullopt},
              {"image of the candidate", {9, 12}, ClaimSource::kPublished, "A(1, 2, 4) = (9, 12)", std::nullopt},
              {"E2 regrets at (9, 12)", {0, 0}, ClaimSource::kPublished,
               "g_d(s, 12) <= g_d(9, 12) and g_e(9, t) <= g_e(9, 12)", std::nullopt},
              {"E1 regrets at (1, 2, 4)", {0, 0, 0}, ClaimSource::kPublished,
               "f_c(1, 2, z) <= f_c(1, 2, 4) for all z", std::vector<double>{0, 0, c_regret}},
              {"player c best response to (1, 2) is a * b", {2}, ClaimSource::kDerived,
               "maximizer of sqrt(a b z) - z / 2 is z = a b", std::nullopt},
              {"E1 utilities at (1, 2, 4)", {4, 6, 2 * std::sqrt(2.0) - 2}, ClaimSource::kDerived,
               "direct evaluation", std::nullopt},
              {"E2 utilities at (9, 12)", {27, 1296}, ClaimSource::kDerived, "direct evaluation", std::nullopt},
          }};
}

// Game N: f_i = -(x_i - a_i)^2, game M: g_j = -(y_j - b_j)^2, both on
// [0, 10 max(|a|, |b|, 1)]. a is a split equilibrium iff matrix * a = b.
inline NamedInstance quadratic_split_instance(const std::vector<double>& a, const LinearOperator& matrix,
                                              const std::vector<double>& b, std::string id = "quadratic") {
  if (a.empty() || b.empty()) throw DimensionError("quadratic instance needs nonempty targets");
  if (matrix.cols() != a.size() || matrix.rows() != b.size()) {
    throw DimensionError("quadratic instance: matrix shape does not match target lengths");
  }
  double scale = 1.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (double v : b) scale = std::max(scale, std::abs(v));
  const double hi = 10.0 * scale;
  const std::vector<double> image = matrix.apply(a);
  bool hits = true;
  for (std::size_t j = 0; j < b.size(); ++j) hits = hits && std::abs(image[j] - b[j]) <= 1e-12 * std::max(1.0, std::abs(b[j]));
  std::vector<ReferenceClaim> claims;
  claims.push_back({"image of the dominant-strategy profile", image, ClaimSource::kDerived, "matrix times a",
                    std::nullopt});
  claims.push_back({hits ? "split solution set is {a}" : "split solution set is empty", hits ? a : std::vector<double>{},
                    ClaimSource::kDerived, "dominant strategies on both sides", std::nullopt});
  return {std::move(id),
          SplitProblem(detail::quadratic_game("x", a, hi), detail::quadratic_game("y", b, hi), matrix),
          std::move(claims)};
}

inline NamedInstance bertrand_instance(double c1, double c2, const LinearDemand& demand = {},
                                       std::string id = "") {
  BertrandModel model(c1, c2, make_demand(demand));
  if (id.empty()) {
    auto fmt = [](double v) {
      std::string s = std::to_string(v);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    };
    id = "bertrand-" + fmt(c1) + "-" + fmt(c2);
  }
  std::vector<ReferenceClaim> claims{
      {"unique equilibrium at cost prices", {c1, c2}, ClaimSource::kPublished,
       "both firms set their prices equal to their costs", std::nullopt},
      {"profits at cost prices", {0, 0}, ClaimSource::kPublished, "u_j(c1, c2) = (c_j - c_j) delta_j(c1, c2) = 0",
       std::nullopt},
      {"quality ratio", {c1 / c2}, ClaimSource::kImmediate, "lambda = c1 / c2", std::nullopt},
      {"demand at cost prices", {model.demand(c1, c2)}, ClaimSource::kDerived, "direct evaluation", std::nullopt},
  };
  return {std::move(id), std::move(model), std::move(claims)};
}

// f_i = x_i^2 on [-1, 1]^2 with the identity operator: convex in own
// strategy, so the concavity-based properties fail. The sets straddle 0
// because x^2 is monotone on [0, 1], where min-dominance still holds.
inline NamedInstance convex_counterexample() {
  Game g = Game::from_expressions({"x1", "x2"}, {Interval(-1.0, 1.0), Interval(-1.0, 1.0)},
                                  {parse_utility("x1^2"), parse_utility("x2^2")});
  return {"convex-counterexample", make_repeated_problem(g, LinearOperator::identity(2)), {}};
}

inline std::vector<std::string> builtin_ids() {
  return {"example-4.1",      "example-4.1:E1",   "example-4.1:E2",     "quadratic-sanity",
          "quadratic-sanity:N", "quadratic-sanity:M", "quadratic-mismatch", "quadratic-markov",
          "convex-counterexample", "bertrand-1-2",  "bertrand-1-1"};
}

inline NamedInstance builtin_instance(std::string_view id) {
  const LinearOperator swap = LinearOperator::from_rows({{0, 1}, {1, 0}});
  auto as_game = [](NamedInstance inst, std::string new_id, bool second) {
    Game g = second ? inst.split().game_m() : inst.split().game_n();
    return NamedInstance{std::move(new_id), std::move(g), {}};
  };
  if (id == "example-4.1") return example_4_1();
  if (id == "example-4.1:E1") {
    NamedInstance inst = as_game(example_4_1(), "example-4.1:E1", false);
    inst.claims = example_4_1().claims;
    return inst;
  }
  if (id == "example-4.1:E2") {
    NamedInstance inst = as_game(example_4_1(), "example-4.1:E2", true);
    inst.claims = example_4_1().claims;
    return inst;
  }
  if (id == "quadratic-sanity") return quadratic_split_instance({1, 2}, swap, {2, 1}, "quadratic-sanity");
  if (id == "quadratic-sanity:N")
    return as_game(quadratic_split_instance({1, 2}, swap, {2, 1}), "quadratic-sanity:N", false);
  if (id == "quadratic-sanity:M")
    return as_game(quadratic_split_instance({1, 2}, swap, {2, 1}), "quadratic-sanity:M", true);
  if (id == "quadratic-mismatch") return quadratic_split_instance({1, 2}, swap, {1, 2}, "quadratic-mismatch");
  if (id == "quadratic-markov") {
    const TransitionMatrix m = validate_transition_matrix({{0.5, 0.5}, {0.5, 0.5}});
    return quadratic_split_instance({1, 1}, m.op(), {1, 1}, "quadratic-markov");
  }
  if (id == "convex-counterexample") return convex_counterexample();
  if (id == "bertrand-1-2") return bertrand_instance(1.0, 2.0, {}, "bertrand-1-2");
  if (id == "bertrand-1-1") return bertrand_instance(1.0, 1.0, {}, "bertrand-1-1");
  throw ValidationError("unknown built-in instance '" + std::string(id) + "'");
}

}  // namespace splitnash
