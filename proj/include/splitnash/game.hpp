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

// n-person noncooperative games over box strategy sets.
//
// A profile is one real vector partitioned into per-player blocks in player
// order. For profiles z and x, the diagonal payoff F(z, x) is the vector whose
// i-th entry is player i's utility when i plays z's block against x's other
// blocks; F(x, x) is the plain utility vector f(x). x is a Nash equilibrium
// when F(z, x) <= f(x) componentwise for every feasible z.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splitnash/error.hpp"
#include "splitnash/expr.hpp"
#include "splitnash/numeric.hpp"
#include "splitnash/parallel.hpp"

namespace splitnash {

class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<double> values) : values_(std::move(values)) {}
  Profile(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool operator==(const Profile&) const = default;

 private:
  std::vector<double> values_;
};

// Utility of one player, evaluated on a full profile.
using UtilityFn = std::function<double(std::span<const double>)>;

struct PlayerSpec {
  std::string id;
  Box strategy_set;
  UtilityFn utility;
  std::optional<UtilityExpr> expression;  // source, when built from text
};

class Game {
 public:
  explicit Game(std::vector<PlayerSpec> players) : players_(std::move(players)) {
    if (players_.empty()) throw ValidationError("game needs at least one player");
    for (std::size_t i = 0; i < players_.size(); ++i) {
      if (players_[i].id.empty()) throw ValidationError("player id must be nonempty");
      if (!players_[i].utility) throw ValidationError("player '" + players_[i].id + "' has no utility");
      for (std::size_t j = 0; j < i; ++j) {
        if (players_[j].id == players_[i].id)
          throw ValidationError("duplicate player id '" + players_[i].id + "'");
      }
      offsets_.push_back(dimension_);
      dimension_ += players_[i].strategy_set.size();
    }
  }

  // One scalar strategy per player; expression variables are player ids.
  static Game from_expressions(const std::vector<std::string>& ids, const std::vector<Interval>& sets,
                               const std::vector<UtilityExpr>& utilities) {
    if (ids.size() != sets.size() || ids.size() != utilities.size()) {
      throw ValidationError("players, strategy sets and utilities must have equal length");
    }
    std::vector<PlayerSpec> players;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      CompiledExpr compiled(utilities[i], ids);
      players.push_back({ids[i], Box{sets[i]},
                         [compiled = std::move(compiled)](std::span<const double> x) { return compiled(x); },
                         utilities[i]});
    }
    return Game(std::move(players));
  }

  std::size_t num_players() const { return players_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::string& player_id(std::size_t i) const { return players_.at(i).id; }
  const Box& strategy_set(std::size_t i) const { return players_.at(i).strategy_set; }
  const std::optional<UtilityExpr>& expression(std::size_t i) const { return players_.at(i).expression; }
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  std::size_t block_size(std::size_t i) const { return players_.at(i).strategy_set.size(); }

  std::size_t player_index(std::string_view id) const {
    for (std::size_t i = 0; i < players_.size(); ++i) {
      if (players_[i].id == id) return i;
    }
    throw ValidationError("unknown player '" + std::string(id) + "'");
  }

  // Concatenation of every player's strategy set.
  Box profile_box() const {
    std::vector<Interval> all;
    for (const auto& p : players_) all.insert(all.end(), p.strategy_set.begin(), p.strategy_set.end());
    return Box(std::move(all));
  }

  bool feasible(const Profile& x, double slack = 0.0) const {
    return x.size() == dimension_ && profile_box().contains(x.span(), slack);
  }

  void check_dimension(const Profile& x) const {
    if (x.size() != dimension_) {
      throw DimensionError("profile has " + std::to_string(x.size()) + " entries, game expects " +
                           std::to_string(dimension_));
    }
  }

  std::span<const double> block(const Profile& x, std::size_t i) const {
    return x.span().subspan(offset(i), block_size(i));
  }

  Profile with_block(const Profile& x, std::size_t i, std::span<const double> block) const {
    check_dimension(x);
    if (block.size() != block_size(i)) throw DimensionError("strategy block size mismatch");
    Profile out = x;
    std::copy(block.begin(), block.end(), &out[offset(i)]);
    return out;
  }

  double utility(std::size_t i, std::span<const double> x) const {
    const double v = players_.at(i).utility(x);
    if (!std::isfinite(v)) throw DomainError("utility of player '" + players_[i].id + "' is not finite");
    return v;
  }
  double utility(std::size_t i, const Profile& x) const {
    check_dimension(x);
    return utility(i, x.span());
  }

  std::vector<double> utilities(const Profile& x) const {
    check_dimension(x);
    std::vector<double> out(players_.size());
    for (std::size_t i = 0; i < players_.size(); ++i) out[i] = utility(i, x.span());
    return out;
  }

 private:
  std::vector<PlayerSpec> players_;
  std::vector<std::size_t> offsets_;
  std::size_t dimension_ = 0;
};

inline bool order_leq(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionError("order_leq: dimension mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] <= v[i])) return false;
  }
  return true;
}

// order_leq with a relative slack of tol * max(1, |u_i|, |v_i|) per entry.
inline bool order_leq(std::span<const double> u, std::span<const double> v, double tol) {
  if (u.size() != v.size()) throw DimensionError("order_leq: dimension mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!detail::approx_leq(u[i], v[i], tol)) return false;
  }
  return true;
}

// F(z, x): entry i is f_i(z_i, x_{-i}).
inline std::vector<double> diagonal_payoff(const Game& game, const Profile& z, const Profile& x) {
  game.check_dimension(z);
  game.check_dimension(x);
  std::vector<double> out(game.num_players());
  std::vector<double> scratch = x.values();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const std::size_t off = game.offset(i);
    const std::size_t n = game.block_size(i);
    std::copy_n(z.values().begin() + static_cast<std::ptrdiff_t>(off), n,
                scratch.begin() + static_cast<std::ptrdiff_t>(off));
    out[i] = game.utility(i, scratch);
    std::copy_n(x.values().begin() + static_cast<std::ptrdiff_t>(off), n,
                scratch.begin() + static_cast<std::ptrdiff_t>(off));
  }
  return out;
}

struct BestResponse {
  std::vector<double> strategy;
  double value;
};

// Maximizes f_i(., x_{-i}) over S_i: maximize_1d for scalar strategies,
// multistart projected gradient ascent otherwise.
inline BestResponse best_response(const Game& game, std::size_t player, const Profile& x,
                                  const SearchBudget& budget) {
  game.check_dimension(x);
  const std::size_t off = game.offset(player);
  const Box& set = game.strategy_set(player);
  std::vector<double> scratch = x.values();

  if (set.size() == 1) {
    auto f = [&](double t) {
      scratch[off] = t;
      return game.utility(player, scratch);
    };
    const Maximum1d m = maximize_1d(f, set[0], budget);
    return {{m.argmax}, m.value};
  }

  auto f = [&](std::span<const double> block) {
    std::copy(block.begin(), block.end(), scratch.begin() + static_cast<std::ptrdiff_t>(off));
    return game.utility(player, scratch);
  };
  std::vector<std::vector<double>> starts;
  const auto current = game.block(x, player);
  starts.emplace_back(current.begin(), current.end());
  std::vector<double> mid(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    mid[k] = 0.5 * (set[k].lo() + set[k].truncated_hi(budget.truncation_cap));
  }
  starts.push_back(mid);
  std::mt19937_64 rng(budget.seed ^ (0x9e3779b97f4a7c15ULL * (player + 1)));
  for (int s = 0; s < 6; ++s) {
    std::vector<double> p(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) {
      p[k] = detail::uniform(rng, set[k].lo(), set[k].truncated_hi(budget.truncation_cap));
    }
    starts.push_back(std::move(p));
  }
  BestResponse best{{}, -kInfinity};
  for (const auto& s : starts) {
    BoxMaximum m = projected_gradient_ascent(f, set, s, budget);
    if (m.value > best.value) best = {std::move(m.point), m.value};
  }
  return best;
}

struct Regrets {
  std::vector<double> values;

  double max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
};

struct PlayerVerdict {
  std::string player;
  double current_value = 0.0;
  double best_value = 0.0;
  std::vector<double> best_response;  // argmax witness
  double regret = 0.0;
};

// Outcome of an epsilon-Nash check at one profile.
struct NashReport {
  bool verdict = false;
  double tolerance = 0.0;
  Profile profile;
  std::vector<PlayerVerdict> players;

  double max_regret() const {
    double m = 0.0;
    for (const auto& p : players) m = std::max(m, p.regret);
    return m;
  }
  std::vector<std::size_t> failing_players() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < players.size(); ++i) {
      if (players[i].regret > tolerance) out.push_back(i);
    }
    return out;
  }
  Regrets regrets() const {
    Regrets r;
    for (const auto& p : players) r.values.push_back(p.regret);
    return r;
  }
};

namespace detail {

// Regret is clamped at zero: the incumbent strategy is itself a feasible
// deviation, so a maximizer that undershoots it only reflects rounding.
inline PlayerVerdict player_verdict(const Game& game, std::size_t i, const Profile& x,
                                    const SearchBudget& budget) {
  const double current = game.utility(i, x);
  BestResponse br = best_response(game, i, x, budget);
  return {game.player_id(i), current, br.value, std::move(br.strategy), std::max(0.0, br.value - current)};
}

}  // namespace detail

inline Regrets nash_regrets(const Game& game, const Profile& x, const SearchBudget& budget) {
  Regrets r;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    r.values.push_back(detail::player_verdict(game, i, x, budget).regret);
  }
  return r;
}

inline NashReport verify_nash(const Game& game, const Profile& x, const SearchBudget& budget) {
  budget.validate();
  game.check_dimension(x);
  if (!game.feasible(x)) throw InfeasibleProfile("profile lies outside the game's strategy sets");
  NashReport report;
  report.tolerance = budget.tolerance;
  report.profile = x;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    report.players.push_back(detail::player_verdict(game, i, x, budget));
  }
  report.verdict = report.max_regret() <= budget.tolerance;
  return report;
}

struct NashSolveOptions {
  int starts = 32;
  double damping = 0.5;
};

// Multistart damped simultaneous best-response iteration. Start 0 is the
// lower corner of the profile box; the rest are seeded uniform draws over the
// (truncated) box. Starts that fail to converge or leave the evaluators'
// domain are dropped. Fixed points within 10 * tolerance are merged (first
// start wins) and only profiles passing verify_nash are returned.
inline std::vector<Profile> solve_nash(const Game& game, const SearchBudget& budget,
                                       const NashSolveOptions& options = {}) {
  budget.validate();
  const Box box = game.profile_box();
  const std::size_t n_starts = static_cast<std::size_t>(std::max(options.starts, 1));

  std::vector<Profile> starts;
  std::mt19937_64 rng(budget.seed);
  for (std::size_t s = 0; s < n_starts; ++s) {
    std::vector<double> p(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) {
      p[k] = s == 0 ? box[k].lo()
                    : detail::uniform(rng, box[k].lo(), box[k].truncated_hi(budget.truncation_cap));
    }
    starts.emplace_back(std::move(p));
  }

  auto run = [&](std::size_t s) -> std::optional<Profile> {
    try {
      Profile x = starts[s];
      for (int it = 0; it < budget.max_iterations; ++it) {
        Profile next = x;
        for (std::size_t i = 0; i < game.num_players(); ++i) {
          const BestResponse br = best_response(game, i, x, budget);
          for (std::size_t k = 0; k < br.strategy.size(); ++k) {
            const std::size_t idx = game.offset(i) + k;
            next[idx] = box[idx].clamp(x[idx] + options.damping * (br.strategy[k] - x[idx]));
          }
        }
        const double change = detail::inf_distance(next.span(), x.span());
        x = std::move(next);
        if (change < budget.tolerance) return x;
      }
    } catch (const Error&) {
    }
    return std::nullopt;
  };
  const std::vector<std::optional<Profile>> fixed_points = detail::parallel_map(n_starts, run);

  std::vector<Profile> unique;
  for (const auto& fp : fixed_points) {
    if (!fp) continue;
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Profile& u) {
      return detail::inf_distance(u.span(), fp->span()) <= 10.0 * budget.tolerance;
    });
    if (!seen) unique.push_back(*fp);
  }
  std::vector<Profile> verified;
  for (const auto& p : unique) {
    try {
      if (verify_nash(game, p, budget).verdict) verified.push_back(p);
    } catch (const Error&) {
    }
  }
  return verified;
}

// z is in Gamma_N(x) iff f_i(x_i, z_{-i}) <= f_i(z) for every player i.
inline bool gamma_membership(const Game& game, const Profile& x, const Profile& z, double tolerance) {
  return order_leq(diagonal_payoff(game, x, z), game.utilities(z), tolerance);
}

struct ConcavityWitness {
  std::size_t player;
  Profile opponents;  // full profile supplying x_{-i}
  std::vector<double> u;
  std::vector<double> v;
  double lambda;
  double combined_value;     // f_i(lambda u + (1 - lambda) v, x_{-i})
  double interpolated_value; // lambda f_i(u, x_{-i}) + (1 - lambda) f_i(v, x_{-i})
};

struct ConcavityReport {
  std::size_t samples = 0;
  std::vector<bool> player_pass;
  std::vector<ConcavityWitness> violations;

  bool pass() const { return violations.empty(); }
};

// Samples own-strategy concavity of every utility with random opponents.
inline ConcavityReport concavity_sample_check(const Game& game, std::size_t samples, std::uint64_t seed,
                                              const SearchBudget& budget = {}) {
  const Box box = game.profile_box();
  std::mt19937_64 rng(seed);
  auto draw = [&](const Interval& iv) {
    return detail::uniform(rng, iv.lo(), iv.truncated_hi(budget.truncation_cap));
  };
  ConcavityReport report;
  report.samples = samples;
  report.player_pass.assign(game.num_players(), true);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> base(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) base[k] = draw(box[k]);
    const Profile x(base);
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const Box& set = game.strategy_set(i);
      std::vector<double> u(set.size()), v(set.size()), w(set.size());
      for (std::size_t k = 0; k < set.size(); ++k) {
        u[k] = draw(set[k]);
        v[k] = draw(set[k]);
      }
      const double lambda = detail::uniform01(rng);
      for (std::size_t k = 0; k < set.size(); ++k) w[k] = set[k].clamp(lambda * u[k] + (1 - lambda) * v[k]);
      const double fu = game.utility(i, game.with_block(x, i, u));
      const double fv = game.utility(i, game.with_block(x, i, v));
      const double fw = game.utility(i, game.with_block(x, i, w));
      const double interp = lambda * fu + (1 - lambda) * fv;
      if (!detail::approx_leq(interp, fw, budget.tolerance)) {
        report.player_pass[i] = false;
        report.violations.push_back({i, x, u, v, lambda, fw, interp});
      }
    }
  }
  return report;
}

}  // namespace splitnash
