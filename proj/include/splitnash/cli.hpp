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

// Command-line front end. Exit codes: 0 verdict true / nonempty result,
// 1 verdict false / empty result / unexpected audit mismatch, 2 input error,
// 3 a published claim contradicted by its oracle in the documented way.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "splitnash/bertrand.hpp"
#include "splitnash/game.hpp"
#include "splitnash/io.hpp"
#include "splitnash/models.hpp"
#include "splitnash/repeated.hpp"
#include "splitnash/split.hpp"

namespace splitnash::cli {

using Json = nlohmann::json;

enum ExitCode : int { kOk = 0, kFalse = 1, kInputError = 2, kDiscrepancy = 3 };

inline constexpr int kSchemaVersion = 1;

struct Options {
  SearchBudget budget;
  std::size_t samples = 1000;
  std::string format = "text";
  std::string out;
  bool deterministic = false;
  std::string profile;
  std::string range;
  std::string costs;
  std::string region;
  std::size_t points = 8;
  int starts = 32;
  std::size_t ab_grid = 5;
  bool diagonal = false;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void instance(const std::string& id) { instances_.push_back(id); }
  void verdict(const std::string& name, bool value, double tolerance) {
    verdicts_.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}});
    line(name + ": " + (value ? "true" : "false") + " (tolerance " + fmt(tolerance) + ")");
  }
  void discrepancy(const std::string& claim, Json published, Json oracle, const std::string& note) {
    discrepancies_.push_back({{"claim", claim}, {"published", std::move(published)}, {"oracle", std::move(oracle)},
                              {"note", note}});
    line("DISCREPANCY " + claim + ": " + note);
  }
  Json& results() { return results_; }
  void line(const std::string& text) { lines_.push_back(text); }

  Json to_json(int exit_code, double duration, const SearchBudget& budget) const {
    return {{"schema_version", kSchemaVersion},
            {"command", command_},
            {"instances", instances_},
            {"budget", io::budget_to_json(budget)},
            {"verdicts", verdicts_},
            {"results", results_},
            {"discrepancies", discrepancies_},
            {"exit_code", exit_code},
            {"duration_seconds", duration}};
  }

  std::string to_text(int exit_code) const {
    std::ostringstream os;
    os << command_;
    for (const auto& i : instances_) os << ' ' << i;
    os << '\n';
    for (const auto& l : lines_) os << "  " << l << '\n';
    os << "exit " << exit_code << '\n';
    return os.str();
  }

  static std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
  }
  static std::string fmt(const std::vector<double>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
    return s + ")";
  }

 private:
  std::string command_;
  std::vector<std::string> instances_;
  Json verdicts_ = Json::array();
  Json results_ = Json::object();
  Json discrepancies_ = Json::array();
  std::vector<std::string> lines_;
};

namespace detail {

inline bool is_builtin(const std::string& id) {
  const auto ids = builtin_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// Built-in id or path to a game / split-problem JSON file.
inline NamedInstance resolve(const std::string& target) {
  if (is_builtin(target)) return builtin_instance(target);
  const Json j = io::read_json_file(target);
  if (j.is_object() && j.contains("game_n")) return {target, io::split_from_json(j), {}};
  if (j.is_object() && j.contains("players")) return {target, io::game_from_json(j), {}};
  throw ValidationError("'" + target + "' is neither a game nor a split-problem spec");
}

inline const Game& need_game(const NamedInstance& inst) {
  if (!std::holds_alternative<Game>(inst.problem)) throw ValidationError("'" + inst.id + "' is not a game");
  return inst.game();
}

inline const SplitProblem& need_split(const NamedInstance& inst) {
  if (!std::holds_alternative<SplitProblem>(inst.problem)) {
    throw ValidationError("'" + inst.id + "' is not a split problem");
  }
  return inst.split();
}

inline Profile need_profile(const Options& o, std::size_t dim) {
  if (o.profile.empty()) throw ValidationError("--profile is required");
  Profile p(io::parse_real_list(o.profile, "profile"));
  if (p.size() != dim) {
    throw DimensionError("profile has " + std::to_string(p.size()) + " entries, expected " + std::to_string(dim));
  }
  return p;
}

inline void describe_nash(Report& r, const std::string& label, const NashReport& n) {
  for (const auto& p : n.players) {
    r.line(label + "player " + p.player + ": value " + Report::fmt(p.current_value) + ", best " +
           Report::fmt(p.best_value) + " at " + Report::fmt(p.best_response) + ", regret " + Report::fmt(p.regret) +
           (p.regret > n.tolerance ? "  <- fails" : ""));
  }
}

inline std::optional<PriceRange> price_range(const Options& o) {
  if (o.range.empty()) return std::nullopt;
  const auto v = io::parse_real_list(o.range, "range");
  if (v.size() != 2) throw ValidationError("--range expects lo,hi");
  return PriceRange{v[0], v[1], v[0], v[1]};
}

inline BertrandModel bertrand_model(const Options& o, const std::string& fallback_id) {
  if (o.costs.empty()) return builtin_instance(fallback_id).bertrand();
  const auto c = io::parse_real_list(o.costs, "costs");
  if (c.size() != 2) throw ValidationError("--costs expects c1,c2");
  return BertrandModel(c[0], c[1]);
}

inline Json profiles_json(const std::vector<Profile>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(io::numbers(p));
  return a;
}

}  // namespace detail

inline int cmd_verify_nash(const std::string& target, const Options& o, Report& r) {
  const NamedInstance inst = detail::resolve(target);
  r.instance(inst.id);
  const Game& g = detail::need_game(inst);
  const Profile x = detail::need_profile(o, g.dimension());
  const NashReport n = verify_nash(g, x, o.budget);
  r.results()["nash"] = io::nash_to_json(n);
  detail::describe_nash(r, "", n);
  r.verdict("nash_equilibrium", n.verdict, n.tolerance);
  return n.verdict ? kOk : kFalse;
}

inline int cmd_solve_nash(const std::string& target, const Options& o, Report& r) {
  const NamedInstance inst = detail::resolve(target);
  r.instance(inst.id);
  const Game& g = detail::need_game(inst);
  const auto eq = solve_nash(g, o.budget, {o.starts, 0.5});
  r.results()["equilibria"] = detail::profiles_json(eq);
  for (const auto& p : eq) r.line("equilibrium " + Report::fmt(p.values()));
  r.verdict("nonempty", !eq.empty(), o.budget.tolerance);
  return eq.empty() ? kFalse : kOk;
}

inline int cmd_verify_split(const std::string& target, const Options& o, Report& r) {
  const NamedInstance inst = detail::resolve(target);
  r.instance(inst.id);
  const SplitProblem& p = detail::need_split(inst);
  const Profile x = detail::need_profile(o, p.game_n().dimension());
  const SplitReport s = verify_split_equilibrium(p, x, o.budget);
  r.results()["split"] = io::split_report_to_json(s);
  r.results()["relatedness"] = io::relatedness_to_json(p.relatedness());
  r.line("image " + Report::fmt(s.image.values()));
  detail::describe_nash(r, "N ", s.game_n);
  detail::describe_nash(r, "M ", s.game_m);
  r.verdict("split_equilibrium", s.verdict, s.tolerance);
  return s.verdict ? kOk : kFalse;
}

inline int cmd_solve_split(const std::string& target, const Options& o, Report& r) {
  const NamedInstance inst = detail::resolve(target);
  r.instance(inst.id);
  const SplitProblem& p = detail::need_split(inst);
  const auto sol = solve_split(p, o.budget, {o.starts, 0.5});
  r.results()["solutions"] = detail::profiles_json(sol);
  r.results()["relatedness"] = io::relatedness_to_json(p.relatedness());
  for (const auto& x : sol) r.line("split equilibrium " + Report::fmt(x.values()));
  r.verdict("nonempty", !sol.empty(), o.budget.tolerance);
  return sol.empty() ? kFalse : kOk;
}

inline int cmd_cdp_check(const std::string& target, const Options& o, Report& r) {
  const NamedInstance inst = detail::resolve(target);
  r.instance(inst.id);
  const SplitProblem& p = detail::need_split(inst);
  const CdpReport c = cdp_sample_check(p, o.samples, o.budget.seed, o.budget);
  r.results()["cdp"] = io::cdp_to_json(c);
  r.line("samples " + std::to_string(c.samples_tested) + ", joint failures " + std::to_string(c.joint_failures.size()) +
         ", vector-form failures " + std::to_string(c.vector_form_failures.size()) + ", min-dominance failures " +
         std::to_string(c.min_dominance_failures.size()));
  r.verdict("min_dominance_holds", c.min_dominance_failures.empty(), o.budget.tolerance);
  r.verdict("cdp_holds_on_samples", c.joint_failures.empty(), o.budget.tolerance);
  return c.joint_failures.empty() ? kOk : kFalse;
}

inline ProbeResult run_probe(const SplitProblem& p, const Options& o) {
  ProbeGrid grid{o.points, std::nullopt};
  if (!o.region.empty()) {
    const auto v = io::parse_real_list(o.region, "region");
    if (v.size() != 2) throw ValidationError("--region expects lo,hi");
    grid.region = Box::uniform(p.game_n().dimension(), Interval(v[0], v[1]));
  }
  return kkm_intersection_probe(p, grid, o.budget);
}

inline int cmd_kkm_probe(const std::string& target, const Options& o, Report& r) {
  const NamedInstance inst = detail::resolve(target);
  r.instance(inst.id);
  const SplitProblem& p = detail::need_split(inst);
  const ProbeResult pr = run_probe(p, o);
  r.results()["probe"] = io::probe_to_json(pr);
  r.line(std::to_string(pr.members.size()) + " of " + std::to_string(pr.grid_points) +
         " grid points in the intersection (cell diameter " + Report::fmt(pr.cell_diameter) + ")");
  for (std::size_t k = 0; k < pr.members.size(); ++k) {
    r.line("member " + Report::fmt(pr.members[k].values()) + (pr.checks[k].verdict ? " passes" : " fails") +
           " verify-split");
  }
  r.verdict("intersection_nonempty", !pr.members.empty(), o.budget.tolerance);
  r.verdict("members_pass_verify_split", pr.all_members_pass, pr.check_tolerance);
  return !pr.members.empty() && pr.all_members_pass ? kOk : kFalse;
}

namespace detail {

inline BertrandModel resolve_bertrand(const std::string& target, const Options& o) {
  if (!o.costs.empty()) return bertrand_model(o, "bertrand-1-2");
  const NamedInstance inst = builtin_instance(target.empty() ? "bertrand-1-2" : target);
  if (!std::holds_alternative<BertrandModel>(inst.problem)) {
    throw ValidationError("'" + inst.id + "' is not a price duopoly");
  }
  return inst.bertrand();
}

inline std::string costs_id(const BertrandModel& m) {
  return "bertrand(" + Report::fmt(m.c1()) + "," + Report::fmt(m.c2()) + ")";
}

}  // namespace detail

inline int cmd_bertrand_enumerate(const std::string& target, const Options& o, Report& r) {
  const BertrandModel m = detail::resolve_bertrand(target, o);
  r.instance(detail::costs_id(m));
  const auto eq = enumerate_grid_equilibria(m, o.budget.grid_step, detail::price_range(o), o.budget.tolerance);
  r.results()["equilibria"] = io::price_pairs_to_json(eq);
  r.results()["count"] = eq.size();
  r.line(std::to_string(eq.size()) + " grid equilibria");
  for (const auto& p : eq) r.line("(" + Report::fmt(p.p1) + ", " + Report::fmt(p.p2) + ")");
  r.verdict("nonempty", !eq.empty(), o.budget.tolerance);
  return eq.empty() ? kFalse : kOk;
}

// Worked two-economy example: replays every published value against its
// oracle. Player c's regret at (1, 2, 4) is the documented discrepancy.
inline int audit_example(const Options& o, Report& r) {
  const NamedInstance inst = example_4_1();
  r.instance(inst.id);
  const SplitProblem& p = inst.split();
  const double tol = o.budget.tolerance;
  const Profile x{1, 2, 4};
  bool replay_ok = true;
  auto check = [&](const std::string& name, bool value, double t) {
    r.verdict(name, value, t);
    replay_ok = replay_ok && value;
  };

  const Profile image = apply_operator(p.op(), x);
  r.results()["image"] = io::numbers(image);
  check("image_is_9_12", image == Profile{9, 12}, 0.0);
  check("relatedness_holds", p.relatedness().holds, 0.0);

  const NashReport e2 = verify_nash(p.game_m(), image, o.budget);
  r.results()["e2"] = io::nash_to_json(e2);
  detail::describe_nash(r, "E2 ", e2);
  check("e2_equilibrium", e2.verdict, tol);
  const bool br_ok = std::abs(e2.players[0].best_response[0] - 9.0) <= 1e-4 &&
                     std::abs(e2.players[1].best_response[0] - 12.0) <= 1e-4;
  check("e2_best_responses_at_9_12", br_ok, 1e-4);

  const NashReport e1 = verify_nash(p.game_n(), x, o.budget);
  r.results()["e1"] = io::nash_to_json(e1);
  detail::describe_nash(r, "E1 ", e1);
  check("e1_players_a_b_no_regret", e1.players[0].regret <= tol && e1.players[1].regret <= tol, tol);
  const double c_oracle = 3.0 - 2.0 * std::sqrt(2.0);
  const double c_regret = e1.players[2].regret;
  check("player_c_regret_matches_oracle", std::abs(c_regret - c_oracle) <= 1e-4, 1e-4);
  check("player_c_best_response_is_ab", std::abs(e1.players[2].best_response[0] - 2.0) <= 1e-4, 1e-4);

  const SplitReport split = verify_split_equilibrium(p, x, o.budget);
  r.results()["split"] = io::split_report_to_json(split);
  r.verdict("split_equilibrium", split.verdict, tol);

  const bool contradicted = c_regret > tol;
  if (contradicted) {
    r.discrepancy("(1, 2, 4) is a Nash equilibrium of E1", Json{{"player_c_regret", 0.0}},
                  Json{{"player_c_regret", c_regret}, {"player_c_best_response", e1.players[2].best_response[0]}},
                  "player c gains 3 - 2 sqrt(2) by moving from z = 4 to z = a b = 2");
  }
  if (!replay_ok) return kFalse;
  return contradicted ? kDiscrepancy : kOk;
}

inline int audit_bertrand(const Options& o, Report& r) {
  const BertrandModel m = detail::resolve_bertrand("", o);
  r.instance(detail::costs_id(m));
  const double step = o.budget.grid_step;
  // Default window [0, min(cap, 2.5 c2)]^2 keeps the audit away from the
  // demand-exhaustion frontier, where grid-only equilibria appear (see below).
  const double window = std::min({m.price_caps()[0], m.price_caps()[1], 2.5 * m.c2()});
  const PriceRange range = detail::price_range(o).value_or(PriceRange{0.0, window, 0.0, window});
  const auto eq = enumerate_grid_equilibria(m, step, range, o.budget.tolerance);
  bool has_cost = false;
  bool within_band = true;
  bool certificates_ok = true;
  std::size_t no_demand = 0;
  Json members = Json::array();
  for (const auto& pp : eq) {
    const DeviationCertificate cert = deviation_certificate(m, pp.p1, pp.p2);
    if (cert.region == PricingRegion::kNoDemand) {
      ++no_demand;  // outside the priced-to-sell region the uniqueness argument covers
    } else {
      within_band = within_band && std::max(std::abs(pp.p1 - m.c1()), std::abs(pp.p2 - m.c2())) <= 3.0 * step + 1e-12;
      certificates_ok = certificates_ok && cert.valid;
    }
    if (std::abs(pp.p1 - m.c1()) <= kTieTolerance && std::abs(pp.p2 - m.c2()) <= kTieTolerance) has_cost = true;
    members.push_back({{"prices", {pp.p1, pp.p2}},
                       {"region", to_string(cert.region)},
                       {"deviating_firm", cert.firm},
                       {"deviation_price", io::number(cert.deviation_price)},
                       {"current_profit", io::number(cert.current_profit)},
                       {"deviation_profit", io::number(cert.deviation_profit)},
                       {"certificate_valid", cert.valid}});
  }
  if (!detail::price_range(o)) {
    // Informational: on the full default range, grid points near delta = 0
    // survive because every improving deviation falls between grid prices.
    const PriceRange wide = default_price_range(m);
    std::size_t frontier = 0;
    double max_demand = 0.0;
    for (const auto& pp : enumerate_grid_equilibria(m, step, wide, o.budget.tolerance)) {
      const double d = m.demand(pp.p1, pp.p2);
      if (d > 0 && std::max(std::abs(pp.p1 - m.c1()), std::abs(pp.p2 - m.c2())) > 3.0 * step + 1e-12) {
        ++frontier;
        max_demand = std::max(max_demand, d);
      }
    }
    r.results()["full_range"] = {{"range", {wide.lo1, wide.hi1, wide.lo2, wide.hi2}},
                                 {"out_of_band_members_with_demand", frontier},
                                 {"max_demand_among_them", max_demand}};
    r.line("full range [0, " + Report::fmt(wide.hi1) + "]: " + std::to_string(frontier) +
           " out-of-band grid equilibria with demand <= " + Report::fmt(max_demand));
  }
  const auto at_cost = profits(m, m.c1(), m.c2());
  r.results()["range"] = {range.lo1, range.hi1, range.lo2, range.hi2};
  r.results()["members"] = members;
  r.results()["count"] = eq.size();
  r.results()["no_demand_members"] = no_demand;
  r.results()["profits_at_cost"] = {at_cost[0], at_cost[1]};
  r.line(std::to_string(eq.size()) + " grid equilibria (" + std::to_string(no_demand) + " with no demand)");
  r.verdict("contains_cost_prices", has_cost, kTieTolerance);
  r.verdict("profits_at_cost_are_zero", at_cost[0] == 0.0 && at_cost[1] == 0.0, 0.0);
  r.verdict("members_within_three_steps", within_band, 3.0 * step);
  r.verdict("off_cost_members_have_improving_deviation", certificates_ok, 0.0);
  return has_cost && at_cost[0] == 0.0 && at_cost[1] == 0.0 && within_band && certificates_ok ? kOk : kFalse;
}

inline int audit_markov(const Options& o, Report& r) {
  const auto matrices = markov_matrix_grid(o.ab_grid, o.diagonal);
  const BertrandModel unequal = detail::resolve_bertrand("", o);
  const BertrandModel equal(unequal.c1(), unequal.c1());
  bool all_match = true;
  std::size_t disagreements = 0;
  Json audits = Json::array();
  for (const BertrandModel* m : {&equal, &unequal}) {
    if (m == &unequal && unequal.c1() == unequal.c2()) continue;
    r.instance(detail::costs_id(*m));
    const MarkovSplitAudit a = audit_markov_split(*m, matrices, o.budget.grid_step, o.budget.tolerance,
                                                  detail::price_range(o));
    Json samples = Json::array();
    for (const auto& s : a.samples) {
      samples.push_back({{"alpha", s.matrix.alpha},
                         {"beta", s.matrix.beta},
                         {"transformed", {s.transformed.p1, s.transformed.p2}},
                         {"verdict", s.verdict},
                         {"oracle", s.oracle},
                         {"claimed", s.claimed},
                         {"verdict_matches_oracle", s.verdict_matches_oracle},
                         {"claim_agrees", s.claim_agrees}});
      if (!s.claim_agrees) {
        r.discrepancy(std::string(a.equal_costs ? "equal costs: every matrix" : "unequal costs: identity only") +
                          " (alpha " + Report::fmt(s.matrix.alpha) + ", beta " + Report::fmt(s.matrix.beta) + ")",
                      s.claimed, s.verdict,
                      "image of cost prices is (" + Report::fmt(s.transformed.p1) + ", " +
                          Report::fmt(s.transformed.p2) + ")");
      }
    }
    audits.push_back({{"c1", a.c1}, {"c2", a.c2}, {"equal_costs", a.equal_costs}, {"samples", samples}});
    r.verdict(detail::costs_id(*m) + "_verdicts_match_oracle", a.all_match_oracle(), a.tolerance);
    all_match = all_match && a.all_match_oracle();
    disagreements += a.claim_disagreements();
  }
  r.results()["audits"] = audits;
  r.results()["claim_disagreements"] = disagreements;
  if (!all_match) return kFalse;
  return disagreements > 0 ? kDiscrepancy : kOk;
}

// Samples the coupled direction condition on the own-concave built-ins plus
// a convex control. Min-dominance must hold on the former; vector-form
// failures contradict the published contradiction argument.
inline int audit_cdp(const Options& o, Report& r) {
  bool ok = true;
  std::size_t vector_failures = 0;
  Json per = Json::object();
  for (const char* id : {"example-4.1", "quadratic-sanity", "quadratic-markov"}) {
    const NamedInstance inst = builtin_instance(id);
    r.instance(inst.id);
    const CdpReport c = cdp_sample_check(inst.split(), o.samples, o.budget.seed, o.budget);
    per[id] = io::cdp_to_json(c);
    r.verdict(std::string(id) + "_min_dominance_holds", c.min_dominance_failures.empty(), o.budget.tolerance);
    ok = ok && c.min_dominance_failures.empty();
    if (!c.vector_form_failures.empty()) {
      vector_failures += c.vector_form_failures.size();
      r.discrepancy(std::string(id) + ": either F(u, w) <= f(w) or F(v, w) <= f(w)", true, false,
                    std::to_string(c.vector_form_failures.size()) +
                        " sampled triples violate both vector comparisons although min-dominance holds");
    }
  }
  const NamedInstance control = convex_counterexample();
  r.instance(control.id);
  const CdpReport cc = cdp_sample_check(control.split(), o.samples, o.budget.seed, o.budget);
  per[control.id] = io::cdp_to_json(cc);
  r.verdict("convex_control_shows_violations", !cc.min_dominance_failures.empty(), o.budget.tolerance);
  ok = ok && !cc.min_dominance_failures.empty();
  r.results()["instances"] = per;
  r.results()["vector_form_failures"] = vector_failures;
  if (!ok) return kFalse;
  return vector_failures > 0 ? kDiscrepancy : kOk;
}

// True when some member lies within one grid step of `target` on every axis.
inline bool probe_contains_cell(const ProbeResult& pr, const std::vector<double>& target) {
  return std::any_of(pr.members.begin(), pr.members.end(), [&](const Profile& m) {
    for (std::size_t k = 0; k < target.size(); ++k) {
      if (std::abs(m[k] - target[k]) > pr.axis_steps[k] + 1e-12) return false;
    }
    return true;
  });
}

// Replays the probe claims: the sanity instance and the identity-operator
// repeated quadratic game contain the grid cell of their equilibrium, and
// every member of every probe (convex control included) passes verify-split
// at twice the cell diameter. The averaging-operator instance is probed for
// information only: a coarse grid can miss it, and an empty set is a finding.
inline int audit_kkm(const Options& o, Report& r) {
  struct Case {
    std::string id;
    SplitProblem problem;
    std::optional<std::vector<double>> equilibrium;
  };
  const NamedInstance sanity = builtin_instance("quadratic-sanity");
  const Game sanity_n = sanity.split().game_n();
  std::vector<Case> cases;
  cases.push_back({"quadratic-sanity", sanity.split(), std::vector<double>{1, 2}});
  cases.push_back({"quadratic-sanity:N-identity", make_repeated_problem(sanity_n, LinearOperator::identity(2)),
                   std::vector<double>{1, 2}});
  cases.push_back({"convex-counterexample", convex_counterexample().split(), std::nullopt});
  cases.push_back({"quadratic-markov", builtin_instance("quadratic-markov").split(), std::nullopt});
  bool ok = true;
  Json per = Json::object();
  for (const Case& c : cases) {
    r.instance(c.id);
    const ProbeResult pr = run_probe(c.problem, o);
    per[c.id] = io::probe_to_json(pr);
    r.line(c.id + ": " + std::to_string(pr.members.size()) + " of " + std::to_string(pr.grid_points) +
           " grid points in the intersection (cell diameter " + Report::fmt(pr.cell_diameter) + ")");
    r.verdict(c.id + "_members_pass_verify_split", pr.all_members_pass, pr.check_tolerance);
    ok = ok && pr.all_members_pass;
    if (c.equilibrium) {
      const bool cell = probe_contains_cell(pr, *c.equilibrium);
      r.verdict(c.id + "_contains_equilibrium_cell", cell, pr.axis_steps.empty() ? 0.0 : pr.axis_steps[0]);
      ok = ok && cell;
    }
  }
  r.results()["instances"] = per;
  return ok ? kOk : kFalse;
}

inline int cmd_audit(const std::string& id, const Options& o, Report& r) {
  if (id == "example-4.1") return audit_example(o, r);
  if (id == "bertrand") return audit_bertrand(o, r);
  if (id == "thm-6.2" || id == "markov-split") return audit_markov(o, r);
  if (id == "cdp") return audit_cdp(o, r);
  if (id == "kkm") return audit_kkm(o, r);
  throw ValidationError("unknown audit '" + id + "' (expected example-4.1, bertrand, thm-6.2, cdp or kkm)");
}

namespace detail {

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.budget.tolerance, "verdict tolerance")->capture_default_str();
  sub->add_option("--grid-step", o.budget.grid_step, "scan / price grid step")->capture_default_str();
  sub->add_option("--samples", o.samples, "sample count")->capture_default_str();
  sub->add_option("--seed", o.budget.seed, "random seed")->capture_default_str();
  sub->add_option("--budget-iters", o.budget.max_iterations, "iteration budget")->capture_default_str();
  sub->add_option("--cap", o.budget.truncation_cap, "truncation cap for unbounded sets")->capture_default_str();
  sub->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  sub->add_option("--out", o.out, "write the report to this file");
  sub->add_flag("--deterministic", o.deterministic, "report zero duration for byte-stable output");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Split Nash equilibrium verifier, solver and auditor", "splitnash"};
  app.require_subcommand(1);
  Options o;
  o.budget.grid_step = 0.01;
  std::string target;

  struct Verb {
    const char* name;
    const char* help;
    int (*fn)(const std::string&, const Options&, Report&);
    bool needs_target;
  };
  const Verb verbs[] = {
      {"verify-nash", "check a profile of a game", cmd_verify_nash, true},
      {"solve-nash", "search for Nash equilibria of a game", cmd_solve_nash, true},
      {"verify-split", "check a profile of a split problem", cmd_verify_split, true},
      {"solve-split", "search for split equilibria", cmd_solve_split, true},
      {"audit", "replay a built-in audit: example-4.1, bertrand, thm-6.2, cdp, kkm", cmd_audit, true},
      {"cdp-check", "sample the direction-preservation conditions", cmd_cdp_check, true},
      {"kkm-probe", "grid probe of the KKM intersection", cmd_kkm_probe, true},
      {"bertrand-enumerate", "grid equilibria of the price duopoly", cmd_bertrand_enumerate, false},
  };
  std::vector<std::pair<CLI::App*, const Verb*>> subs;
  for (const Verb& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    auto* pos = sub->add_option("target", target, "built-in id or spec file");
    if (v.needs_target) pos->required();
    detail::add_common(sub, o);
    subs.emplace_back(sub, &v);
  }
  for (auto& [sub, v] : subs) {
    const std::string name = v->name;
    if (name == "verify-nash" || name == "verify-split") sub->add_option("--profile", o.profile, "comma-separated profile");
    if (name == "solve-nash" || name == "solve-split") sub->add_option("--starts", o.starts, "multistart count");
    if (name == "kkm-probe" || name == "audit") {
      sub->add_option("--points", o.points, "probe points per axis")->capture_default_str();
      sub->add_option("--region", o.region, "probe sub-box lo,hi");
    }
    if (name == "bertrand-enumerate" || name == "audit") {
      sub->add_option("--range", o.range, "price range lo,hi");
      sub->add_option("--costs", o.costs, "unit costs c1,c2");
    }
    if (name == "audit") {
      sub->add_option("--ab-grid", o.ab_grid, "points per axis of the (alpha, beta) grid")->capture_default_str();
      sub->add_flag("--diagonal", o.diagonal, "only alpha = beta matrices");
    }
  }

  std::vector<std::string> storage{"splitnash"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  const Verb* verb = nullptr;
  for (auto& [sub, v] : subs) {
    if (sub->parsed()) verb = v;
  }
  Report report(verb->name);
  const auto t0 = std::chrono::steady_clock::now();
  int code = kInputError;
  try {
    o.budget.validate();
    code = verb->fn(target, o, report);
  } catch (const Error& e) {
    err << "splitnash: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "splitnash: " << e.what() << '\n';
    return kInputError;
  }
  const double duration =
      o.deterministic ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string text =
      o.format == "json" ? report.to_json(code, duration, o.budget).dump(2) + "\n" : report.to_text(code);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      err << "splitnash: cannot write '" << o.out << "'\n";
      return kInputError;
    }
    f << text;
  }
  return code;
}

}  // namespace splitnash::cli
