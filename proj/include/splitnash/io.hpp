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

// JSON reading of game / split-problem files and JSON views of reports.
//
// Game file:  {"players": [...], "strategy_sets": [{"lo": 0, "hi": null}, ...],
//              "utilities": ["expr", ...]}
// Split file: {"game_n": <game>, "game_m": <game>, "matrix": [[...], ...]}

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "splitnash/bertrand.hpp"
#include "splitnash/error.hpp"
#include "splitnash/expr.hpp"
#include "splitnash/game.hpp"
#include "splitnash/split.hpp"

namespace splitnash::io {

using Json = nlohmann::json;

inline Game game_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("game spec must be a JSON object");
  for (const char* key : {"players", "strategy_sets", "utilities"}) {
    if (!j.contains(key) || !j.at(key).is_array()) {
      throw ValidationError(std::string("game spec needs an array field '") + key + "'");
    }
  }
  const Json& players = j.at("players");
  const Json& sets = j.at("strategy_sets");
  const Json& utilities = j.at("utilities");
  if (players.size() != sets.size() || players.size() != utilities.size()) {
    throw ValidationError("players, strategy_sets and utilities must have equal length");
  }
  std::vector<std::string> ids;
  std::vector<Interval> intervals;
  std::vector<UtilityExpr> exprs;
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (!players[i].is_string()) throw ValidationError("player ids must be strings");
    ids.push_back(players[i].get<std::string>());
    const Json& s = sets[i];
    if (!s.is_object() || !s.contains("lo") || !s.at("lo").is_number()) {
      throw ValidationError("strategy set " + std::to_string(i) + " needs a numeric 'lo'");
    }
    double hi = kInfinity;
    if (s.contains("hi") && !s.at("hi").is_null()) {
      if (!s.at("hi").is_number()) throw ValidationError("strategy set 'hi' must be a number or null");
      hi = s.at("hi").get<double>();
    }
    intervals.emplace_back(s.at("lo").get<double>(), hi);
    if (!utilities[i].is_string()) throw ValidationError("utilities must be expression strings");
    exprs.push_back(parse_utility(utilities[i].get<std::string>()));
  }
  return Game::from_expressions(ids, intervals, exprs);
}

inline Json game_to_json(const Game& game) {
  Json players = Json::array(), sets = Json::array(), utilities = Json::array();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    if (game.block_size(i) != 1 || !game.expression(i)) {
      throw ValidationError("only scalar expression-backed games can be serialized");
    }
    players.push_back(game.player_id(i));
    const Interval& iv = game.strategy_set(i)[0];
    sets.push_back({{"lo", iv.lo()}, {"hi", iv.bounded() ? Json(iv.hi()) : Json(nullptr)}});
    utilities.push_back(game.expression(i)->to_string());
  }
  return {{"players", players}, {"strategy_sets", sets}, {"utilities", utilities}};
}

inline SplitProblem split_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("game_n") || !j.contains("game_m") || !j.contains("matrix")) {
    throw ValidationError("split spec needs 'game_n', 'game_m' and 'matrix'");
  }
  const Json& m = j.at("matrix");
  if (!m.is_array()) throw ValidationError("'matrix' must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const Json& r : m) {
    if (!r.is_array()) throw ValidationError("'matrix' rows must be arrays");
    std::vector<double> row;
    for (const Json& v : r) {
      if (!v.is_number()) throw ValidationError("'matrix' entries must be numbers");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return SplitProblem(game_from_json(j.at("game_n")), game_from_json(j.at("game_m")),
                      LinearOperator::from_rows(rows));
}

inline Json split_to_json(const SplitProblem& p) {
  return {{"game_n", game_to_json(p.game_n())}, {"game_m", game_to_json(p.game_m())}, {"matrix", p.op().to_rows()}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// "1, 2.5,4" -> {1, 2.5, 4}; empty or malformed fields are rejected.
inline std::vector<double> parse_real_list(std::string_view text, std::string_view what = "list") {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view field = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    if (field.empty()) throw ValidationError("empty entry in " + std::string(what) + " '" + std::string(text) + "'");
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
      throw ValidationError("malformed number '" + std::string(field) + "' in " + std::string(what));
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Non-finite doubles become null so reports stay valid JSON.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline Json numbers(const Profile& p) { return numbers(p.values()); }

inline Json budget_to_json(const SearchBudget& b) {
  return {{"grid_step", b.grid_step},
          {"max_iterations", b.max_iterations},
          {"truncation_cap", b.truncation_cap},
          {"tolerance", b.tolerance},
          {"seed", b.seed}};
}

inline Json nash_to_json(const NashReport& r) {
  Json players = Json::array();
  for (const auto& p : r.players) {
    players.push_back({{"player", p.player},
                       {"current_value", number(p.current_value)},
                       {"best_value", number(p.best_value)},
                       {"best_response", numbers(p.best_response)},
                       {"regret", number(p.regret)}});
  }
  return {{"verdict", r.verdict},
          {"tolerance", r.tolerance},
          {"profile", numbers(r.profile)},
          {"max_regret", number(r.max_regret())},
          {"players", players}};
}

inline Json split_report_to_json(const SplitReport& r) {
  return {{"verdict", r.verdict},
          {"tolerance", r.tolerance},
          {"profile", numbers(r.profile)},
          {"image", numbers(r.image)},
          {"game_n", nash_to_json(r.game_n)},
          {"game_m", nash_to_json(r.game_m)}};
}

inline Json relatedness_to_json(const RelatednessReport& r) {
  Json image = Json::array();
  for (const auto& range : r.image) image.push_back({{"lo", number(range.lo)}, {"hi", number(range.hi)}});
  return {{"holds", r.holds}, {"image", image}, {"violated_rows", r.violated_rows}};
}

inline Json cdp_witness_to_json(const CdpWitness& w) {
  Json j = {{"property", to_string(w.property)}, {"u", numbers(w.u)}, {"v", numbers(w.v)}, {"lambda", w.lambda}};
  j["player"] = w.player ? Json(*w.player) : Json(nullptr);
  return j;
}

// Witness lists are capped at `max_witnesses` entries; counts are exact.
inline Json cdp_to_json(const CdpReport& r, std::size_t max_witnesses = 5) {
  auto list = [&](const std::vector<CdpWitness>& ws) {
    Json a = Json::array();
    for (std::size_t k = 0; k < ws.size() && k < max_witnesses; ++k) a.push_back(cdp_witness_to_json(ws[k]));
    return a;
  };
  return {{"samples_tested", r.samples_tested},
          {"image_checks_skipped", r.image_checks_skipped},
          {"joint_failures", r.joint_failures.size()},
          {"vector_form_failures", r.vector_form_failures.size()},
          {"min_dominance_failures", r.min_dominance_failures.size()},
          {"joint_witnesses", list(r.joint_failures)},
          {"vector_form_witnesses", list(r.vector_form_failures)},
          {"min_dominance_witnesses", list(r.min_dominance_failures)}};
}

inline Json probe_to_json(const ProbeResult& r) {
  Json members = Json::array();
  for (std::size_t k = 0; k < r.members.size(); ++k) {
    members.push_back({{"point", numbers(r.members[k])},
                       {"verdict", r.checks[k].verdict},
                       {"max_regret_n", number(r.checks[k].game_n.max_regret())},
                       {"max_regret_m", number(r.checks[k].game_m.max_regret())}});
  }
  return {{"points_per_axis", r.points_per_axis},
          {"grid_points", r.grid_points},
          {"axis_steps", numbers(r.axis_steps)},
          {"cell_diameter", r.cell_diameter},
          {"check_tolerance", r.check_tolerance},
          {"all_members_pass", r.all_members_pass},
          {"members", members}};
}

inline Json price_pairs_to_json(const std::vector<PricePair>& pairs) {
  Json a = Json::array();
  for (const auto& p : pairs) a.push_back(Json::array({p.p1, p.p2}));
  return a;
}

}  // namespace splitnash::io
