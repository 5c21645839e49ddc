// Copyright 2026 The coalsmooth Authors
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

#ifndef COALSMOOTH_GAMES_SPEC_HPP
#define COALSMOOTH_GAMES_SPEC_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "coalsmooth/core.hpp"
#include "coalsmooth/games/congestion.hpp"
#include "coalsmooth/games/cost_sharing.hpp"
#include "coalsmooth/games/network_contribution.hpp"
#include "coalsmooth/games/normal_form.hpp"
#include "coalsmooth/games/welfare_sharing.hpp"

namespace coalsmooth::games {

using GameSpec = std::variant<NormalFormData, CostSharingData, ContributionData,
                              WelfareSharingData, CongestionData>;

struct LoadOptions {
  /// Largest effort grid (strategy count) allowed for one player.
  std::uint64_t per_player_cap = 1'000'000;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::kSpecError, path + ": " + msg);
}

inline const json& object(const json& j, const std::string& path,
                          std::initializer_list<const char*> required,
                          std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const char* key : required) {
    if (!j.contains(key)) fail(path + "." + key, "missing field");
  }
  for (const auto& [key, value] : j.items()) {
    bool known =
        std::any_of(required.begin(), required.end(),
                    [&](const char* k) { return key == k; }) ||
        std::any_of(optional.begin(), optional.end(),
                    [&](const char* k) { return key == k; });
    if (!known) fail(path + "." + key, "unknown field");
  }
  return j;
}

inline const json& array(const json& j, const std::string& path,
                         bool nonempty = false) {
  if (!j.is_array()) fail(path, "expected an array");
  if (nonempty && j.empty()) fail(path, "must not be empty");
  return j;
}

inline double number(const json& j, const std::string& path,
                     double min = 0.0) {
  if (!j.is_number()) fail(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  if (v < min) fail(path, "must be >= " + std::to_string(min));
  return v;
}

inline int integer(const json& j, const std::string& path, int min) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  auto v = j.get<long long>();
  if (v < min || v > std::numeric_limits<int>::max()) {
    fail(path, "out of range");
  }
  return static_cast<int>(v);
}

inline std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline std::string at(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

/// Parses a nested array of depth counts.size() into enumeration order.
inline void flatten(const json& j, const std::string& path,
                    const std::vector<int>& counts, std::size_t depth,
                    double min, std::vector<double>& out) {
  if (depth == counts.size()) {
    out.push_back(number(j, path, min));
    return;
  }
  array(j, path);
  if (static_cast<int>(j.size()) != counts[depth]) {
    fail(path, "expected " + std::to_string(counts[depth]) + " entries");
  }
  for (std::size_t k = 0; k < j.size(); ++k) {
    flatten(j[k], at(path, k), counts, depth + 1, min, out);
  }
}

inline std::map<std::string, int> id_index(const json& list,
                                           const std::string& path) {
  std::map<std::string, int> ids;
  for (std::size_t k = 0; k < list.size(); ++k) {
    std::string id = text(list[k].at("id"), at(path, k) + ".id");
    if (!ids.emplace(id, static_cast<int>(k)).second) {
      fail(at(path, k) + ".id", "duplicate id '" + id + "'");
    }
  }
  return ids;
}

/// Strategy lists of resource subsets, shared by cost sharing and congestion.
inline std::vector<std::vector<std::vector<int>>> resource_strategies(
    const json& players, const std::string& path,
    const std::map<std::string, int>& resources) {
  std::vector<std::vector<std::vector<int>>> out;
  for (std::size_t i = 0; i < players.size(); ++i) {
    std::string p = at(path, i);
    object(players[i], p, {"strategies"});
    const json& strategies =
        array(players[i]["strategies"], p + ".strategies", true);
    std::vector<std::vector<int>> mine;
    for (std::size_t k = 0; k < strategies.size(); ++k) {
      std::string sp = at(p + ".strategies", k);
      array(strategies[k], sp);
      std::vector<int> set;
      for (std::size_t m = 0; m < strategies[k].size(); ++m) {
        std::string id = text(strategies[k][m], at(sp, m));
        auto it = resources.find(id);
        if (it == resources.end()) {
          fail(at(sp, m), "unknown resource '" + id + "'");
        }
        set.push_back(it->second);
      }
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      mine.push_back(std::move(set));
    }
    out.push_back(std::move(mine));
  }
  return out;
}

inline NormalFormData parse_normal_form(const json& p) {
  object(p, "payload", {"players", "strategies", "utilities", "direction"},
         {"potential", "out"});
  NormalFormData d;
  int n = integer(p["players"], "payload.players", 1);
  const json& strategies =
      array(p["strategies"], "payload.strategies", true);
  if (static_cast<int>(strategies.size()) != n) {
    fail("payload.strategies", "expected one list per player");
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    std::string sp = at("payload.strategies", i);
    array(strategies[i], sp, true);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < strategies[i].size(); ++k) {
      names.push_back(text(strategies[i][k], at(sp, k)));
    }
    d.strategy_names.push_back(std::move(names));
  }
  std::string dir = text(p["direction"], "payload.direction");
  if (dir == "utility_max") {
    d.direction = Direction::kUtilityMax;
  } else if (dir == "cost_min") {
    d.direction = Direction::kCostMin;
  } else {
    fail("payload.direction", "expected 'utility_max' or 'cost_min'");
  }
  std::vector<int> counts = d.counts();
  check_cap(profile_count(counts), kDefaultProfileCap, "payoff table");
  const json& utilities = array(p["utilities"], "payload.utilities");
  if (static_cast<int>(utilities.size()) != n) {
    fail("payload.utilities", "expected one table per player");
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> table;
    flatten(utilities[i], at("payload.utilities", i), counts, 0, 0.0, table);
    d.payoffs.push_back(std::move(table));
  }
  if (p.contains("potential")) {
    std::vector<double> table;
    flatten(p["potential"], "payload.potential", counts, 0,
            -std::numeric_limits<double>::max(), table);
    d.potential = std::move(table);
  }
  if (p.contains("out")) {
    const json& out = array(p["out"], "payload.out");
    if (static_cast<int>(out.size()) != n) {
      fail("payload.out", "expected one strategy index per player");
    }
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      idx.push_back(integer(out[i], at("payload.out", i), 0));
      if (idx.back() >= counts[i]) {
        fail(at("payload.out", i), "strategy index out of range");
      }
    }
    // The designated out strategy must pay its player exactly 0.
    StrategyProfile s(n, 0);
    do {
      for (int i = 0; i < n; ++i) {
        if (s[i] == idx[i] && d.payoffs[i][profile_index(counts, s)] != 0.0) {
          fail(at("payload.out", i),
               "out strategy must give its player 0 at every profile");
        }
      }
    } while (next_profile(counts, s));
    d.out = std::move(idx);
  }
  return d;
}

inline CostSharingData parse_cost_sharing(const json& p) {
  object(p, "payload", {"resources", "players"});
  CostSharingData d;
  const json& resources = array(p["resources"], "payload.resources");
  for (std::size_t k = 0; k < resources.size(); ++k) {
    object(resources[k], at("payload.resources", k), {"id", "cost"});
  }
  auto ids = id_index(resources, "payload.resources");
  for (std::size_t k = 0; k < resources.size(); ++k) {
    d.resource_ids.push_back(resources[k]["id"].get<std::string>());
    d.costs.push_back(
        number(resources[k]["cost"], at("payload.resources", k) + ".cost"));
  }
  const json& players = array(p["players"], "payload.players", true);
  d.strategies = resource_strategies(players, "payload.players", ids);
  return d;
}

inline EdgeValue parse_edge_fn(const std::string& name,
                               const std::string& path) {
  for (EdgeValue fn : {EdgeValue::kConstant, EdgeValue::kProduct,
                       EdgeValue::kMin, EdgeValue::kThreshold,
                       EdgeValue::kSum}) {
    if (name == to_string(fn)) return fn;
  }
  fail(path, "unknown value function '" + name + "'");
}

inline ContributionData parse_contribution(const json& p,
                                           const LoadOptions& opts) {
  object(p, "payload", {"nodes", "edges", "grid"});
  ContributionData d;
  const json& nodes = array(p["nodes"], "payload.nodes", true);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    object(nodes[k], at("payload.nodes", k), {"id", "budget"});
  }
  auto ids = id_index(nodes, "payload.nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    d.node_ids.push_back(nodes[k]["id"].get<std::string>());
    d.budgets.push_back(
        number(nodes[k]["budget"], at("payload.nodes", k) + ".budget"));
  }
  const json& edges = array(p["edges"], "payload.edges");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    std::string ep = at("payload.edges", k);
    object(edges[k], ep, {"a", "b", "fn", "params"});
    ContributionEdge e;
    for (const char* end : {"a", "b"}) {
      std::string id = text(edges[k][end], ep + "." + end);
      auto it = ids.find(id);
      if (it == ids.end()) fail(ep + "." + end, "unknown node '" + id + "'");
      (std::string(end) == "a" ? e.a : e.b) = it->second;
    }
    if (e.a == e.b) fail(ep, "edge must connect distinct nodes");
    e.fn = parse_edge_fn(text(edges[k]["fn"], ep + ".fn"), ep + ".fn");
    const json& params = array(edges[k]["params"], ep + ".params");
    if (params.size() != 1) fail(ep + ".params", "expected one parameter");
    e.param = number(params[0], ep + ".params[0]");
    d.edges.push_back(e);
  }
  d.grid = integer(p["grid"], "payload.grid", 1);
  prepare_contribution(d, opts.per_player_cap);
  return d;
}

inline WelfareSharingData parse_welfare_sharing(const json& p,
                                                const LoadOptions& opts) {
  object(p, "payload", {"projects", "players", "grid"});
  WelfareSharingData d;
  const json& projects = array(p["projects"], "payload.projects", true);
  for (std::size_t k = 0; k < projects.size(); ++k) {
    object(projects[k], at("payload.projects", k), {"id", "factors"});
  }
  auto ids = id_index(projects, "payload.projects");
  for (std::size_t k = 0; k < projects.size(); ++k) {
    std::string pp = at("payload.projects", k);
    WelfareProject proj;
    proj.id = projects[k]["id"].get<std::string>();
    const json& factors = projects[k]["factors"];
    if (!factors.is_object()) fail(pp + ".factors", "expected an object");
    for (const auto& [group, f] : factors.items()) {
      std::string fp = pp + ".factors." + group;
      object(f, fp, {"a"}, {"cap"});
      CappedSum cs;
      cs.a = number(f["a"], fp + ".a");
      if (f.contains("cap") && !f["cap"].is_null()) {
        cs.cap = number(f["cap"], fp + ".cap");
      }
      proj.factors.emplace(group, cs);
    }
    d.projects.push_back(std::move(proj));
  }
  const json& players = array(p["players"], "payload.players", true);
  for (std::size_t i = 0; i < players.size(); ++i) {
    std::string pp = at("payload.players", i);
    object(players[i], pp, {"budget", "group", "projects"});
    WelfarePlayer wp;
    wp.budget = number(players[i]["budget"], pp + ".budget");
    wp.group = text(players[i]["group"], pp + ".group");
    const json& mine = array(players[i]["projects"], pp + ".projects");
    for (std::size_t k = 0; k < mine.size(); ++k) {
      std::string id = text(mine[k], at(pp + ".projects", k));
      auto it = ids.find(id);
      if (it == ids.end()) {
        fail(at(pp + ".projects", k), "unknown project '" + id + "'");
      }
      wp.projects.push_back(it->second);
    }
    std::sort(wp.projects.begin(), wp.projects.end());
    if (std::adjacent_find(wp.projects.begin(), wp.projects.end()) !=
        wp.projects.end()) {
      fail(pp + ".projects", "duplicate project");
    }
    d.players.push_back(std::move(wp));
  }
  d.grid = integer(p["grid"], "payload.grid", 1);
  prepare_welfare_sharing(d, opts.per_player_cap);
  for (std::size_t j = 0; j < d.projects.size(); ++j) {
    for (const auto& group : d.groups[j]) {
      if (!d.projects[j].factors.count(group)) {
        fail(at("payload.projects", j) + ".factors",
             "missing factor for participating group '" + group + "'");
      }
    }
  }
  return d;
}

inline CongestionData parse_congestion(const json& p) {
  object(p, "payload", {"resources", "players"});
  CongestionData d;
  const json& players = array(p["players"], "payload.players", true);
  const json& resources = array(p["resources"], "payload.resources");
  for (std::size_t k = 0; k < resources.size(); ++k) {
    object(resources[k], at("payload.resources", k), {"id"},
           {"pi", "harmonic"});
  }
  auto ids = id_index(resources, "payload.resources");
  for (std::size_t k = 0; k < resources.size(); ++k) {
    std::string rp = at("payload.resources", k);
    const json& r = resources[k];
    d.resource_ids.push_back(r["id"].get<std::string>());
    if (r.contains("pi") == r.contains("harmonic")) {
      fail(rp, "exactly one of 'pi' or 'harmonic' is required");
    }
    ResourceUtility ru;
    if (r.contains("harmonic")) {
      ru.harmonic_value = number(r["harmonic"], rp + ".harmonic");
    } else {
      const json& pi = array(r["pi"], rp + ".pi");
      if (pi.size() != players.size()) {
        fail(rp + ".pi", "expected " + std::to_string(players.size()) +
                             " entries (one per occupancy level)");
      }
      for (std::size_t m = 0; m < pi.size(); ++m) {
        ru.table.push_back(number(pi[m], at(rp + ".pi", m)));
      }
    }
    d.resources.push_back(std::move(ru));
  }
  d.strategies = resource_strategies(players, "payload.players", ids);
  return d;
}

}  // namespace detail

inline std::string kind_name(const GameSpec& spec) {
  static constexpr const char* kNames[] = {
      "normal_form", "cost_sharing", "network_contribution", "welfare_sharing",
      "utility_congestion"};
  return kNames[spec.index()];
}

inline GameSpec parse_game_spec(const nlohmann::json& j,
                                const LoadOptions& opts = {}) {
  detail::object(j, "$", {"kind", "payload"});
  std::string kind = detail::text(j["kind"], "$.kind");
  const auto& payload = j["payload"];
  if (kind == "normal_form") return detail::parse_normal_form(payload);
  if (kind == "cost_sharing") return detail::parse_cost_sharing(payload);
  if (kind == "network_contribution") {
    return detail::parse_contribution(payload, opts);
  }
  if (kind == "welfare_sharing") {
    return detail::parse_welfare_sharing(payload, opts);
  }
  if (kind == "utility_congestion") return detail::parse_congestion(payload);
  detail::fail("$.kind", "unknown game kind '" + kind + "'");
}

inline Game build_game(GameSpec spec) {
  return std::visit(
      [](auto&& d) -> Game {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, NormalFormData>) {
          return make_normal_form_game(std::move(d));
        } else if constexpr (std::is_same_v<T, CostSharingData>) {
          return make_cost_sharing_game(std::move(d));
        } else if constexpr (std::is_same_v<T, ContributionData>) {
          return make_contribution_game(std::move(d));
        } else if constexpr (std::is_same_v<T, WelfareSharingData>) {
          return make_welfare_sharing_game(std::move(d));
        } else {
          return make_congestion_game(std::move(d));
        }
      },
      std::move(spec));
}

inline Game load_game(const nlohmann::json& j, const LoadOptions& opts = {}) {
  return build_game(parse_game_spec(j, opts));
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSpecError, path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSpecError, path + ": " + e.what());
  }
}

inline Game load_game_file(const std::string& path,
                           const LoadOptions& opts = {}) {
  return load_game(read_json_file(path), opts);
}

}  // namespace coalsmooth::games

#endif  // COALSMOOTH_GAMES_SPEC_HPP
