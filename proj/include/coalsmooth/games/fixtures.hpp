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

#ifndef COALSMOOTH_GAMES_FIXTURES_HPP
#define COALSMOOTH_GAMES_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coalsmooth/games/allocation.hpp"
#include "coalsmooth/rng.hpp"

// Canonical game specs used by the tests, the acceptance suite and `gen`.
namespace coalsmooth::games::fixtures {

using nlohmann::json;

/// Two players, a shared resource of cost 1 and a private resource of cost
/// 0.9 each. Strategy 0 is {shared}, strategy 1 is the private resource.
inline json g1() {
  return {{"kind", "cost_sharing"},
          {"payload",
           {{"resources",
             {{{"id", "shared"}, {"cost", 1.0}},
              {{"id", "own1"}, {"cost", 0.9}},
              {{"id", "own2"}, {"cost", 0.9}}}},
            {"players",
             {{{"strategies", {{"shared"}, {"own1"}}}},
              {{"strategies", {{"shared"}, {"own2"}}}}}}}}};
}

/// Prisoner's dilemma; strategy 0 is C, 1 is D.
inline json g2() {
  return {{"kind", "normal_form"},
          {"payload",
           {{"players", 2},
            {"strategies", json::array({json::array({"C", "D"}),
                                       json::array({"C", "D"})})},
            {"utilities", {{{3, 0}, {4, 1}}, {{3, 4}, {0, 1}}}},
            {"direction", "utility_max"}}}};
}

/// Line A-B-C-D with unit budgets: constant outer edges of value 1 and a
/// middle edge worth `high` only when B and C both put their whole budget
/// on it.
inline json g3(double high = 10.0) {
  return {{"kind", "network_contribution"},
          {"payload",
           {{"nodes",
             {{{"id", "A"}, {"budget", 1.0}},
              {{"id", "B"}, {"budget", 1.0}},
              {{"id", "C"}, {"budget", 1.0}},
              {{"id", "D"}, {"budget", 1.0}}}},
            {"edges",
             {{{"a", "A"}, {"b", "B"}, {"fn", "constant"}, {"params", {1.0}}},
              {{"a", "B"}, {"b", "C"}, {"fn", "threshold"}, {"params", {high}}},
              {{"a", "C"}, {"b", "D"}, {"fn", "constant"}, {"params", {1.0}}}}},
            {"grid", 1}}}};
}

/// Two players choosing one of two harmonic resources with values 2 and 1.
inline json g4() {
  return {{"kind", "utility_congestion"},
          {"payload",
           {{"resources",
             {{{"id", "r1"}, {"harmonic", 2.0}},
              {{"id", "r2"}, {"harmonic", 1.0}}}},
            {"players",
             {{{"strategies", {{"r1"}, {"r2"}}}},
              {{"strategies", {{"r1"}, {"r2"}}}}}}}}};
}

/// One project whose value is the product of two players' efforts, each in
/// its own skill group. Budget 3 on a grid of 3, so strategy k is effort k.
inline json g5() {
  return {{"kind", "welfare_sharing"},
          {"payload",
           {{"projects",
             {{{"id", "P"},
               {"factors", {{"g1", {{"a", 1.0}}}, {"g2", {{"a", 1.0}}}}}}}},
            {"players",
             {{{"budget", 3.0}, {"group", "g1"}, {"projects", {"P"}}},
              {{"budget", 3.0}, {"group", "g2"}, {"projects", {"P"}}}}},
            {"grid", 3}}}};
}

/// Four players over three harmonic resources.
inline json harmonic_congestion4() {
  json players = json::array();
  for (int i = 0; i < 4; ++i) {
    players.push_back({{"strategies", {{"r1"}, {"r2"}, {"r3"}}}});
  }
  return {{"kind", "utility_congestion"},
          {"payload",
           {{"resources",
             {{{"id", "r1"}, {"harmonic", 1.0}},
              {{"id", "r2"}, {"harmonic", 4.0}},
              {{"id", "r3"}, {"harmonic", 6.0}}}},
            {"players", players}}}};
}

/// Congestion game with increasing per-occupancy utility pi(k) = k.
inline json increasing_congestion() {
  return {{"kind", "utility_congestion"},
          {"payload",
           {{"resources",
             {{{"id", "r1"}, {"pi", {1.0, 2.0}}},
              {{"id", "r2"}, {"pi", {1.0, 2.0}}}}},
            {"players",
             {{{"strategies", {{"r1"}, {"r2"}}}},
              {{"strategies", {{"r1"}, {"r2"}}}}}}}}};
}

// Random families ---------------------------------------------------------------

namespace detail {

inline double quarter(Rng& rng, int lo, int hi) {
  return (lo + static_cast<int>(rng.uniform_below(hi - lo + 1))) / 4.0;
}

inline json random_subset_strategies(Rng& rng, int resources, int max_count) {
  json strategies = json::array();
  std::vector<std::uint64_t> seen;
  int count = 1 + static_cast<int>(rng.uniform_below(max_count));
  for (int k = 0; k < count; ++k) {
    std::uint64_t mask =
        1 + rng.uniform_below((std::uint64_t{1} << resources) - 1);
    if (std::find(seen.begin(), seen.end(), mask) != seen.end()) continue;
    seen.push_back(mask);
    json set = json::array();
    for (int r = 0; r < resources; ++r) {
      if (mask & (std::uint64_t{1} << r)) set.push_back("r" + std::to_string(r));
    }
    strategies.push_back(set);
  }
  return strategies;
}

}  // namespace detail

/// Random cost-sharing game: n players, r resources, 1-3 distinct resource
/// subsets per player, costs in quarters.
inline json random_cost_sharing(int n, int r, std::uint64_t seed) {
  Rng rng(seed);
  json resources = json::array();
  for (int k = 0; k < r; ++k) {
    resources.push_back(
        {{"id", "r" + std::to_string(k)}, {"cost", detail::quarter(rng, 1, 16)}});
  }
  json players = json::array();
  for (int i = 0; i < n; ++i) {
    players.push_back(
        {{"strategies", detail::random_subset_strategies(rng, r, 3)}});
  }
  return {{"kind", "cost_sharing"},
          {"payload", {{"resources", resources}, {"players", players}}}};
}

/// shape: "harmonic" (pi = v/k), "decreasing" (random nonincreasing table) or
/// "any" (random table).
inline json random_congestion(int n, int r, std::uint64_t seed,
                              const std::string& shape = "harmonic") {
  Rng rng(seed);
  json resources = json::array();
  for (int k = 0; k < r; ++k) {
    json res = {{"id", "r" + std::to_string(k)}};
    if (shape == "harmonic") {
      res["harmonic"] = detail::quarter(rng, 4, 32);
    } else {
      std::vector<double> table;
      for (int m = 0; m < n; ++m) table.push_back(detail::quarter(rng, 0, 24));
      if (shape == "decreasing") {
        std::sort(table.begin(), table.end(), std::greater<>());
      }
      res["pi"] = table;
    }
    resources.push_back(res);
  }
  json players = json::array();
  for (int i = 0; i < n; ++i) {
    players.push_back(
        {{"strategies", detail::random_subset_strategies(rng, r, 3)}});
  }
  return {{"kind", "utility_congestion"},
          {"payload", {{"resources", resources}, {"players", players}}}};
}

/// Random network contribution game on n nodes with at most `max_profiles`
/// live profiles.
inline json random_contribution(int n, std::uint64_t seed,
                                std::uint64_t max_profiles = 200) {
  static constexpr const char* kFns[] = {"constant", "product", "min",
                                         "threshold", "sum"};
  Rng rng(seed);
  json nodes = json::array();
  for (int i = 0; i < n; ++i) {
    nodes.push_back({{"id", std::string(1, static_cast<char>('A' + i))},
                     {"budget", 1.0 + rng.uniform_below(2)}});
  }
  struct E { int a, b; };
  std::vector<E> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.uniform_below(2) == 0) pairs.push_back({a, b});
    }
  }
  if (pairs.empty()) pairs.push_back({0, 1});
  json edges = json::array();
  for (const auto& e : pairs) {
    edges.push_back({{"a", nodes[e.a]["id"]},
                     {"b", nodes[e.b]["id"]},
                     {"fn", kFns[rng.uniform_below(5)]},
                     {"params", {detail::quarter(rng, 2, 32)}}});
  }
  int grid = 1 + static_cast<int>(rng.uniform_below(2));
  auto count = [&](int d) {
    std::vector<int> degree(n, 0);
    for (const auto& e : edges) {
      ++degree[e["a"].get<std::string>()[0] - 'A'];
      ++degree[e["b"].get<std::string>()[0] - 'A'];
    }
    std::uint64_t total = 1;
    for (int deg : degree) total *= allocation_count(d, deg, false);
    return total;
  };
  if (count(grid) > max_profiles) grid = 1;
  while (count(grid) > max_profiles && edges.size() > 1) edges.erase(edges.size() - 1);
  return {{"kind", "network_contribution"},
          {"payload", {{"nodes", nodes}, {"edges", edges}, {"grid", grid}}}};
}

/// Random welfare sharing game: 1-2 projects, two skill groups, capped-sum
/// factors.
inline json random_welfare_sharing(int n, std::uint64_t seed,
                                   std::uint64_t max_profiles = 200) {
  Rng rng(seed);
  int m = 1 + static_cast<int>(rng.uniform_below(2));
  json projects = json::array();
  for (int j = 0; j < m; ++j) {
    json factors = json::object();
    for (const char* g : {"g0", "g1"}) {
      json f = {{"a", detail::quarter(rng, 2, 8)}};
      if (rng.uniform_below(2) == 1) f["cap"] = detail::quarter(rng, 4, 24);
      factors[g] = f;
    }
    projects.push_back({{"id", "P" + std::to_string(j)}, {"factors", factors}});
  }
  json players = json::array();
  std::vector<int> parts;
  for (int i = 0; i < n; ++i) {
    std::uint64_t mask = 1 + rng.uniform_below((std::uint64_t{1} << m) - 1);
    json mine = json::array();
    for (int j = 0; j < m; ++j) {
      if (mask & (std::uint64_t{1} << j)) mine.push_back("P" + std::to_string(j));
    }
    parts.push_back(static_cast<int>(mine.size()));
    players.push_back({{"budget", 1.0 + rng.uniform_below(2)},
                       {"group", rng.uniform_below(2) == 0 ? "g0" : "g1"},
                       {"projects", mine}});
  }
  int grid = 1 + static_cast<int>(rng.uniform_below(2));
  auto count = [&](int d) {
    std::uint64_t total = 1;
    for (int p : parts) total *= allocation_count(d, p, true);
    return total;
  };
  if (count(grid) > max_profiles) grid = 1;
  return {{"kind", "welfare_sharing"},
          {"payload",
           {{"projects", projects}, {"players", players}, {"grid", grid}}}};
}

/// Random normal-form utility game with 2-3 strategies per player and
/// integer payoffs in [0, 5].
inline json random_normal_form(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> counts;
  json strategies = json::array();
  for (int i = 0; i < n; ++i) {
    counts.push_back(2 + static_cast<int>(rng.uniform_below(2)));
    json names = json::array();
    for (int k = 0; k < counts.back(); ++k) {
      names.push_back("s" + std::to_string(k));
    }
    strategies.push_back(names);
  }
  // Builds a nested table of depth n with random leaves.
  auto table = [&](auto&& self, std::size_t depth) -> json {
    if (depth == counts.size()) return static_cast<int>(rng.uniform_below(6));
    json level = json::array();
    for (int k = 0; k < counts[depth]; ++k) level.push_back(self(self, depth + 1));
    return level;
  };
  json utilities = json::array();
  for (int i = 0; i < n; ++i) utilities.push_back(table(table, 0));
  return {{"kind", "normal_form"},
          {"payload",
           {{"players", n},
            {"strategies", strategies},
            {"utilities", utilities},
            {"direction", "utility_max"}}}};
}

}  // namespace coalsmooth::games::fixtures

#endif  // COALSMOOTH_GAMES_FIXTURES_HPP
