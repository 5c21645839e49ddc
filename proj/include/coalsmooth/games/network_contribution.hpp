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

#ifndef COALSMOOTH_GAMES_NETWORK_CONTRIBUTION_HPP
#define COALSMOOTH_GAMES_NETWORK_CONTRIBUTION_HPP

#include <algorithm>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coalsmooth/core.hpp"
#include "coalsmooth/games/allocation.hpp"

namespace coalsmooth::games {

enum class EdgeValue { kConstant, kProduct, kMin, kThreshold, kSum };

inline std::string_view to_string(EdgeValue fn) {
  switch (fn) {
    case EdgeValue::kConstant: return "constant";
    case EdgeValue::kProduct: return "product";
    case EdgeValue::kMin: return "min";
    case EdgeValue::kThreshold: return "threshold";
    case EdgeValue::kSum: return "sum";
  }
  return "?";
}

struct ContributionEdge {
  int a = 0;
  int b = 0;
  EdgeValue fn = EdgeValue::kConstant;
  double param = 0.0;
};

/// Network contribution game: each node splits its effort budget over its
/// incident edges, and each edge's value is split equally between its ends.
struct ContributionData {
  std::vector<std::string> node_ids;
  std::vector<double> budgets;
  std::vector<ContributionEdge> edges;
  int grid = 1;
  /// [node] -> incident edge indices, ascending.
  std::vector<std::vector<int>> incident;
  /// [node][strategy] -> units per incident edge.
  std::vector<std::vector<std::vector<int>>> allocations;

  int num_players() const { return static_cast<int>(node_ids.size()); }
  bool is_out(int player, int strategy) const {
    return strategy == static_cast<int>(allocations[player].size());
  }
  double effort(int player, int strategy, int edge) const {
    const auto& inc = incident[player];
    auto it = std::find(inc.begin(), inc.end(), edge);
    int units = allocations[player][strategy][it - inc.begin()];
    return budgets[player] * units / grid;
  }
};

inline double edge_value(const ContributionEdge& e, double xa, double xb,
                         double budget_a, double budget_b) {
  switch (e.fn) {
    case EdgeValue::kConstant: return e.param;
    case EdgeValue::kProduct: return e.param * xa * xb;
    case EdgeValue::kMin: return e.param * std::min(xa, xb);
    case EdgeValue::kThreshold:
      return (std::abs(xa - budget_a) <= kTolerance &&
              std::abs(xb - budget_b) <= kTolerance)
                 ? e.param
                 : 0.0;
    case EdgeValue::kSum: return e.param * (xa + xb);
  }
  return 0.0;
}

/// Builds incident lists and the effort grid of every node. Exhausting the
/// budget is required, matching the equal-split model's strategy space.
inline void prepare_contribution(ContributionData& d,
                                 std::uint64_t per_player_cap) {
  d.incident.assign(d.node_ids.size(), {});
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    d.incident[d.edges[e].a].push_back(static_cast<int>(e));
    d.incident[d.edges[e].b].push_back(static_cast<int>(e));
  }
  d.allocations.clear();
  for (int i = 0; i < d.num_players(); ++i) {
    int parts = static_cast<int>(d.incident[i].size());
    int units = d.budgets[i] > 0 ? d.grid : 0;
    if (parts == 0) {
      d.allocations.push_back({{}});
    } else {
      d.allocations.push_back(
          enumerate_allocations(units, parts, false, per_player_cap));
    }
  }
}

/// Value of edge e, or 0 when one endpoint stays out of the game.
inline double contribution_edge_value(const ContributionData& d, int e,
                                      std::span<const int> s) {
  const auto& edge = d.edges[e];
  if (d.is_out(edge.a, s[edge.a]) || d.is_out(edge.b, s[edge.b])) return 0.0;
  return edge_value(edge, d.effort(edge.a, s[edge.a], e),
                    d.effort(edge.b, s[edge.b], e), d.budgets[edge.a],
                    d.budgets[edge.b]);
}

inline double contribution_utility(const ContributionData& d, int player,
                                   std::span<const int> s) {
  if (d.is_out(player, s[player])) return 0.0;
  double u = 0.0;
  for (int e : d.incident[player]) u += contribution_edge_value(d, e, s) / 2;
  return u;
}

/// Utility for an explicit effort profile: efforts[i][k] is node i's effort
/// on its k-th incident edge.
inline double contribution_utility(
    const ContributionData& d, int player,
    const std::vector<std::vector<double>>& efforts) {
  if (static_cast<int>(efforts.size()) != d.num_players()) {
    throw Error(ErrorCode::kSpecError, "effort profile size mismatch");
  }
  StrategyProfile s(d.num_players());
  for (int i = 0; i < d.num_players(); ++i) {
    if (efforts[i].size() != d.incident[i].size()) {
      throw Error(ErrorCode::kSpecError,
                  "node " + d.node_ids[i] + ": wrong number of edge efforts");
    }
    std::vector<int> units = efforts_to_units(
        efforts[i], d.budgets[i], d.grid, false, "node " + d.node_ids[i]);
    auto it = std::find(d.allocations[i].begin(), d.allocations[i].end(),
                        units);
    s[i] = static_cast<int>(it - d.allocations[i].begin());
  }
  return contribution_utility(d, player, s);
}

inline double contribution_welfare(const ContributionData& d,
                                   std::span<const int> s) {
  double w = 0.0;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    w += contribution_edge_value(d, static_cast<int>(e), s);
  }
  return w;
}

inline Game make_contribution_game(ContributionData data) {
  auto d = std::make_shared<const ContributionData>(std::move(data));
  std::vector<int> counts;
  for (const auto& a : d->allocations) {
    counts.push_back(static_cast<int>(a.size()));
  }
  Game game(counts, Direction::kUtilityMax,
            [d](int i, std::span<const int> s) {
              return contribution_utility(*d, i, s);
            });
  game.set_out_strategies(counts);
  game.set_potential([d](std::span<const int> s) {
    return contribution_welfare(*d, s) / 2;
  });

  Game::StrategyNames names(d->num_players());
  for (int i = 0; i < d->num_players(); ++i) {
    for (const auto& units : d->allocations[i]) {
      std::string name;
      for (std::size_t k = 0; k < units.size(); ++k) {
        if (units[k] == 0) continue;
        const auto& e = d->edges[d->incident[i][k]];
        int other = e.a == i ? e.b : e.a;
        if (!name.empty()) name += ',';
        name += d->node_ids[other] + ':' + std::to_string(units[k]);
      }
      names[i].push_back(name.empty() ? "idle" : name);
    }
  }
  game.set_strategy_names(std::move(names));
  return game;
}

}  // namespace coalsmooth::games

#endif  // COALSMOOTH_GAMES_NETWORK_CONTRIBUTION_HPP
