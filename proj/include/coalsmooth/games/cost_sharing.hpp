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

#ifndef COALSMOOTH_GAMES_COST_SHARING_HPP
#define COALSMOOTH_GAMES_COST_SHARING_HPP

#include <climits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"

namespace coalsmooth::games {

/// Fair cost sharing: every resource cost is split equally among its users.
struct CostSharingData {
  std::vector<std::string> resource_ids;
  std::vector<double> costs;
  /// [player][strategy] -> resource indices (sorted, distinct).
  std::vector<std::vector<std::vector<int>>> strategies;

  int num_players() const { return static_cast<int>(strategies.size()); }
  bool is_out(int player, int strategy) const {
    return strategy == static_cast<int>(strategies[player].size());
  }
};

/// Users per resource; players at their (virtual) out strategy use nothing.
inline std::vector<int> resource_loads(const CostSharingData& d,
                                       std::span<const int> s) {
  std::vector<int> load(d.costs.size(), 0);
  for (int i = 0; i < d.num_players(); ++i) {
    if (d.is_out(i, s[i])) continue;
    for (int r : d.strategies[i][s[i]]) ++load[r];
  }
  return load;
}

inline double cost_share_cost(const CostSharingData& d, int player,
                              std::span<const int> s) {
  if (d.is_out(player, s[player])) return 0.0;
  std::vector<int> load = resource_loads(d, s);
  double c = 0.0;
  for (int r : d.strategies[player][s[player]]) c += d.costs[r] / load[r];
  return c;
}

/// Rosenthal potential of the cost game: sum over resources of c_r * H(n_r).
inline double cost_sharing_potential(const CostSharingData& d,
                                     std::span<const int> s) {
  std::vector<int> load = resource_loads(d, s);
  double phi = 0.0;
  for (std::size_t r = 0; r < load.size(); ++r) {
    for (int k = 1; k <= load[r]; ++k) phi += d.costs[r] / k;
  }
  return phi;
}

inline Game make_cost_sharing_game(CostSharingData data) {
  auto d = std::make_shared<const CostSharingData>(std::move(data));
  std::vector<int> counts;
  for (const auto& strategies : d->strategies) {
    counts.push_back(static_cast<int>(strategies.size()));
  }
  Game game(counts, Direction::kCostMin,
            [d](int i, std::span<const int> s) {
              return cost_share_cost(*d, i, s);
            });
  game.set_out_strategies(counts);
  game.set_potential(
      [d](std::span<const int> s) { return cost_sharing_potential(*d, s); });

  OccupancyModel occ;
  occ.num_resources = static_cast<int>(d->costs.size());
  occ.strategy_resources = d->strategies;
  occ.increment = [d](int r, int k) { return d->costs[r] / k; };
  occ.max_occupancy.assign(d->costs.size(), INT_MAX);
  game.set_occupancy(std::move(occ));

  Game::StrategyNames names(d->num_players());
  for (int i = 0; i < d->num_players(); ++i) {
    for (const auto& strategy : d->strategies[i]) {
      std::string name = "{";
      for (std::size_t k = 0; k < strategy.size(); ++k) {
        if (k > 0) name += ',';
        name += d->resource_ids[strategy[k]];
      }
      names[i].push_back(name + "}");
    }
  }
  game.set_strategy_names(std::move(names));
  return game;
}

}  // namespace coalsmooth::games

#endif  // COALSMOOTH_GAMES_COST_SHARING_HPP
