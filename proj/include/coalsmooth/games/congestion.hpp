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

#ifndef COALSMOOTH_GAMES_CONGESTION_HPP
#define COALSMOOTH_GAMES_CONGESTION_HPP

#include <climits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"

namespace coalsmooth::games {

/// Per-occupancy utility of one resource: an explicit table pi(1..n) or the
/// harmonic form pi(k) = v / k.
struct ResourceUtility {
  std::vector<double> table;
  std::optional<double> harmonic_value;

  double operator()(int k) const {
    if (harmonic_value) return *harmonic_value / k;
    return table.at(k - 1);
  }
  int max_occupancy() const {
    return harmonic_value ? INT_MAX : static_cast<int>(table.size());
  }
};

struct CongestionData {
  std::vector<std::string> resource_ids;
  std::vector<ResourceUtility> resources;
  /// [player][strategy] -> resource indices (sorted, distinct).
  std::vector<std::vector<std::vector<int>>> strategies;

  int num_players() const { return static_cast<int>(strategies.size()); }
  bool is_out(int player, int strategy) const {
    return strategy == static_cast<int>(strategies[player].size());
  }
};

inline std::vector<int> resource_loads(const CongestionData& d,
                                       std::span<const int> s) {
  std::vector<int> load(d.resources.size(), 0);
  for (int i = 0; i < d.num_players(); ++i) {
    if (d.is_out(i, s[i])) continue;
    for (int r : d.strategies[i][s[i]]) ++load[r];
  }
  return load;
}

inline double congestion_utility(const CongestionData& d, int player,
                                 std::span<const int> s) {
  if (d.is_out(player, s[player])) return 0.0;
  std::vector<int> load = resource_loads(d, s);
  double u = 0.0;
  for (int r : d.strategies[player][s[player]]) u += d.resources[r](load[r]);
  return u;
}

inline double rosenthal_potential(const CongestionData& d,
                                  std::span<const int> s) {
  std::vector<int> load = resource_loads(d, s);
  double phi = 0.0;
  for (std::size_t r = 0; r < load.size(); ++r) {
    for (int k = 1; k <= load[r]; ++k) phi += d.resources[r](k);
  }
  return phi;
}

inline Game make_congestion_game(CongestionData data) {
  auto d = std::make_shared<const CongestionData>(std::move(data));
  std::vector<int> counts;
  for (const auto& strategies : d->strategies) {
    counts.push_back(static_cast<int>(strategies.size()));
  }
  Game game(counts, Direction::kUtilityMax,
            [d](int i, std::span<const int> s) {
              return congestion_utility(*d, i, s);
            });
  game.set_out_strategies(counts);
  game.set_potential(
      [d](std::span<const int> s) { return rosenthal_potential(*d, s); });

  OccupancyModel occ;
  occ.num_resources = static_cast<int>(d->resources.size());
  occ.strategy_resources = d->strategies;
  occ.increment = [d](int r, int k) { return d->resources[r](k); };
  for (const auto& res : d->resources) {
    occ.max_occupancy.push_back(res.max_occupancy());
  }
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

#endif  // COALSMOOTH_GAMES_CONGESTION_HPP
