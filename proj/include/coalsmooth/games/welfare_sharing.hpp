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

#ifndef COALSMOOTH_GAMES_WELFARE_SHARING_HPP
#define COALSMOOTH_GAMES_WELFARE_SHARING_HPP

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"
#include "coalsmooth/games/allocation.hpp"

namespace coalsmooth::games {

/// min(cap, a * total group effort); cap may be +infinity.
struct CappedSum {
  double a = 1.0;
  double cap = std::numeric_limits<double>::infinity();

  double operator()(double effort) const { return std::min(cap, a * effort); }
};

struct WelfareProject {
  std::string id;
  std::map<std::string, CappedSum> factors;
};

struct WelfarePlayer {
  double budget = 0.0;
  std::string group;
  std::vector<int> projects;  // ascending project indices
};

/// Welfare sharing game: project values are products of per-skill-group
/// factors and are split in proportion to marginal contributions.
/// Players may leave effort idle, so zero effort is a live strategy.
struct WelfareSharingData {
  std::vector<WelfareProject> projects;
  std::vector<WelfarePlayer> players;
  int grid = 1;
  /// [player][strategy] -> units per participated project.
  std::vector<std::vector<std::vector<int>>> allocations;
  /// [project] -> participants, ascending.
  std::vector<std::vector<int>> participants;
  /// [project] -> skill groups with at least one participant.
  std::vector<std::vector<std::string>> groups;

  int num_players() const { return static_cast<int>(players.size()); }
};

/// efforts[i][k]: player i's effort on its k-th project.
using EffortProfile = std::vector<std::vector<double>>;

inline void prepare_welfare_sharing(WelfareSharingData& d,
                                    std::uint64_t per_player_cap) {
  d.participants.assign(d.projects.size(), {});
  d.groups.assign(d.projects.size(), {});
  for (int i = 0; i < d.num_players(); ++i) {
    for (int j : d.players[i].projects) {
      d.participants[j].push_back(i);
      auto& g = d.groups[j];
      if (std::find(g.begin(), g.end(), d.players[i].group) == g.end()) {
        g.push_back(d.players[i].group);
      }
    }
  }
  for (auto& g : d.groups) std::sort(g.begin(), g.end());
  d.allocations.clear();
  for (const auto& p : d.players) {
    int units = p.budget > 0 ? d.grid : 0;
    d.allocations.push_back(enumerate_allocations(
        units, static_cast<int>(p.projects.size()), true, per_player_cap));
  }
}

inline double effort_on(const WelfareSharingData& d, const EffortProfile& x,
                        int player, int project) {
  const auto& proj = d.players[player].projects;
  auto it = std::find(proj.begin(), proj.end(), project);
  return it == proj.end() ? 0.0 : x[player][it - proj.begin()];
}

/// v_j with player `zeroed` (if >= 0) forced to zero effort.
inline double project_value(const WelfareSharingData& d, const EffortProfile& x,
                            int project, int zeroed = -1) {
  if (d.participants[project].empty()) return 0.0;
  double v = 1.0;
  for (const auto& group : d.groups[project]) {
    double total = 0.0;
    for (int k : d.participants[project]) {
      if (k != zeroed && d.players[k].group == group) {
        total += effort_on(d, x, k, project);
      }
    }
    v *= d.projects[project].factors.at(group)(total);
  }
  return v;
}

inline double welfare_share_utility(const WelfareSharingData& d, int player,
                                    const EffortProfile& x) {
  double u = 0.0;
  for (int j : d.players[player].projects) {
    double v = project_value(d, x, j);
    double denom = 0.0;
    double mine = 0.0;
    for (int k : d.participants[j]) {
      double marginal = v - project_value(d, x, j, k);
      denom += marginal;
      if (k == player) mine = marginal;
    }
    // No participant contributes anything: the project pays nobody.
    if (denom <= 0.0) continue;
    u += mine / denom * v;
  }
  return u;
}

inline EffortProfile efforts_of(const WelfareSharingData& d,
                                std::span<const int> s) {
  EffortProfile x(d.num_players());
  for (int i = 0; i < d.num_players(); ++i) {
    const auto& p = d.players[i];
    if (s[i] == static_cast<int>(d.allocations[i].size())) {
      x[i].assign(p.projects.size(), 0.0);
      continue;
    }
    for (int units : d.allocations[i][s[i]]) {
      x[i].push_back(p.budget * units / d.grid);
    }
  }
  return x;
}

/// Checked entry point for explicit effort profiles.
inline double welfare_share_utility_checked(const WelfareSharingData& d,
                                            int player,
                                            const EffortProfile& x) {
  if (static_cast<int>(x.size()) != d.num_players()) {
    throw Error(ErrorCode::kSpecError, "effort profile size mismatch");
  }
  for (int i = 0; i < d.num_players(); ++i) {
    if (x[i].size() != d.players[i].projects.size()) {
      throw Error(ErrorCode::kSpecError,
                  "player " + std::to_string(i) +
                      ": wrong number of project efforts");
    }
    efforts_to_units(x[i], d.players[i].budget, d.grid, true,
                     "player " + std::to_string(i));
  }
  return welfare_share_utility(d, player, x);
}

/// Index of the all-zero allocation of every player.
inline std::vector<int> zero_effort_strategies(const WelfareSharingData& d) {
  std::vector<int> out;
  for (const auto& allocs : d.allocations) {
    for (std::size_t k = 0; k < allocs.size(); ++k) {
      if (std::all_of(allocs[k].begin(), allocs[k].end(),
                      [](int u) { return u == 0; })) {
        out.push_back(static_cast<int>(k));
        break;
      }
    }
  }
  return out;
}

inline Game make_welfare_sharing_game(WelfareSharingData data) {
  auto d = std::make_shared<const WelfareSharingData>(std::move(data));
  std::vector<int> counts;
  for (const auto& a : d->allocations) {
    counts.push_back(static_cast<int>(a.size()));
  }
  Game game(counts, Direction::kUtilityMax,
            [d](int i, std::span<const int> s) {
              return welfare_share_utility(*d, i, efforts_of(*d, s));
            });
  game.set_out_strategies(zero_effort_strategies(*d));

  Game::StrategyNames names(d->num_players());
  for (int i = 0; i < d->num_players(); ++i) {
    for (const auto& units : d->allocations[i]) {
      std::string name;
      for (std::size_t k = 0; k < units.size(); ++k) {
        if (units[k] == 0) continue;
        if (!name.empty()) name += ',';
        name += d->projects[d->players[i].projects[k]].id + ':' +
                std::to_string(units[k]);
      }
      names[i].push_back(name.empty() ? "idle" : name);
    }
  }
  game.set_strategy_names(std::move(names));
  return game;
}

}  // namespace coalsmooth::games

#endif  // COALSMOOTH_GAMES_WELFARE_SHARING_HPP
