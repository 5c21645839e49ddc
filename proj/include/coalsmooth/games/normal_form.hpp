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

#ifndef COALSMOOTH_GAMES_NORMAL_FORM_HPP
#define COALSMOOTH_GAMES_NORMAL_FORM_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"

namespace coalsmooth::games {

/// Explicit payoff tables, flattened in enumeration order (player 0 slowest).
struct NormalFormData {
  std::vector<std::vector<std::string>> strategy_names;
  Direction direction = Direction::kUtilityMax;
  /// [player][profile index]
  std::vector<std::vector<double>> payoffs;
  std::optional<std::vector<double>> potential;
  /// Live strategy designated as out, per player.
  std::optional<std::vector<int>> out;

  std::vector<int> counts() const {
    std::vector<int> c;
    for (const auto& names : strategy_names) {
      c.push_back(static_cast<int>(names.size()));
    }
    return c;
  }
};

inline Game make_normal_form_game(NormalFormData data) {
  auto d = std::make_shared<const NormalFormData>(std::move(data));
  std::vector<int> counts = d->counts();
  Game game(counts, d->direction,
            [d, counts](int i, std::span<const int> s) {
              return d->payoffs[i][profile_index(counts, s)];
            });
  if (d->potential) {
    game.set_potential([d, counts](std::span<const int> s) {
      return (*d->potential)[profile_index(counts, s)];
    });
  }
  if (d->out) game.set_out_strategies(*d->out);
  game.set_strategy_names(d->strategy_names);
  return game;
}

}  // namespace coalsmooth::games

#endif  // COALSMOOTH_GAMES_NORMAL_FORM_HPP
