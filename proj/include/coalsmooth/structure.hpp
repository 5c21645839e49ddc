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

#ifndef COALSMOOTH_STRUCTURE_HPP
#define COALSMOOTH_STRUCTURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"

// Exhaustive checks of the structural hypotheses behind the smoothness
// bounds: marginal contribution, monotone participation, exact potentials,
// closeness of the potential to welfare, positive externalities and
// submodularity of occupancy potentials.

namespace coalsmooth {

/// A profile-level counterexample. `player` is the player whose payoff or
/// exit is involved, `other` the deviation target or second player.
struct ProfileWitness {
  StrategyProfile profile;
  int player = -1;
  int other = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PropertyCheck {
  bool holds = true;
  std::optional<ProfileWitness> witness;
};

namespace detail {

inline StrategyProfile with_out(const Game& game, const StrategyProfile& s,
                                int player) {
  StrategyProfile t = s;
  t[player] = game.out_strategy(player);
  return t;
}

/// Like for_each_profile, but a virtual out strategy is one more choice.
template <typename Fn>
void for_each_extended_profile(const Game& game, Fn&& fn, std::uint64_t cap) {
  std::vector<int> counts = game.strategy_counts();
  if (game.has_out_strategies()) {
    for (int i = 0; i < game.num_players(); ++i) {
      if (game.out_is_virtual(i)) ++counts[i];
    }
  }
  check_cap(profile_count(counts), cap, "profile space with out strategies");
  StrategyProfile s(counts.size(), 0);
  do {
    fn(std::as_const(s));
  } while (next_profile(counts, s));
}

}  // namespace detail

struct GammaResult {
  /// +infinity when no profile has a positive marginal contribution.
  double gamma = std::numeric_limits<double>::infinity();
  /// Profile and player at which the minimum is attained.
  std::optional<ProfileWitness> binding;
};

/// Largest gamma with u_i(s) >= gamma * (SW(s) - SW(s_i^out, s_-i)) for all
/// live profiles and players. Pairs with zero marginal impose nothing.
inline GammaResult marginal_contribution_gamma(
    const Game& game, std::uint64_t cap = kDefaultProfileCap) {
  game.require_out();
  GammaResult r;
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        double sw = game.social_welfare_unchecked(s);
        for (int i = 0; i < game.num_players(); ++i) {
          double marginal =
              sw - game.social_welfare_unchecked(detail::with_out(game, s, i));
          if (marginal <= kTolerance) continue;
          double u = game.utility_unchecked(i, s);
          double ratio = u / marginal;
          if (ratio < r.gamma) {
            r.gamma = ratio;
            r.binding = ProfileWitness{s, i, -1, u, marginal};
          }
        }
      },
      cap);
  return r;
}

/// No player lowers the social welfare by entering: SW(s) >= SW(s_i^out,
/// s_-i) for every live profile and player.
inline PropertyCheck check_monotone_participation(
    const Game& game, std::uint64_t cap = kDefaultProfileCap) {
  game.require_out();
  PropertyCheck r;
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        if (!r.holds) return;
        double sw = game.social_welfare_unchecked(s);
        for (int i = 0; i < game.num_players(); ++i) {
          double without =
              game.social_welfare_unchecked(detail::with_out(game, s, i));
          if (sw < without - kTolerance) {
            r = {false, ProfileWitness{s, i, -1, sw, without}};
            return;
          }
        }
      },
      cap);
  return r;
}

/// Exact potential identity u_i(k, s_-i) - u_i(s) = Phi(k, s_-i) - Phi(s)
/// over every unilateral deviation, with out strategies included both as
/// the mover's target and as the other players' positions.
inline PropertyCheck verify_potential(const Game& game,
                                      std::uint64_t cap = kDefaultProfileCap) {
  if (!game.has_potential()) {
    throw Error(ErrorCode::kMissingPotential,
                "game does not define a potential");
  }
  const bool with_out = game.has_out_strategies();
  PropertyCheck r;
  detail::for_each_extended_profile(
      game,
      [&](const StrategyProfile& s) {
        if (!r.holds) return;
        double phi = game.potential(s);
        StrategyProfile t = s;
        for (int i = 0; i < game.num_players(); ++i) {
          double u = game.utility_unchecked(i, s);
          int last = game.num_strategies(i) - 1;
          if (with_out) last = std::max(last, game.out_strategy(i));
          for (int k = 0; k <= last; ++k) {
            if (k == s[i]) continue;
            t[i] = k;
            double du = game.utility_unchecked(i, t) - u;
            double dphi = game.potential(t) - phi;
            double tol = kTolerance * std::max(1.0, std::abs(phi));
            if (std::abs(du - dphi) > tol) {
              r = {false, ProfileWitness{s, i, k, du, dphi}};
              return;
            }
          }
          t[i] = s[i];
        }
      },
      cap);
  return r;
}

struct Closeness {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Tightest (lambda, mu) with lambda * SW(s) <= Phi(s) <= mu * SW(s) over
/// live profiles. Throws Incomparable when a zero-welfare profile has
/// positive potential or no profile has positive welfare.
inline Closeness potential_closeness(const Game& game,
                                     std::uint64_t cap = kDefaultProfileCap) {
  if (!game.has_potential()) {
    throw Error(ErrorCode::kMissingPotential,
                "game does not define a potential");
  }
  Closeness c{std::numeric_limits<double>::infinity(), 0.0};
  bool any = false;
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        double sw = game.social_welfare_unchecked(s);
        double phi = game.potential(s);
        if (sw <= kTolerance) {
          if (std::abs(phi) > kTolerance) {
            throw Error(ErrorCode::kIncomparable,
                        "profile " + format_profile(s) +
                            " has zero welfare but potential " +
                            std::to_string(phi));
          }
          return;
        }
        c.lambda = std::min(c.lambda, phi / sw);
        c.mu = std::max(c.mu, phi / sw);
        any = true;
      },
      cap);
  if (!any) {
    throw Error(ErrorCode::kIncomparable, "no profile has positive welfare");
  }
  return c;
}

/// Removing any player never hurts the others: u_i(s) >= u_i(s_j^out, s_-j)
/// for utilities, c_i(s) <= c_i(s_j^out, s_-j) for costs.
inline PropertyCheck check_positive_externalities(
    const Game& game, std::uint64_t cap = kDefaultProfileCap) {
  game.require_out();
  PropertyCheck r;
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        if (!r.holds) return;
        for (int j = 0; j < game.num_players(); ++j) {
          StrategyProfile t = detail::with_out(game, s, j);
          for (int i = 0; i < game.num_players(); ++i) {
            if (i == j) continue;
            double with = game.utility_unchecked(i, s);
            double without = game.utility_unchecked(i, t);
            if (game.improves(without, with)) {
              r = {false, ProfileWitness{s, i, j, with, without}};
              return;
            }
          }
        }
      },
      cap);
  return r;
}

/// Multisets are multiplicity vectors over `universe`, the distinct resource
/// sets that appear as live strategies.
struct SubmodularityWitness {
  std::vector<std::vector<int>> universe;
  std::vector<int> s;
  std::vector<int> t;
  /// Index into `universe`; -1 for a monotonicity failure Phi(t) < Phi(s).
  int added = -1;
  double gain_s = 0.0;
  double gain_t = 0.0;
};

struct SubmodularityCheck {
  bool holds = true;
  std::uint64_t pairs_checked = 0;
  std::uint64_t skipped = 0;
  std::optional<SubmodularityWitness> witness;
};

/// Monotone submodularity of the occupancy potential on multisets of
/// strategies with multiplicity at most `cap` per strategy: for s a
/// sub-multiset of t and a strategy u, Phi(s + u) - Phi(s) >= Phi(t + u) -
/// Phi(t), and Phi(t) >= Phi(s). Multisets whose occupancy leaves the domain
/// of a utility table are skipped and counted.
inline SubmodularityCheck check_potential_submodularity(
    const Game& game, int cap, std::uint64_t work_cap = kDefaultProfileCap) {
  const OccupancyModel* occ = game.occupancy();
  if (occ == nullptr) {
    throw Error(ErrorCode::kNotMultisetExtendable,
                "potential has no occupancy form for this game family");
  }
  if (cap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "multiplicity cap must be >= 1");
  }
  std::vector<std::vector<int>> universe;
  for (const auto& per_player : occ->strategy_resources) {
    for (auto set : per_player) {
      std::sort(set.begin(), set.end());
      if (std::find(universe.begin(), universe.end(), set) == universe.end()) {
        universe.push_back(set);
      }
    }
  }
  std::sort(universe.begin(), universe.end());
  const int u_count = static_cast<int>(universe.size());
  std::vector<int> radix(u_count, cap + 1);
  std::uint64_t multisets = profile_count(radix);
  check_cap(multisets > work_cap ? multisets : multisets * multisets, work_cap,
            "multiset pair space");

  auto counts_of = [&](const std::vector<int>& m, int extra) {
    std::vector<int> counts(occ->num_resources, 0);
    for (int u = 0; u < u_count; ++u) {
      int times = m[u] + (u == extra ? 1 : 0);
      for (int r : universe[u]) counts[r] += times;
    }
    return counts;
  };
  auto in_domain = [&](const std::vector<int>& counts) {
    for (int r = 0; r < occ->num_resources; ++r) {
      if (counts[r] > occ->max_occupancy[r]) return false;
    }
    return true;
  };
  // Potential of m plus one copy of `extra` (or none for -1); nullopt when
  // outside the table domain.
  auto phi = [&](const std::vector<int>& m,
                 int extra) -> std::optional<double> {
    auto counts = counts_of(m, extra);
    if (!in_domain(counts)) return std::nullopt;
    return occ->potential_of_counts(counts);
  };

  SubmodularityCheck r;
  std::vector<int> t(u_count, 0);
  do {
    std::optional<double> phi_t = phi(t, -1);
    if (!phi_t) {
      ++r.skipped;
      continue;
    }
    // Every sub-multiset s of t.
    std::vector<int> s(u_count, 0);
    std::vector<int> bound(t.size());
    for (int u = 0; u < u_count; ++u) bound[u] = t[u] + 1;
    do {
      std::optional<double> phi_s = phi(s, -1);
      if (*phi_t < *phi_s - kTolerance) {
        r.holds = false;
        r.witness = SubmodularityWitness{universe, s, t, -1, *phi_s, *phi_t};
        return r;
      }
      for (int u = 0; u < u_count; ++u) {
        std::optional<double> phi_su = phi(s, u);
        std::optional<double> phi_tu = phi(t, u);
        if (!phi_su || !phi_tu) {
          ++r.skipped;
          continue;
        }
        ++r.pairs_checked;
        double gain_s = *phi_su - *phi_s;
        double gain_t = *phi_tu - *phi_t;
        if (gain_s < gain_t - kTolerance) {
          r.holds = false;
          r.witness = SubmodularityWitness{universe, s, t, u, gain_s, gain_t};
          return r;
        }
      }
    } while (u_count > 0 && next_profile(bound, s));
  } while (u_count > 0 && next_profile(radix, t));
  return r;
}

}  // namespace coalsmooth

#endif  // COALSMOOTH_STRUCTURE_HPP
