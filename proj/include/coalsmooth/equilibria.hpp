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

#ifndef COALSMOOTH_EQUILIBRIA_HPP
#define COALSMOOTH_EQUILIBRIA_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"

namespace coalsmooth {

struct UnilateralWitness {
  int player = 0;
  int strategy = 0;
};

struct NashCheck {
  bool holds = true;
  std::optional<UnilateralWitness> witness;
};

/// A coalition together with a joint deviation (one strategy per member).
struct CoalitionWitness {
  Coalition coalition;
  std::vector<int> joint;
};

struct CoalitionCheck {
  bool holds = true;
  std::optional<CoalitionWitness> witness;
};

/// No player has a unilateral deviation that is strictly better by more than
/// kTolerance. The first witness in (player, strategy) order is returned.
inline NashCheck is_nash(const Game& game, std::span<const int> s) {
  game.validate_profile(s, /*allow_out=*/false);
  StrategyProfile t(s.begin(), s.end());
  for (int i = 0; i < game.num_players(); ++i) {
    double current = game.utility_unchecked(i, s);
    for (int k = 0; k < game.num_strategies(i); ++k) {
      if (k == s[i]) continue;
      t[i] = k;
      if (game.improves(game.utility_unchecked(i, t), current)) {
        return {false, UnilateralWitness{i, k}};
      }
    }
    t[i] = s[i];
  }
  return {};
}

/// Total number of joint deviations a strong-Nash test examines.
inline std::uint64_t coalition_deviation_count(const Game& game) {
  std::uint64_t total = 0;
  for (const auto& c : all_coalitions(game.num_players())) {
    std::uint64_t j = joint_count(game, c);
    if (total > std::numeric_limits<std::uint64_t>::max() - j) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total += j;
  }
  return total;
}

/// For every coalition and joint deviation, some member is not strictly
/// better off. Coalitions are scanned by size, then lexicographically, and
/// the first blocking deviation is returned as the witness.
inline CoalitionCheck is_strong_nash(const Game& game, std::span<const int> s,
                                     std::uint64_t cap = kDefaultProfileCap) {
  game.validate_profile(s, /*allow_out=*/false);
  check_cap(coalition_deviation_count(game), cap, "coalitional deviation set");
  std::vector<double> current(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    current[i] = game.utility_unchecked(i, s);
  }
  for (const auto& c : all_coalitions(game.num_players())) {
    std::optional<std::vector<int>> found;
    for_each_joint(game, c, [&](const std::vector<int>& joint) {
      if (found) return;
      StrategyProfile t = apply_deviation(s, c, joint);
      for (int i : c.members()) {
        if (!game.improves(game.utility_unchecked(i, t), current[i])) return;
      }
      found = joint;
    });
    if (found) return {false, CoalitionWitness{c, *found}};
  }
  return {};
}

enum class EquilibriumKind { kNash, kStrongNash };

/// All equilibria of the requested kind in enumeration order. Each profile
/// is tested on its own; strong Nash is not pre-filtered through Nash.
inline std::vector<StrategyProfile> enumerate_equilibria(
    const Game& game, EquilibriumKind kind,
    std::uint64_t cap = kDefaultProfileCap) {
  std::vector<StrategyProfile> out;
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        bool ok = kind == EquilibriumKind::kNash
                      ? is_nash(game, s).holds
                      : is_strong_nash(game, s, cap).holds;
        if (ok) out.push_back(s);
      },
      cap);
  return out;
}

/// Efficiency ratio, always >= 1 when present. `value` is +infinity when an
/// equilibrium has zero welfare against a positive optimum.
struct Ratio {
  std::optional<double> value;
  std::string reason;

  bool unbounded() const { return value && std::isinf(*value); }
};

struct ProfileRow {
  StrategyProfile profile;
  double welfare = 0.0;
  bool nash = false;
  bool strong_nash = false;
  std::optional<CoalitionWitness> blocking;
};

struct EquilibriumReport {
  Direction direction = Direction::kUtilityMax;
  std::vector<StrategyProfile> nash;
  std::vector<StrategyProfile> strong_nash;
  Optimum opt;
  Ratio poa;
  Ratio pos;
  Ratio spoa;
  std::vector<ProfileRow> rows;
};

namespace detail {

/// OPT over equilibrium welfare (utility) or equilibrium cost over OPT.
inline double efficiency(Direction dir, double opt, double eq) {
  double num = dir == Direction::kUtilityMax ? opt : eq;
  double den = dir == Direction::kUtilityMax ? eq : opt;
  if (den <= kTolerance) {
    return num <= kTolerance ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return num / den;
}

inline Ratio ratio_over(const Game& game, const std::vector<double>& welfare,
                        double opt, bool worst, const char* what) {
  if (welfare.empty()) {
    return {std::nullopt, std::string("no ") + what + " equilibrium"};
  }
  auto [lo, hi] = std::minmax_element(welfare.begin(), welfare.end());
  // Worst is the lowest welfare or the highest cost.
  double pick = worst == game.maximizes() ? *lo : *hi;
  Ratio r{efficiency(game.direction(), opt, pick), ""};
  if (r.unbounded()) r.reason = "equilibrium with zero welfare";
  return r;
}

}  // namespace detail

/// Full enumeration report: both equilibrium sets, OPT, PoA, PoS and SPoA.
inline EquilibriumReport efficiency_ratios(
    const Game& game, bool with_witnesses = false,
    std::uint64_t cap = kDefaultProfileCap) {
  EquilibriumReport report;
  report.direction = game.direction();
  report.opt = optimum(game, cap);
  std::vector<double> nash_w;
  std::vector<double> strong_w;
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        ProfileRow row;
        row.profile = s;
        row.welfare = game.social_welfare_unchecked(s);
        row.nash = is_nash(game, s).holds;
        CoalitionCheck strong = is_strong_nash(game, s, cap);
        row.strong_nash = strong.holds;
        if (with_witnesses) row.blocking = strong.witness;
        if (row.nash) {
          report.nash.push_back(s);
          nash_w.push_back(row.welfare);
        }
        if (row.strong_nash) {
          report.strong_nash.push_back(s);
          strong_w.push_back(row.welfare);
        }
        report.rows.push_back(std::move(row));
      },
      cap);
  double opt = report.opt.value;
  report.poa = detail::ratio_over(game, nash_w, opt, true, "Nash");
  report.pos = detail::ratio_over(game, nash_w, opt, false, "Nash");
  report.spoa = detail::ratio_over(game, strong_w, opt, true, "strong Nash");
  return report;
}

struct WeightedProfile {
  StrategyProfile profile;
  double probability = 0.0;
};

using Distribution = std::vector<WeightedProfile>;

/// Strong coarse correlated equilibrium test restricted to pure coalitional
/// deviations: no coalition has a fixed joint strategy that strictly improves
/// every member's expected payoff.
inline CoalitionCheck verify_scce(const Game& game, const Distribution& dist,
                                  std::uint64_t cap = kDefaultProfileCap) {
  if (dist.empty()) {
    throw Error(ErrorCode::kInvalidDistribution, "distribution is empty");
  }
  double total = 0.0;
  for (const auto& wp : dist) {
    if (!(wp.probability >= 0.0) || !std::isfinite(wp.probability)) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "negative or non-finite probability");
    }
    try {
      game.validate_profile(wp.profile, /*allow_out=*/false);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidDistribution, e.what());
    }
    total += wp.probability;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw Error(ErrorCode::kInvalidDistribution,
                "probabilities sum to " + std::to_string(total));
  }
  check_cap(coalition_deviation_count(game) * dist.size(), cap,
            "coalitional deviation set");

  const int n = game.num_players();
  std::vector<double> expected(n, 0.0);
  for (const auto& wp : dist) {
    for (int i = 0; i < n; ++i) {
      expected[i] += wp.probability * game.utility_unchecked(i, wp.profile);
    }
  }
  for (const auto& c : all_coalitions(n)) {
    std::optional<std::vector<int>> found;
    for_each_joint(game, c, [&](const std::vector<int>& joint) {
      if (found) return;
      for (int i : c.members()) {
        double dev = 0.0;
        for (const auto& wp : dist) {
          dev += wp.probability *
                 game.utility_unchecked(i, apply_deviation(wp.profile, c, joint));
        }
        if (!game.improves(dev, expected[i])) return;
      }
      found = joint;
    });
    if (found) return {false, CoalitionWitness{c, *found}};
  }
  return {};
}

}  // namespace coalsmooth

#endif  // COALSMOOTH_EQUILIBRIA_HPP
