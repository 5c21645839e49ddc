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

// Fixture helpers and brute-force oracles shared by the test binaries. The
// oracles avoid the library's own shortcuts (subset recursion, coalition
// iteration order, sparse chains) so agreement is meaningful.

#ifndef COALSMOOTH_TESTS_SUPPORT_HPP
#define COALSMOOTH_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coalsmooth/coalsmooth.hpp"

namespace coalsmooth::testing {

namespace fx = coalsmooth::games::fixtures;

inline Game g1() { return games::load_game(fx::g1()); }
inline Game g2() { return games::load_game(fx::g2()); }
inline Game g3(double high = 10.0) { return games::load_game(fx::g3(high)); }
inline Game g4() { return games::load_game(fx::g4()); }
inline Game g5() { return games::load_game(fx::g5()); }

/// Normal-form game from per-player payoff tables indexed lexicographically.
inline Game table_game(const std::vector<int>& counts,
                       std::vector<std::vector<double>> payoffs,
                       Direction dir = Direction::kUtilityMax,
                       std::optional<std::vector<int>> out = std::nullopt) {
  games::NormalFormData d;
  for (int c : counts) {
    std::vector<std::string> names;
    for (int k = 0; k < c; ++k) names.push_back("s" + std::to_string(k));
    d.strategy_names.push_back(std::move(names));
  }
  d.direction = dir;
  d.payoffs = std::move(payoffs);
  d.out = std::move(out);
  return games::make_normal_form_game(std::move(d));
}

/// All live profiles, built with an independent counter.
inline std::vector<StrategyProfile> all_profiles(const Game& g) {
  std::vector<StrategyProfile> out{{}};
  for (int i = 0; i < g.num_players(); ++i) {
    std::vector<StrategyProfile> next;
    for (const auto& p : out) {
      for (int k = 0; k < g.num_strategies(i); ++k) {
        auto q = p;
        q.push_back(k);
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline double sw(const Game& g, const StrategyProfile& s) {
  double total = 0.0;
  for (int i = 0; i < g.num_players(); ++i) total += g.utility(i, s);
  return total;
}

inline bool strictly_better(const Game& g, double a, double b) {
  return g.maximizes() ? a > b + 1e-9 : a < b - 1e-9;
}

/// s is strong Nash iff no other profile t strictly improves every player
/// whose strategy differs (any blocking coalition contains such a set).
inline bool oracle_strong_nash(const Game& g, const StrategyProfile& s) {
  for (const auto& t : all_profiles(g)) {
    if (t == s) continue;
    bool all = true;
    for (int i = 0; i < g.num_players() && all; ++i) {
      if (t[i] != s[i]) all = strictly_better(g, g.utility(i, t), g.utility(i, s));
    }
    if (all) return false;
  }
  return true;
}

inline bool oracle_nash(const Game& g, const StrategyProfile& s) {
  for (int i = 0; i < g.num_players(); ++i) {
    for (int k = 0; k < g.num_strategies(i); ++k) {
      auto t = s;
      t[i] = k;
      if (strictly_better(g, g.utility(i, t), g.utility(i, s))) return false;
    }
  }
  return true;
}

/// Deviation sum over all n! orderings; returns the tightest value.
inline double oracle_worst_deviation_sum(const Game& g,
                                         const StrategyProfile& s_star,
                                         const StrategyProfile& s) {
  const int n = g.num_players();
  std::vector<int> seq(n);
  std::iota(seq.begin(), seq.end(), 0);
  bool first = true;
  double best = 0.0;
  do {
    double total = 0.0;
    for (int pos = 0; pos < n; ++pos) {
      auto t = s;
      for (int q = pos; q < n; ++q) t[seq[q]] = s_star[seq[q]];
      total += g.utility(seq[pos], t);
    }
    if (first || (g.maximizes() ? total < best : total > best)) best = total;
    first = false;
  } while (std::next_permutation(seq.begin(), seq.end()));
  return best;
}

/// Smoothness inequality over every profile and every ordering.
inline bool oracle_smooth(const Game& g, const StrategyProfile& s_star,
                          double lambda, double mu) {
  double ref = g.maximizes() ? 0.0 : sw(g, s_star);
  if (g.maximizes()) {
    for (const auto& s : all_profiles(g)) ref = std::max(ref, sw(g, s));
  }
  for (const auto& s : all_profiles(g)) {
    double lhs = oracle_worst_deviation_sum(g, s_star, s);
    if (g.maximizes() ? lhs < lambda * ref - mu * sw(g, s) - 1e-9
                      : lhs > lambda * ref + mu * sw(g, s) + 1e-9) {
      return false;
    }
  }
  return true;
}

/// Dense transition matrix computed directly from coalition enumeration by
/// bitmask, independent of the sparse chain builder.
inline std::vector<std::vector<double>> oracle_transition(const Game& g) {
  auto states = all_profiles(g);
  const int n = g.num_players();
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  std::vector<std::vector<double>> p(states.size(),
                                     std::vector<double>(states.size(), 0.0));
  for (std::size_t a = 0; a < states.size(); ++a) {
    const auto& s = states[a];
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      int k = __builtin_popcount(mask);
      double choose = 1.0;
      for (int j = 1; j <= k; ++j) choose = choose * (n - k + j) / j;
      double prob = (1.0 / h) * (1.0 / k) / choose;
      // Best joint deviation: current wins ties, then first in order.
      auto total = [&](const StrategyProfile& t) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
          if (mask >> i & 1) v += g.utility(i, t);
        }
        return v;
      };
      StrategyProfile best = s;
      double best_v = total(s);
      for (const auto& t : states) {
        bool others_fixed = true;
        for (int i = 0; i < n; ++i) {
          if (!(mask >> i & 1) && t[i] != s[i]) others_fixed = false;
        }
        if (!others_fixed) continue;
        double v = total(t);
        if (strictly_better(g, v, best_v)) {
          best = t;
          best_v = v;
        }
      }
      auto it = std::find(states.begin(), states.end(), best);
      p[a][it - states.begin()] += prob;
    }
  }
  return p;
}

/// Stationary distribution by Gauss-Jordan elimination on the balance
/// equations with the normalization row, restricted to `members`.
inline std::vector<double> oracle_stationary(
    const std::vector<std::vector<double>>& p, const std::vector<int>& members) {
  const std::size_t k = members.size();
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      a[r][c] = p[members[c]][members[r]] - (r == c ? 1.0 : 0.0);
    }
  }
  for (std::size_t c = 0; c < k; ++c) a[k - 1][c] = 1.0;
  a[k - 1][k] = 1.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> pi(k);
  for (std::size_t r = 0; r < k; ++r) pi[r] = a[r][k] / a[r][r];
  return pi;
}

/// Seeded corpus of small random fixtures from every family.
inline std::vector<nlohmann::json> random_corpus(int per_family,
                                                 std::uint64_t base_seed = 1) {
  std::vector<nlohmann::json> out;
  for (int k = 0; k < per_family; ++k) {
    std::uint64_t seed = base_seed + k;
    int n = 2 + static_cast<int>(seed % 3);
    out.push_back(fx::random_cost_sharing(n, 2 + static_cast<int>(seed % 3), seed));
    out.push_back(fx::random_congestion(n, 2 + static_cast<int>(seed % 2), seed,
                                        seed % 2 ? "harmonic" : "decreasing"));
    out.push_back(fx::random_contribution(n, seed));
    out.push_back(fx::random_welfare_sharing(n, seed));
    out.push_back(fx::random_normal_form(n, seed));
  }
  return out;
}

}  // namespace coalsmooth::testing

#endif  // COALSMOOTH_TESTS_SUPPORT_HPP
