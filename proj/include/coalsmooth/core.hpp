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

#ifndef COALSMOOTH_CORE_HPP
#define COALSMOOTH_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coalsmooth/error.hpp"

namespace coalsmooth {

/// Absolute tolerance for every comparison between welfare/utility values.
inline constexpr double kTolerance = 1e-9;

inline constexpr std::uint64_t kDefaultProfileCap = 10'000'000;

enum class Direction { kUtilityMax, kCostMin };

/// One strategy index per player. An index equal to the player's strategy
/// count denotes the virtual out strategy when the game has one.
using StrategyProfile = std::vector<int>;

inline std::string format_profile(std::span<const int> s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += '-';
    out += std::to_string(s[i]);
  }
  return out;
}

inline StrategyProfile parse_profile(const std::string& text) {
  StrategyProfile s;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dash = text.find('-', pos);
    if (dash == std::string::npos) dash = text.size();
    std::string token = text.substr(pos, dash - pos);
    if (token.empty() ||
        token.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::kInvalidProfile,
                  "cannot parse profile '" + text + "'");
    }
    s.push_back(std::stoi(token));
    pos = dash + 1;
  }
  return s;
}

inline double harmonic(int n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "harmonic number needs n >= 1, got " + std::to_string(n));
  }
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

/// Nonempty set of players, kept in ascending order.
class Coalition {
 public:
  Coalition(std::vector<int> members, int num_players)
      : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (members_.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "coalition must be nonempty");
    }
    if (std::adjacent_find(members_.begin(), members_.end()) !=
        members_.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "coalition has duplicate members");
    }
    if (members_.front() < 0 || members_.back() >= num_players) {
      throw Error(ErrorCode::kInvalidPlayer,
                  "coalition member out of range for " +
                      std::to_string(num_players) + " players");
    }
  }

  static Coalition from_mask(std::uint64_t mask, int num_players) {
    std::vector<int> members;
    for (int i = 0; i < num_players; ++i) {
      if (mask & (std::uint64_t{1} << i)) members.push_back(i);
    }
    return Coalition(std::move(members), num_players);
  }

  static Coalition grand(int num_players) {
    std::vector<int> members(num_players);
    std::iota(members.begin(), members.end(), 0);
    return Coalition(std::move(members), num_players);
  }

  std::span<const int> members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int player) const {
    return std::binary_search(members_.begin(), members_.end(), player);
  }
  std::string to_string() const { return format_profile(members_); }

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::vector<int> members_;
};

/// All nonempty coalitions, by size ascending and lexicographic within a size.
inline std::vector<Coalition> all_coalitions(int num_players) {
  if (num_players < 1 || num_players > 30) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                "coalition enumeration supports 1..30 players, got " +
                    std::to_string(num_players));
  }
  std::vector<Coalition> out;
  for (int k = 1; k <= num_players; ++k) {
    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      out.emplace_back(comb, num_players);
      int j = k - 1;
      while (j >= 0 && comb[j] == num_players - k + j) --j;
      if (j < 0) break;
      ++comb[j];
      for (int m = j + 1; m < k; ++m) comb[m] = comb[m - 1] + 1;
    }
  }
  return out;
}

/// A permutation of the players stored as ranks: rank(i) is the 1-based
/// position of player i.
class PlayerOrdering {
 public:
  static PlayerOrdering identity(int num_players) {
    std::vector<int> ranks(num_players);
    std::iota(ranks.begin(), ranks.end(), 1);
    return PlayerOrdering(std::move(ranks));
  }

  static PlayerOrdering from_ranks(std::vector<int> ranks) {
    return PlayerOrdering(std::move(ranks));
  }

  /// sequence[k] is the player placed at rank k + 1.
  static PlayerOrdering from_sequence(std::span<const int> sequence) {
    std::vector<int> ranks(sequence.size(), 0);
    for (std::size_t k = 0; k < sequence.size(); ++k) {
      int p = sequence[k];
      if (p < 0 || p >= static_cast<int>(sequence.size()) || ranks[p] != 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "player sequence is not a permutation");
      }
      ranks[p] = static_cast<int>(k) + 1;
    }
    return PlayerOrdering(std::move(ranks));
  }

  int size() const { return static_cast<int>(ranks_.size()); }
  int rank(int player) const { return ranks_.at(player); }
  const std::vector<int>& ranks() const { return ranks_; }

  std::vector<int> sequence() const {
    std::vector<int> seq(ranks_.size());
    for (std::size_t i = 0; i < ranks_.size(); ++i) seq[ranks_[i] - 1] = i;
    return seq;
  }

  friend bool operator==(const PlayerOrdering&,
                         const PlayerOrdering&) = default;

 private:
  explicit PlayerOrdering(std::vector<int> ranks) : ranks_(std::move(ranks)) {
    std::vector<int> sorted = ranks_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (sorted[k] != static_cast<int>(k) + 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "ranks must be a permutation of 1..n");
      }
    }
  }

  std::vector<int> ranks_;
};

/// Congestion-form structure of a game: every live strategy is a set of
/// resources and the potential is a sum of per-occupancy increments. This is
/// what lets the potential be evaluated on multisets of strategies.
struct OccupancyModel {
  int num_resources = 0;
  /// [player][strategy] -> resource indices used.
  std::vector<std::vector<std::vector<int>>> strategy_resources;
  /// increment(r, k) for k >= 1 is the potential gained by the k-th user of r.
  std::function<double(int, int)> increment;
  /// Largest occupancy on which increment is defined, per resource.
  std::vector<int> max_occupancy;

  double potential_of_counts(std::span<const int> counts) const {
    double phi = 0.0;
    for (int r = 0; r < num_resources; ++r) {
      for (int k = 1; k <= counts[r]; ++k) phi += increment(r, k);
    }
    return phi;
  }
};

/// A finite strategic game. Utilities (or costs, for kCostMin) come from a
/// pure oracle; the game optionally carries out strategies, a potential and
/// an occupancy model.
class Game {
 public:
  using UtilityFn = std::function<double(int, std::span<const int>)>;
  using PotentialFn = std::function<double(std::span<const int>)>;
  using StrategyNames = std::vector<std::vector<std::string>>;

  Game(std::vector<int> strategy_counts, Direction direction,
       UtilityFn utility)
      : strategy_counts_(std::move(strategy_counts)),
        direction_(direction),
        utility_(std::move(utility)) {
    if (strategy_counts_.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "game needs at least 1 player");
    }
    for (int c : strategy_counts_) {
      if (c < 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "every player needs at least one strategy");
      }
    }
    if (!utility_) {
      throw Error(ErrorCode::kInvalidArgument, "utility oracle is empty");
    }
  }

  int num_players() const { return static_cast<int>(strategy_counts_.size()); }
  int num_strategies(int player) const {
    check_player(player);
    return strategy_counts_[player];
  }
  const std::vector<int>& strategy_counts() const { return strategy_counts_; }
  Direction direction() const { return direction_; }
  bool maximizes() const { return direction_ == Direction::kUtilityMax; }

  /// True when `candidate` is strictly better than `incumbent` for the
  /// game's objective, beyond tolerance.
  bool improves(double candidate, double incumbent) const {
    return maximizes() ? candidate > incumbent + kTolerance
                       : candidate < incumbent - kTolerance;
  }

  // Out strategies -----------------------------------------------------------

  Game& set_out_strategies(std::vector<int> out) {
    if (static_cast<int>(out.size()) != num_players()) {
      throw Error(ErrorCode::kArityMismatch,
                  "out strategy list must have one entry per player");
    }
    for (int i = 0; i < num_players(); ++i) {
      if (out[i] < 0 || out[i] > strategy_counts_[i]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "out strategy of player " + std::to_string(i) +
                        " out of range");
      }
    }
    out_ = std::move(out);
    return *this;
  }
  bool has_out_strategies() const { return out_.has_value(); }
  int out_strategy(int player) const {
    require_out();
    check_player(player);
    return (*out_)[player];
  }
  bool out_is_virtual(int player) const {
    return out_strategy(player) == strategy_counts_[player];
  }
  StrategyProfile out_profile() const {
    require_out();
    return *out_;
  }
  void require_out() const {
    if (!out_) {
      throw Error(ErrorCode::kMissingOutStrategy,
                  "game does not define out strategies");
    }
  }

  // Potential ----------------------------------------------------------------

  Game& set_potential(PotentialFn potential) {
    potential_ = std::move(potential);
    return *this;
  }
  bool has_potential() const { return static_cast<bool>(potential_); }
  double potential(std::span<const int> s) const {
    if (!potential_) {
      throw Error(ErrorCode::kMissingPotential,
                  "game does not define a potential");
    }
    validate_profile(s, /*allow_out=*/true);
    return potential_(s);
  }

  Game& set_occupancy(OccupancyModel model) {
    occupancy_ = std::make_shared<const OccupancyModel>(std::move(model));
    return *this;
  }
  const OccupancyModel* occupancy() const { return occupancy_.get(); }

  Game& set_strategy_names(StrategyNames names) {
    names_ = std::move(names);
    return *this;
  }
  std::string strategy_name(int player, int strategy) const {
    if (out_ && strategy == (*out_)[player] &&
        strategy == strategy_counts_[player]) {
      return "out";
    }
    if (player < static_cast<int>(names_.size()) && strategy >= 0 &&
        strategy < static_cast<int>(names_[player].size())) {
      return names_[player][strategy];
    }
    return std::to_string(strategy);
  }

  // Evaluation ---------------------------------------------------------------

  void validate_profile(std::span<const int> s, bool allow_out) const {
    if (static_cast<int>(s.size()) != num_players()) {
      throw Error(ErrorCode::kInvalidProfile,
                  "profile has " + std::to_string(s.size()) +
                      " entries, game has " + std::to_string(num_players()) +
                      " players");
    }
    for (int i = 0; i < num_players(); ++i) {
      bool live = s[i] >= 0 && s[i] < strategy_counts_[i];
      bool out = allow_out && out_ && s[i] == (*out_)[i];
      if (!live && !out) {
        throw Error(ErrorCode::kInvalidProfile,
                    "strategy " + std::to_string(s[i]) + " invalid for player " +
                        std::to_string(i));
      }
    }
  }

  double utility(int player, std::span<const int> s) const {
    check_player(player);
    validate_profile(s, /*allow_out=*/true);
    return utility_unchecked(player, s);
  }

  /// Utility without profile validation, for enumeration loops that build
  /// profiles themselves.
  double utility_unchecked(int player, std::span<const int> s) const {
    if (out_ && s[player] == (*out_)[player]) return 0.0;
    double u = utility_(player, s);
    if (!std::isfinite(u) || u < -kTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "utility oracle returned " + std::to_string(u) +
                      " for player " + std::to_string(player) + " at " +
                      format_profile(s));
    }
    return u;
  }

  double social_welfare(std::span<const int> s) const {
    validate_profile(s, /*allow_out=*/true);
    return social_welfare_unchecked(s);
  }

  double social_welfare_unchecked(std::span<const int> s) const {
    double total = 0.0;
    for (int i = 0; i < num_players(); ++i) total += utility_unchecked(i, s);
    return total;
  }

 private:
  void check_player(int player) const {
    if (player < 0 || player >= num_players()) {
      throw Error(ErrorCode::kInvalidPlayer,
                  "player " + std::to_string(player) + " out of range");
    }
  }

  std::vector<int> strategy_counts_;
  Direction direction_;
  UtilityFn utility_;
  std::optional<std::vector<int>> out_;
  PotentialFn potential_;
  std::shared_ptr<const OccupancyModel> occupancy_;
  StrategyNames names_;
};

// Profile construction --------------------------------------------------------

inline StrategyProfile apply_deviation(std::span<const int> s,
                                       const Coalition& coalition,
                                       std::span<const int> joint) {
  if (joint.size() != coalition.members().size()) {
    throw Error(ErrorCode::kArityMismatch,
                "joint deviation has " + std::to_string(joint.size()) +
                    " entries for a coalition of " +
                    std::to_string(coalition.size()));
  }
  if (coalition.members().back() >= static_cast<int>(s.size())) {
    throw Error(ErrorCode::kInvalidPlayer, "coalition exceeds profile size");
  }
  StrategyProfile out(s.begin(), s.end());
  for (std::size_t k = 0; k < joint.size(); ++k) {
    out[coalition.members()[k]] = joint[k];
  }
  return out;
}

/// Every player ranked at or after `player` switches to s_star; everybody
/// else keeps s.
inline StrategyProfile suffix_deviation_profile(std::span<const int> s,
                                                std::span<const int> s_star,
                                                const PlayerOrdering& order,
                                                int player) {
  if (s.size() != s_star.size() ||
      static_cast<int>(s.size()) != order.size()) {
    throw Error(ErrorCode::kArityMismatch,
                "profile, anchor and ordering sizes differ");
  }
  if (player < 0 || player >= order.size()) {
    throw Error(ErrorCode::kInvalidPlayer,
                "player " + std::to_string(player) + " out of range");
  }
  StrategyProfile out(s.begin(), s.end());
  int threshold = order.rank(player);
  for (int j = 0; j < order.size(); ++j) {
    if (order.rank(j) >= threshold) out[j] = s_star[j];
  }
  return out;
}

// Enumeration ------------------------------------------------------------------

/// Number of live profiles, saturating at uint64 max.
inline std::uint64_t profile_count(std::span<const int> counts) {
  std::uint64_t total = 1;
  for (int c : counts) {
    if (total > std::numeric_limits<std::uint64_t>::max() / c) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= static_cast<std::uint64_t>(c);
  }
  return total;
}

inline void check_cap(std::uint64_t size, std::uint64_t cap,
                      const std::string& what) {
  if (size > cap) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                what + " has " + std::to_string(size) +
                    " elements, cap is " + std::to_string(cap));
  }
}

/// Advances `s` to the next profile in lexicographic order (player 0
/// slowest). Returns false after the last profile.
inline bool next_profile(std::span<const int> counts, std::span<int> s) {
  for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
    if (++s[i] < counts[i]) return true;
    s[i] = 0;
  }
  return false;
}

/// Mixed-radix index of a live profile in enumeration order.
inline std::uint64_t profile_index(std::span<const int> counts,
                                   std::span<const int> s) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    idx = idx * static_cast<std::uint64_t>(counts[i]) + s[i];
  }
  return idx;
}

template <typename Fn>
void for_each_profile(const Game& game, Fn&& fn,
                      std::uint64_t cap = kDefaultProfileCap) {
  check_cap(profile_count(game.strategy_counts()), cap, "profile space");
  StrategyProfile s(game.num_players(), 0);
  do {
    fn(std::as_const(s));
  } while (next_profile(game.strategy_counts(), s));
}

inline std::vector<StrategyProfile> enumerate_profiles(
    const Game& game, std::uint64_t cap = kDefaultProfileCap) {
  std::vector<StrategyProfile> out;
  out.reserve(profile_count(game.strategy_counts()) <= cap
                  ? profile_count(game.strategy_counts())
                  : 0);
  for_each_profile(
      game, [&](const StrategyProfile& s) { out.push_back(s); }, cap);
  return out;
}

/// Number of joint strategies of a coalition, saturating.
inline std::uint64_t joint_count(const Game& game, const Coalition& c) {
  std::vector<int> counts;
  for (int i : c.members()) counts.push_back(game.num_strategies(i));
  return profile_count(counts);
}

/// Calls fn(joint) for every live joint strategy of `c`, lexicographic.
template <typename Fn>
void for_each_joint(const Game& game, const Coalition& c, Fn&& fn) {
  std::vector<int> counts;
  for (int i : c.members()) counts.push_back(game.num_strategies(i));
  std::vector<int> joint(counts.size(), 0);
  do {
    fn(std::as_const(joint));
  } while (next_profile(counts, joint));
}

struct Optimum {
  StrategyProfile profile;
  double value = 0.0;
};

/// Welfare-maximizing (cost-minimizing) live profile, lexicographic-first on
/// ties.
inline Optimum optimum(const Game& game,
                       std::uint64_t cap = kDefaultProfileCap) {
  Optimum best;
  bool first = true;
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        double w = game.social_welfare_unchecked(s);
        if (first || game.improves(w, best.value)) {
          best.profile = s;
          best.value = w;
          first = false;
        }
      },
      cap);
  return best;
}

}  // namespace coalsmooth

#endif  // COALSMOOTH_CORE_HPP
