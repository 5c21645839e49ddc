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

#ifndef COALSMOOTH_SMOOTHNESS_HPP
#define COALSMOOTH_SMOOTHNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"
#include "coalsmooth/rng.hpp"

namespace coalsmooth {

inline constexpr int kDefaultPermutationCap = 8;

enum class SmoothnessKind { kCoalitional, kUnilateral };

inline const char* to_string(SmoothnessKind k) {
  return k == SmoothnessKind::kCoalitional ? "coalitional" : "unilateral";
}

struct SmoothnessOptions {
  std::uint64_t profile_cap = kDefaultProfileCap;
  /// Exact ordering optimization up to this many players.
  int permutation_cap = kDefaultPermutationCap;
  /// Above the cap, sample orderings instead of failing.
  bool sample = false;
  int samples = 2000;
  std::uint64_t seed = 0;
};

/// A profile (and, for the coalitional kind, an ordering) at which the
/// smoothness inequality fails.
struct SmoothnessWitness {
  StrategyProfile profile;
  std::optional<PlayerOrdering> ordering;
  /// Deviation sum and the right-hand side it was compared against.
  double lhs = 0.0;
  double rhs = 0.0;
};

struct FrontierPoint {
  double lambda = 0.0;
  double mu = 0.0;
};

struct SmoothnessCertificate {
  SmoothnessKind kind = SmoothnessKind::kCoalitional;
  Direction direction = Direction::kUtilityMax;
  StrategyProfile s_star;
  double lambda = 0.0;
  double mu = 0.0;
  bool verified = false;
  /// False when orderings were sampled rather than exhausted.
  bool exact = true;
  std::optional<SmoothnessWitness> witness;
  std::vector<FrontierPoint> frontier;
  /// lambda/(1+mu) for utility games, lambda/(1-mu) for cost games.
  double best_ratio = 0.0;
  /// Set when the utility envelope keeps improving as mu grows: the ratio
  /// approaches this value but no finite mu attains it.
  std::optional<double> ratio_supremum;
};

/// SPoA bound implied by (lambda, mu).
inline double implied_ratio(Direction dir, double lambda, double mu) {
  if (dir == Direction::kUtilityMax) return lambda / (1.0 + mu);
  if (mu >= 1.0) return std::numeric_limits<double>::infinity();
  return lambda / (1.0 - mu);
}

// Deviation sums --------------------------------------------------------------

/// Sum over players of the payoff after the suffix of the ordering starting
/// at that player switches to s_star.
inline double deviation_sum(const Game& game, std::span<const int> s_star,
                            std::span<const int> s,
                            const PlayerOrdering& order) {
  game.validate_profile(s, /*allow_out=*/false);
  game.validate_profile(s_star, /*allow_out=*/false);
  double total = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    total += game.utility_unchecked(
        i, suffix_deviation_profile(s, s_star, order, i));
  }
  return total;
}

/// Sum over players of the payoff after a unilateral switch to s_star.
inline double unilateral_deviation_sum(const Game& game,
                                       std::span<const int> s_star,
                                       std::span<const int> s) {
  StrategyProfile t(s.begin(), s.end());
  double total = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    t[i] = s_star[i];
    total += game.utility_unchecked(i, t);
    t[i] = s[i];
  }
  return total;
}

struct WorstOrdering {
  double value = 0.0;
  PlayerOrdering ordering = PlayerOrdering::identity(1);
};

/// The ordering that makes the deviation sum tightest: the minimum for
/// utility games, the maximum for cost games.
///
/// The player ranked first within a suffix set T faces (s*_T, s_-T) no matter
/// how T is ordered internally, so g(T) = best_i [u_i(s*_T, s_-T) + g(T\i)]
/// over subsets gives the optimum over all n! orderings in O(2^n n).
inline WorstOrdering worst_ordering_exact(const Game& game,
                                          std::span<const int> s_star,
                                          std::span<const int> s) {
  const int n = game.num_players();
  if (n > 30) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                "subset optimization supports at most 30 players");
  }
  const bool minimize = game.maximizes();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<double> g(std::size_t{full} + 1, 0.0);
  std::vector<signed char> first(std::size_t{full} + 1, -1);
  StrategyProfile t(n);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < n; ++j) t[j] = (mask >> j & 1) ? s_star[j] : s[j];
    bool have = false;
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      double v = game.utility_unchecked(i, t) + g[mask & ~(1u << i)];
      if (!have || (minimize ? v < g[mask] : v > g[mask])) {
        g[mask] = v;
        first[mask] = static_cast<signed char>(i);
        have = true;
      }
    }
  }
  std::vector<int> seq;
  for (std::uint32_t mask = full; mask != 0; mask &= ~(1u << first[mask])) {
    seq.push_back(first[mask]);
  }
  return {g[full], PlayerOrdering::from_sequence(seq)};
}

/// Same optimization over `samples` uniformly drawn orderings.
inline WorstOrdering worst_ordering_sampled(const Game& game,
                                            std::span<const int> s_star,
                                            std::span<const int> s,
                                            int samples, Rng& rng) {
  const int n = game.num_players();
  std::vector<int> seq(n);
  std::optional<WorstOrdering> best;
  for (int k = 0; k < std::max(samples, 1); ++k) {
    std::iota(seq.begin(), seq.end(), 0);
    rng.shuffle(seq);
    PlayerOrdering order = PlayerOrdering::from_sequence(seq);
    double v = deviation_sum(game, s_star, s, order);
    if (!best || (game.maximizes() ? v < best->value : v > best->value)) {
      best = WorstOrdering{v, order};
    }
  }
  return *best;
}

namespace detail {

/// Left-hand side of the smoothness inequality for every profile, computed
/// once and shared by checking and fitting.
struct ConstraintTable {
  std::vector<StrategyProfile> profiles;
  std::vector<double> lhs;
  std::vector<std::optional<PlayerOrdering>> orderings;
  std::vector<double> welfare;
  double anchor_value = 0.0;
  bool exact = true;
};

inline ConstraintTable build_constraints(const Game& game, SmoothnessKind kind,
                                         std::span<const int> s_star,
                                         const SmoothnessOptions& opts) {
  game.validate_profile(s_star, /*allow_out=*/false);
  ConstraintTable t;
  bool sampling = false;
  if (kind == SmoothnessKind::kCoalitional &&
      game.num_players() > opts.permutation_cap) {
    if (!opts.sample) {
      throw Error(ErrorCode::kStateSpaceTooLarge,
                  std::to_string(game.num_players()) +
                      " players exceed the permutation cap of " +
                      std::to_string(opts.permutation_cap) +
                      "; request sampling explicitly");
    }
    sampling = true;
    t.exact = false;
  }
  Rng rng(opts.seed);
  t.anchor_value = game.social_welfare_unchecked(s_star);
  for_each_profile(
      game,
      [&](const StrategyProfile& s) {
        t.profiles.push_back(s);
        t.welfare.push_back(game.social_welfare_unchecked(s));
        if (kind == SmoothnessKind::kUnilateral) {
          t.lhs.push_back(unilateral_deviation_sum(game, s_star, s));
          t.orderings.emplace_back();
          return;
        }
        WorstOrdering w =
            sampling
                ? worst_ordering_sampled(game, s_star, s, opts.samples, rng)
                : worst_ordering_exact(game, s_star, s);
        t.lhs.push_back(w.value);
        t.orderings.emplace_back(w.ordering);
      },
      opts.profile_cap);
  return t;
}

/// Reference value on the right-hand side: OPT for utility games, SC(s*)
/// for cost games.
inline double reference_value(const Game& game, const ConstraintTable& t,
                              std::uint64_t cap) {
  return game.maximizes() ? optimum(game, cap).value : t.anchor_value;
}

inline SmoothnessCertificate check_table(const Game& game, SmoothnessKind kind,
                                         std::span<const int> s_star,
                                         const ConstraintTable& t, double ref,
                                         double lambda, double mu) {
  if (!(lambda >= 0.0) || !(mu >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda and mu must be >= 0");
  }
  SmoothnessCertificate cert;
  cert.kind = kind;
  cert.direction = game.direction();
  cert.s_star.assign(s_star.begin(), s_star.end());
  cert.lambda = lambda;
  cert.mu = mu;
  cert.exact = t.exact;
  cert.frontier = {{lambda, mu}};
  cert.best_ratio = implied_ratio(game.direction(), lambda, mu);
  cert.verified = true;
  for (std::size_t k = 0; k < t.profiles.size(); ++k) {
    bool ok;
    double rhs;
    if (game.maximizes()) {
      rhs = lambda * ref - mu * t.welfare[k];
      ok = t.lhs[k] >= rhs - kTolerance;
    } else {
      rhs = lambda * ref + mu * t.welfare[k];
      ok = t.lhs[k] <= rhs + kTolerance;
    }
    if (!ok) {
      cert.verified = false;
      cert.witness =
          SmoothnessWitness{t.profiles[k], t.orderings[k], t.lhs[k], rhs};
      break;
    }
  }
  return cert;
}

}  // namespace detail

/// Checks the coalitional smoothness inequality for every profile and every
/// ordering (the tightest ordering per profile stands in for all of them).
inline SmoothnessCertificate check_coalitional_smoothness(
    const Game& game, std::span<const int> s_star, double lambda, double mu,
    const SmoothnessOptions& opts = {}) {
  auto t = detail::build_constraints(game, SmoothnessKind::kCoalitional,
                                     s_star, opts);
  return detail::check_table(game, SmoothnessKind::kCoalitional, s_star, t,
                             detail::reference_value(game, t, opts.profile_cap),
                             lambda, mu);
}

inline SmoothnessCertificate check_unilateral_smoothness(
    const Game& game, std::span<const int> s_star, double lambda, double mu,
    const SmoothnessOptions& opts = {}) {
  auto t = detail::build_constraints(game, SmoothnessKind::kUnilateral, s_star,
                                     opts);
  return detail::check_table(game, SmoothnessKind::kUnilateral, s_star, t,
                             detail::reference_value(game, t, opts.profile_cap),
                             lambda, mu);
}

// Envelope fitting -------------------------------------------------------------

/// One linear constraint of the fit: lambda * ref compared with
/// lhs -/+ mu * welfare.
struct SmoothnessConstraint {
  double lhs = 0.0;
  double welfare = 0.0;
};

struct EnvelopeFit {
  std::vector<FrontierPoint> frontier;
  FrontierPoint best;
  double best_ratio = 0.0;
  std::optional<double> ratio_supremum;
};

namespace detail {

struct Line {
  double a = 0.0;  // value at mu = 0
  double b = 0.0;  // slope in mu
  double at(double x) const { return a + b * x; }
};

inline double cross_at(const Line& p, const Line& q) {
  return (q.a - p.a) / (p.b - q.b);
}

struct Piece {
  double from = 0.0;
  Line line;
};

/// Lower envelope of min_k line_k(x) on x >= 0, as pieces ordered by x.
inline std::vector<Piece> lower_envelope(std::vector<Line> lines) {
  std::sort(lines.begin(), lines.end(), [](const Line& p, const Line& q) {
    return p.b != q.b ? p.b > q.b : p.a < q.a;
  });
  std::vector<Line> hull;
  for (const Line& l : lines) {
    // Slopes equal up to rounding: keep the lower intercept, otherwise the
    // two lines cross at a spurious breakpoint near 1e14.
    if (!hull.empty() &&
        hull.back().b - l.b <= 1e-12 * std::max(1.0, std::abs(l.b))) {
      if (l.a >= hull.back().a) continue;
      hull.pop_back();
    }
    while (hull.size() >= 2 &&
           cross_at(hull[hull.size() - 2], l) <=
               cross_at(hull[hull.size() - 2], hull.back()) + 1e-12) {
      hull.pop_back();
    }
    hull.push_back(l);
  }
  // Drop segments that end before x = 0.
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    double end = k + 1 < hull.size() ? cross_at(hull[k], hull[k + 1])
                                     : std::numeric_limits<double>::infinity();
    if (end <= 0.0) continue;
    double from = k == 0 ? 0.0 : std::max(0.0, cross_at(hull[k - 1], hull[k]));
    if (pieces.empty()) from = 0.0;
    pieces.push_back({from, hull[k]});
  }
  return pieces;
}

}  // namespace detail

/// Exact best (lambda, mu) for a set of constraints against reference value
/// `ref`.
///
/// Utility games: lambda(mu) = min_k (lhs_k + mu * welfare_k) / ref is
/// concave and piecewise linear, and lambda/(1+mu) is monotone on each piece,
/// so the maximum sits at mu = 0 or at a breakpoint. Cost games: lambda(mu)
/// = max(0, max_k (lhs_k - mu * welfare_k) / ref) on mu in [0, 1), and
/// lambda/(1-mu) is minimized at mu = 0 or at a breakpoint.
inline EnvelopeFit fit_envelope(Direction dir,
                                std::span<const SmoothnessConstraint> cons,
                                double ref) {
  if (!(ref > kTolerance)) {
    throw Error(ErrorCode::kDegenerateGame,
                "reference welfare is zero; smoothness ratio is undefined");
  }
  EnvelopeFit fit;
  std::vector<detail::Line> lines;
  if (dir == Direction::kUtilityMax) {
    for (const auto& c : cons) lines.push_back({c.lhs / ref, c.welfare / ref});
  } else {
    // Upper envelope as the negated lower envelope, with the lambda >= 0 floor.
    lines.push_back({0.0, 0.0});
    for (const auto& c : cons) {
      lines.push_back({-c.lhs / ref, c.welfare / ref});
    }
  }
  if (lines.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no smoothness constraints");
  }
  auto pieces = detail::lower_envelope(std::move(lines));
  bool have = false;
  for (const auto& p : pieces) {
    double mu = p.from;
    // Near mu = 1 the ratio divides rounding noise by 1 - mu.
    if (dir == Direction::kCostMin && mu >= 1.0 - 1e-6) break;
    double lambda = p.line.at(mu);
    if (dir == Direction::kCostMin) lambda = -lambda;
    lambda = std::max(lambda, 0.0);
    fit.frontier.push_back({lambda, mu});
    double r = implied_ratio(dir, lambda, mu);
    bool better = dir == Direction::kUtilityMax ? r > fit.best_ratio + 1e-15
                                                : r < fit.best_ratio - 1e-15;
    if (!have || better) {
      fit.best = {lambda, mu};
      fit.best_ratio = r;
      have = true;
    }
  }
  if (dir == Direction::kUtilityMax) {
    const auto& tail = pieces.back().line;
    if (tail.b > fit.best_ratio + kTolerance) fit.ratio_supremum = tail.b;
  }
  return fit;
}

namespace detail {

inline SmoothnessCertificate fit_with_anchor(const Game& game,
                                             SmoothnessKind kind,
                                             std::span<const int> s_star,
                                             const SmoothnessOptions& opts) {
  auto t = build_constraints(game, kind, s_star, opts);
  double ref = reference_value(game, t, opts.profile_cap);
  std::vector<SmoothnessConstraint> cons;
  for (std::size_t k = 0; k < t.lhs.size(); ++k) {
    cons.push_back({t.lhs[k], t.welfare[k]});
  }
  EnvelopeFit fit = fit_envelope(game.direction(), cons, ref);
  // Re-run the checker on the chosen point so `verified` is earned.
  SmoothnessCertificate cert =
      check_table(game, kind, s_star, t, ref, fit.best.lambda, fit.best.mu);
  cert.frontier = std::move(fit.frontier);
  cert.best_ratio = fit.best_ratio;
  cert.ratio_supremum = fit.ratio_supremum;
  return cert;
}

/// SPoA bound relative to OPT, comparable across anchors.
inline double bound_vs_opt(const Game& game, const SmoothnessCertificate& c,
                           double opt) {
  if (game.maximizes()) return c.best_ratio;
  return c.best_ratio * game.social_welfare_unchecked(c.s_star) / opt;
}

inline SmoothnessCertificate fit_anchored(const Game& game, SmoothnessKind kind,
                                          std::optional<StrategyProfile> s_star,
                                          const SmoothnessOptions& opts) {
  StrategyProfile anchor =
      s_star ? *s_star : optimum(game, opts.profile_cap).profile;
  return fit_with_anchor(game, kind, anchor, opts);
}

inline SmoothnessCertificate search_anchor(const Game& game,
                                           SmoothnessKind kind,
                                           const SmoothnessOptions& opts) {
  std::uint64_t p = profile_count(game.strategy_counts());
  check_cap(p > opts.profile_cap ? p : p * p, opts.profile_cap,
            "anchor search (profiles squared)");
  double opt = optimum(game, opts.profile_cap).value;
  std::optional<SmoothnessCertificate> best;
  double best_bound = 0.0;
  for_each_profile(
      game,
      [&](const StrategyProfile& a) {
        if (!game.maximizes() &&
            game.social_welfare_unchecked(a) <= kTolerance) {
          return;
        }
        SmoothnessCertificate c = fit_with_anchor(game, kind, a, opts);
        double b = bound_vs_opt(game, c, opt);
        bool better = game.maximizes() ? b > best_bound + 1e-15
                                       : b < best_bound - 1e-15;
        if (!best || better) {
          best = std::move(c);
          best_bound = b;
        }
      },
      opts.profile_cap);
  if (!best) {
    throw Error(ErrorCode::kDegenerateGame, "every anchor has zero cost");
  }
  return *best;
}

}  // namespace detail

/// Best certificate of either kind for anchor s_star (default: the optimum).
inline SmoothnessCertificate fit_smoothness(
    const Game& game, SmoothnessKind kind,
    std::optional<StrategyProfile> s_star = std::nullopt,
    const SmoothnessOptions& opts = {}) {
  return detail::fit_anchored(game, kind, std::move(s_star), opts);
}

inline SmoothnessCertificate fit_coalitional_smoothness(
    const Game& game, std::optional<StrategyProfile> s_star = std::nullopt,
    const SmoothnessOptions& opts = {}) {
  return detail::fit_anchored(game, SmoothnessKind::kCoalitional,
                              std::move(s_star), opts);
}

inline SmoothnessCertificate fit_unilateral_smoothness(
    const Game& game, std::optional<StrategyProfile> s_star = std::nullopt,
    const SmoothnessOptions& opts = {}) {
  return detail::fit_anchored(game, SmoothnessKind::kUnilateral,
                              std::move(s_star), opts);
}

/// Tries every profile as the anchor and keeps the best SPoA bound.
/// Quadratic in the number of profiles.
inline SmoothnessCertificate search_smoothness_anchor(
    const Game& game, SmoothnessKind kind, const SmoothnessOptions& opts = {}) {
  return detail::search_anchor(game, kind, opts);
}

}  // namespace coalsmooth

#endif  // COALSMOOTH_SMOOTHNESS_HPP
