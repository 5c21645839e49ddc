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

#ifndef COALSMOOTH_DYNAMICS_HPP
#define COALSMOOTH_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"
#include "coalsmooth/rng.hpp"
#include "coalsmooth/smoothness.hpp"

namespace coalsmooth {

/// Joint strategy of `c` maximizing the members' total utility (minimizing
/// total cost) against the rest of `s`. The current joint strategy wins any
/// tie it is part of; otherwise the lexicographically first maximizer wins.
inline std::vector<int> joint_best_response(
    const Game& game, const Coalition& c, std::span<const int> s,
    std::uint64_t cap = kDefaultProfileCap) {
  check_cap(joint_count(game, c), cap, "joint strategy space");
  auto members = c.members();
  auto total = [&](const StrategyProfile& t) {
    double v = 0.0;
    for (int i : members) v += game.utility_unchecked(i, t);
    return v;
  };
  std::vector<int> best;
  for (int i : members) best.push_back(s[i]);
  StrategyProfile t(s.begin(), s.end());
  double best_value = total(t);
  for_each_joint(game, c, [&](const std::vector<int>& joint) {
    for (std::size_t k = 0; k < joint.size(); ++k) t[members[k]] = joint[k];
    double v = total(t);
    if (game.improves(v, best_value)) {
      best = joint;
      best_value = v;
    }
  });
  return best;
}

/// Probability that the coalition sampler picks size k out of n players.
inline double coalition_size_probability(int n, int k) {
  return (1.0 / k) / harmonic(n);
}

/// Probability that the sampler picks one particular coalition of size k.
inline double coalition_probability(int n, int k) {
  return coalition_size_probability(n, k) / binomial(n, k);
}

/// The rank-th k-subset of {0..n-1} in lexicographic order.
inline std::vector<int> unrank_combination(int n, int k, std::uint64_t rank) {
  std::vector<int> out;
  int x = 0;
  for (int slot = 0; slot < k; ++slot) {
    while (true) {
      auto with_x = static_cast<std::uint64_t>(binomial(n - x - 1, k - slot - 1));
      if (rank < with_x) break;
      rank -= with_x;
      ++x;
    }
    out.push_back(x++);
  }
  return out;
}

/// Size k with probability (1/k)/H_n, then a uniform coalition of that size.
inline Coalition sample_coalition(int n, Rng& rng) {
  double u = rng.uniform01() * harmonic(n);
  int k = n;
  double acc = 0.0;
  for (int j = 1; j <= n; ++j) {
    acc += 1.0 / j;
    if (u < acc) {
      k = j;
      break;
    }
  }
  auto count = static_cast<std::uint64_t>(binomial(n, k));
  return Coalition(unrank_combination(n, k, rng.uniform_below(count)), n);
}

struct StepResult {
  Coalition coalition;
  StrategyProfile profile;
};

inline StepResult coalitional_step(const Game& game, std::span<const int> s,
                                   Rng& rng,
                                   std::uint64_t cap = kDefaultProfileCap) {
  Coalition c = sample_coalition(game.num_players(), rng);
  return {c, apply_deviation(s, c, joint_best_response(game, c, s, cap))};
}

enum class DynamicsMode { kCoalitional, kUnilateral };

inline const char* to_string(DynamicsMode m) {
  return m == DynamicsMode::kCoalitional ? "coalitional" : "unilateral";
}

struct TraceStep {
  int t = 0;
  /// Coalition that moved; a singleton in unilateral mode.
  Coalition coalition;
  StrategyProfile profile;
  double welfare = 0.0;
  std::optional<double> potential;
};

struct DynamicsTrace {
  DynamicsMode mode = DynamicsMode::kCoalitional;
  std::uint64_t seed = 0;
  StrategyProfile initial;
  double initial_welfare = 0.0;
  std::optional<double> initial_potential;
  std::vector<TraceStep> steps;
  /// Mean welfare over steps 1..T; the initial state is not counted.
  double empirical_mean_welfare = 0.0;
};

struct DynamicsOptions {
  std::optional<StrategyProfile> initial;
  std::uint64_t cap = kDefaultProfileCap;
};

namespace detail {

inline StrategyProfile start_profile(const Game& game,
                                     const DynamicsOptions& opts) {
  if (!opts.initial) return StrategyProfile(game.num_players(), 0);
  game.validate_profile(*opts.initial, /*allow_out=*/false);
  return *opts.initial;
}

inline void finish(DynamicsTrace& trace) {
  double sum = 0.0;
  for (const auto& st : trace.steps) sum += st.welfare;
  trace.empirical_mean_welfare =
      trace.steps.empty() ? trace.initial_welfare : sum / trace.steps.size();
}

}  // namespace detail

/// Coalitional best-response dynamics for T steps.
inline DynamicsTrace run_coalitional(const Game& game, int steps,
                                     std::uint64_t seed,
                                     const DynamicsOptions& opts = {}) {
  if (steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one step");
  }
  DynamicsTrace trace;
  trace.mode = DynamicsMode::kCoalitional;
  trace.seed = seed;
  trace.initial = detail::start_profile(game, opts);
  trace.initial_welfare = game.social_welfare_unchecked(trace.initial);
  Rng rng(seed);
  StrategyProfile s = trace.initial;
  trace.steps.reserve(steps);
  for (int t = 1; t <= steps; ++t) {
    StepResult r = coalitional_step(game, s, rng, opts.cap);
    s = std::move(r.profile);
    trace.steps.push_back({t, std::move(r.coalition), s,
                           game.social_welfare_unchecked(s), std::nullopt});
  }
  detail::finish(trace);
  return trace;
}

/// Random-player best-response dynamics: each step a uniformly drawn player
/// switches to a best response (keeping its strategy on ties). Records the
/// potential when the game has one. T = 0 yields only the initial state.
inline DynamicsTrace run_unilateral(const Game& game, int steps,
                                    std::uint64_t seed,
                                    const DynamicsOptions& opts = {}) {
  if (steps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "step count must be >= 0");
  }
  const int n = game.num_players();
  DynamicsTrace trace;
  trace.mode = DynamicsMode::kUnilateral;
  trace.seed = seed;
  trace.initial = detail::start_profile(game, opts);
  trace.initial_welfare = game.social_welfare_unchecked(trace.initial);
  if (game.has_potential()) trace.initial_potential = game.potential(trace.initial);
  Rng rng(seed);
  StrategyProfile s = trace.initial;
  for (int t = 1; t <= steps; ++t) {
    int i = static_cast<int>(rng.uniform_below(n));
    Coalition c({i}, n);
    s[i] = joint_best_response(game, c, s, opts.cap)[0];
    std::optional<double> phi;
    if (game.has_potential()) phi = game.potential(s);
    trace.steps.push_back(
        {t, std::move(c), s, game.social_welfare_unchecked(s), phi});
  }
  detail::finish(trace);
  return trace;
}

/// CSV with `#` header comments carrying mode, seed, generator and the
/// initial profile, then one row per step.
inline void write_trace_csv(std::ostream& out, const DynamicsTrace& trace) {
  bool with_phi = trace.initial_potential.has_value();
  out << "# mode: " << to_string(trace.mode) << '\n'
      << "# seed: " << trace.seed << '\n'
      << "# generator: " << Rng::kName << '\n'
      << "# initial: " << format_profile(trace.initial) << '\n'
      << "t,coalition,profile,welfare" << (with_phi ? ",potential" : "")
      << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& st : trace.steps) {
    out << st.t << ',' << st.coalition.to_string() << ','
        << format_profile(st.profile) << ',' << num(st.welfare);
    if (with_phi) out << ',' << num(st.potential.value_or(0.0));
    out << '\n';
  }
}

struct EmpiricalBound {
  int steps = 0;
  double threshold = 0.0;
  double mean_welfare = 0.0;
  double margin = 0.0;
  bool passed = false;
};

/// Compares a trace's mean welfare with ((T-1)/(2T)) * lambda/(H_n+mu) * OPT.
inline EmpiricalBound empirical_bound_check(const DynamicsTrace& trace,
                                            const SmoothnessCertificate& cert,
                                            double opt, int num_players) {
  if (!cert.verified) {
    throw Error(ErrorCode::kRejectedCertificate,
                "certificate is not verified");
  }
  if (cert.direction != Direction::kUtilityMax) {
    throw Error(ErrorCode::kInvalidArgument,
                "empirical welfare bound applies to utility games");
  }
  EmpiricalBound b;
  b.steps = static_cast<int>(trace.steps.size());
  if (b.steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trace has no steps");
  }
  double T = b.steps;
  b.threshold = (T - 1.0) / (2.0 * T) *
                (cert.lambda / (harmonic(num_players) + cert.mu)) * opt;
  b.mean_welfare = trace.empirical_mean_welfare;
  b.margin = b.mean_welfare - b.threshold;
  b.passed = b.margin >= -kTolerance;
  return b;
}

}  // namespace coalsmooth

#endif  // COALSMOOTH_DYNAMICS_HPP
