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

#ifndef COALSMOOTH_CHAIN_HPP
#define COALSMOOTH_CHAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "coalsmooth/core.hpp"
#include "coalsmooth/dynamics.hpp"
#include "coalsmooth/smoothness.hpp"

namespace coalsmooth {

inline constexpr std::uint64_t kDefaultChainCap = 20'000;
/// Largest recurrent class solved with a dense linear system.
inline constexpr std::size_t kDenseStationaryLimit = 2'000;

struct Sink {
  /// Indices into ChainAnalysis::states, ascending.
  std::vector<int> states;
  /// Stationary probability of each entry of `states`.
  std::vector<double> stationary;
  double expected_welfare = 0.0;
  /// max |pi P - pi| restricted to the class.
  double residual = 0.0;
};

/// Markov chain of coalitional best-response dynamics over all live
/// profiles.
struct ChainAnalysis {
  Direction direction = Direction::kUtilityMax;
  int num_players = 0;
  std::vector<StrategyProfile> states;
  std::vector<double> welfare;
  /// Sparse rows: (destination, probability), destinations ascending.
  std::vector<std::vector<std::pair<int, double>>> transitions;
  /// Expected total payoff of the moving coalition after one step.
  std::vector<double> coalition_value;
  std::vector<Sink> sinks;

  double probability(int from, int to) const {
    for (const auto& [j, p] : transitions.at(from)) {
      if (j == to) return p;
    }
    return 0.0;
  }

  int state_index(std::span<const int> s) const {
    auto it = std::find_if(states.begin(), states.end(), [&](const auto& t) {
      return std::equal(t.begin(), t.end(), s.begin(), s.end());
    });
    if (it == states.end()) {
      throw Error(ErrorCode::kInvalidProfile,
                  "profile " + format_profile(s) + " is not a chain state");
    }
    return static_cast<int>(it - states.begin());
  }
};

/// P[s -> s'] = sum over coalitions C whose best response moves s to s' of
/// (1/H_n) (1/|C|) / C(n, |C|).
inline ChainAnalysis build_chain(const Game& game,
                                 std::uint64_t cap = kDefaultChainCap) {
  ChainAnalysis chain;
  chain.direction = game.direction();
  chain.num_players = game.num_players();
  const int n = game.num_players();
  chain.states = enumerate_profiles(game, cap);
  const auto& counts = game.strategy_counts();
  auto coalitions = all_coalitions(n);
  for (const auto& s : chain.states) {
    chain.welfare.push_back(game.social_welfare_unchecked(s));
  }
  for (const auto& s : chain.states) {
    std::map<int, double> row;
    double coalition_value = 0.0;
    for (const auto& c : coalitions) {
      double p = coalition_probability(n, c.size());
      StrategyProfile next =
          apply_deviation(s, c, joint_best_response(game, c, s));
      row[static_cast<int>(profile_index(counts, next))] += p;
      for (int i : c.members()) {
        coalition_value += p * game.utility_unchecked(i, next);
      }
    }
    chain.transitions.emplace_back(row.begin(), row.end());
    chain.coalition_value.push_back(coalition_value);
  }
  return chain;
}

namespace detail {

/// Terminal strongly connected components of the positive-probability
/// digraph, found with an iterative Tarjan search.
inline std::vector<std::vector<int>> terminal_components(
    const ChainAnalysis& chain) {
  const int m = static_cast<int>(chain.states.size());
  std::vector<int> index(m, -1), low(m, 0), comp(m, -1);
  std::vector<bool> on_stack(m, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;
  // Frames: (node, next edge position).
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < m; ++root) {
    if (index[root] >= 0) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& edges = chain.transitions[v];
      if (pos < edges.size()) {
        int w = edges[pos++].first;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      int done = v;
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<int> members;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = static_cast<int>(components.size());
          members.push_back(w);
        } while (w != done);
        components.push_back(std::move(members));
      }
    }
  }
  std::vector<std::vector<int>> terminal;
  for (std::size_t k = 0; k < components.size(); ++k) {
    bool closed = true;
    for (int v : components[k]) {
      for (const auto& [w, p] : chain.transitions[v]) {
        if (p > 0.0 && comp[w] != static_cast<int>(k)) closed = false;
      }
    }
    if (closed) {
      std::sort(components[k].begin(), components[k].end());
      terminal.push_back(components[k]);
    }
  }
  std::sort(terminal.begin(), terminal.end());
  return terminal;
}

/// Row-stochastic matrix of the chain restricted to a closed class.
inline Eigen::MatrixXd class_matrix(const ChainAnalysis& chain,
                                    const std::vector<int>& members) {
  const int k = static_cast<int>(members.size());
  std::map<int, int> local;
  for (int a = 0; a < k; ++a) local[members[a]] = a;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a) {
    for (const auto& [w, prob] : chain.transitions[members[a]]) {
      p(a, local.at(w)) += prob;
    }
  }
  return p;
}

inline double stationary_residual(const ChainAnalysis& chain,
                                  const std::vector<int>& members,
                                  const std::vector<double>& pi) {
  std::map<int, int> local;
  for (std::size_t a = 0; a < members.size(); ++a) local[members[a]] = a;
  std::vector<double> next(members.size(), 0.0);
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (const auto& [w, prob] : chain.transitions[members[a]]) {
      next[local.at(w)] += pi[a] * prob;
    }
  }
  double r = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    r = std::max(r, std::abs(next[a] - pi[a]));
  }
  return r;
}

/// Solves pi (P - I) = 0 with sum(pi) = 1 by replacing one balance equation.
inline std::vector<double> stationary_dense(const ChainAnalysis& chain,
                                            const std::vector<int>& members) {
  const int k = static_cast<int>(members.size());
  Eigen::MatrixXd a = class_matrix(chain, members).transpose() -
                      Eigen::MatrixXd::Identity(k, k);
  a.row(k - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(k - 1) = 1.0;
  Eigen::VectorXd x = a.fullPivLu().solve(b);
  return std::vector<double>(x.data(), x.data() + k);
}

/// Power iteration on the lazy chain (P + I)/2, which has the same
/// stationary distribution and is aperiodic.
inline std::vector<double> stationary_power(const ChainAnalysis& chain,
                                            const std::vector<int>& members) {
  const std::size_t k = members.size();
  std::map<int, int> local;
  for (std::size_t a = 0; a < k; ++a) local[members[a]] = a;
  std::vector<double> pi(k, 1.0 / k), next(k);
  for (int iter = 0; iter < 1'000'000; ++iter) {
    for (std::size_t a = 0; a < k; ++a) next[a] = 0.5 * pi[a];
    for (std::size_t a = 0; a < k; ++a) {
      for (const auto& [w, prob] : chain.transitions[members[a]]) {
        next[local.at(w)] += 0.5 * pi[a] * prob;
      }
    }
    double step = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      step = std::max(step, std::abs(next[a] - pi[a]));
    }
    pi.swap(next);
    if (step <= 1e-12) break;
  }
  return pi;
}

}  // namespace detail

/// Fills chain.sinks: recurrent classes with stationary distributions and
/// expected welfare (social cost for cost games).
inline void solve_sinks(ChainAnalysis& chain) {
  chain.sinks.clear();
  for (auto& members : detail::terminal_components(chain)) {
    Sink sink;
    sink.stationary = members.size() <= kDenseStationaryLimit
                          ? detail::stationary_dense(chain, members)
                          : detail::stationary_power(chain, members);
    double total = 0.0;
    for (double& p : sink.stationary) {
      p = std::max(p, 0.0);
      total += p;
    }
    for (double& p : sink.stationary) p /= total;
    sink.residual =
        detail::stationary_residual(chain, members, sink.stationary);
    for (std::size_t a = 0; a < members.size(); ++a) {
      sink.expected_welfare += sink.stationary[a] * chain.welfare[members[a]];
    }
    sink.states = std::move(members);
    chain.sinks.push_back(std::move(sink));
  }
}

inline ChainAnalysis sink_equilibria(const Game& game,
                                     std::uint64_t cap = kDefaultChainCap) {
  ChainAnalysis chain = build_chain(game, cap);
  solve_sinks(chain);
  return chain;
}

/// Welfare guarantee for every sink given a verified certificate.
///
/// Utility games: (1/H_n) * lambda/(1+mu) * OPT, a proven guarantee. Cost
/// games get the mirrored H_n * lambda/(1-mu) * OPT, only an empirical check.
struct SinkBound {
  double threshold = 0.0;
  bool empirical = false;
  std::vector<bool> satisfied;
  bool all_satisfied = true;
};

inline SinkBound sink_bound(const ChainAnalysis& chain,
                            const SmoothnessCertificate& cert, double opt) {
  if (!cert.verified) {
    throw Error(ErrorCode::kRejectedCertificate,
                "certificate is not verified");
  }
  const double h = harmonic(chain.num_players);
  SinkBound b;
  if (chain.direction == Direction::kUtilityMax) {
    b.threshold = (1.0 / h) * (cert.lambda / (1.0 + cert.mu)) * opt;
  } else {
    if (cert.mu >= 1.0) {
      throw Error(ErrorCode::kRejectedCertificate,
                  "cost certificate needs mu < 1");
    }
    b.threshold = h * (cert.lambda / (1.0 - cert.mu)) * opt;
    b.empirical = true;
  }
  for (const auto& sink : chain.sinks) {
    bool ok = chain.direction == Direction::kUtilityMax
                  ? sink.expected_welfare >= b.threshold - 1e-6
                  : sink.expected_welfare <= b.threshold + 1e-6;
    b.satisfied.push_back(ok);
    b.all_satisfied = b.all_satisfied && ok;
  }
  return b;
}

struct DriftViolation {
  int state = 0;
  double expected = 0.0;
  double bound = 0.0;
};

struct DriftCheck {
  bool holds = true;
  /// Smallest slack over states (expected minus bound; bound minus expected
  /// for costs).
  double min_margin = 0.0;
  std::optional<DriftViolation> violation;
};

/// One-step drift from every state. Utility games: E[SW(next) | s] >=
/// (1/H_n)(lambda OPT - mu SW(s)). Cost games: the moving coalition's
/// expected total cost is <= (1/H_n)(lambda SC(s*) + mu SC(s)).
inline DriftCheck drift_check(const ChainAnalysis& chain,
                              const SmoothnessCertificate& cert, double ref) {
  if (!cert.verified) {
    throw Error(ErrorCode::kRejectedCertificate,
                "certificate is not verified");
  }
  const double h = harmonic(chain.num_players);
  DriftCheck d;
  bool first = true;
  for (std::size_t s = 0; s < chain.states.size(); ++s) {
    double expected;
    double bound;
    double margin;
    if (chain.direction == Direction::kUtilityMax) {
      expected = 0.0;
      for (const auto& [w, p] : chain.transitions[s]) {
        expected += p * chain.welfare[w];
      }
      bound = (cert.lambda * ref - cert.mu * chain.welfare[s]) / h;
      margin = expected - bound;
    } else {
      expected = chain.coalition_value[s];
      bound = (cert.lambda * ref + cert.mu * chain.welfare[s]) / h;
      margin = bound - expected;
    }
    if (first || margin < d.min_margin) d.min_margin = margin;
    first = false;
    if (margin < -kTolerance && d.holds) {
      d.holds = false;
      d.violation = DriftViolation{static_cast<int>(s), expected, bound};
    }
  }
  return d;
}

}  // namespace coalsmooth

#endif  // COALSMOOTH_CHAIN_HPP
