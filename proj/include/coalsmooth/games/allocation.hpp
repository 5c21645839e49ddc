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

#ifndef COALSMOOTH_GAMES_ALLOCATION_HPP
#define COALSMOOTH_GAMES_ALLOCATION_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "coalsmooth/core.hpp"

namespace coalsmooth::games {

// Effort grids for the effort-based families. A player with budget B and
// grid level D splits D units of size B / D over `parts` targets.

inline std::uint64_t allocation_count(int units, int parts, bool allow_idle) {
  if (parts == 0) return 1;
  // Idle effort acts as one extra part.
  int n = units + parts - (allow_idle ? 0 : 1);
  int k = parts - (allow_idle ? 0 : 1);
  double c = binomial(n, k);
  if (c > 1e18) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(c);
}

/// All unit vectors of length `parts` summing to `units` (or at most `units`
/// when idle effort is allowed), in ascending lexicographic order.
inline std::vector<std::vector<int>> enumerate_allocations(
    int units, int parts, bool allow_idle, std::uint64_t cap) {
  check_cap(allocation_count(units, parts, allow_idle), cap,
            "effort grid of one player");
  std::vector<std::vector<int>> out;
  if (parts == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> v(parts, 0);
  // Odometer over [0, units]^parts filtered by the sum constraint.
  while (true) {
    int sum = 0;
    for (int x : v) sum += x;
    if (sum == units || (allow_idle && sum <= units)) out.push_back(v);
    int i = parts - 1;
    while (i >= 0 && v[i] == units) v[i--] = 0;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

/// Converts an explicit effort vector to grid units, rejecting off-grid or
/// over-budget allocations.
inline std::vector<int> efforts_to_units(const std::vector<double>& efforts,
                                         double budget, int grid,
                                         bool allow_idle,
                                         const std::string& who) {
  std::vector<int> units;
  int total = 0;
  for (double x : efforts) {
    if (x < -kTolerance) {
      throw Error(ErrorCode::kSpecError, who + ": negative effort");
    }
    double u = budget > 0 ? x * grid / budget : 0.0;
    double r = std::round(u);
    if (std::abs(u - r) > 1e-7 || (budget == 0 && x > kTolerance)) {
      throw Error(ErrorCode::kSpecError, who + ": effort off the grid");
    }
    units.push_back(static_cast<int>(r));
    total += static_cast<int>(r);
  }
  if (budget == 0) return units;
  if (total > grid || (!allow_idle && total != grid && !efforts.empty())) {
    throw Error(ErrorCode::kSpecError,
                who + (total > grid ? ": allocation over budget"
                                    : ": allocation must exhaust the budget"));
  }
  return units;
}

}  // namespace coalsmooth::games

#endif  // COALSMOOTH_GAMES_ALLOCATION_HPP
