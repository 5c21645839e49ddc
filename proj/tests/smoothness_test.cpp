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

#include <gtest/gtest.h>

#include "support.hpp"

namespace coalsmooth {
namespace {

using testing::g1;
using testing::g2;
using testing::g3;
using testing::g4;
using testing::g5;

const StrategyProfile kG3MidMid{0, 0, 1, 0};

/// Best implied ratio found by scanning mu on a grid, computing the
/// tightest lambda for each mu directly from the brute-force deviation sums.
double grid_scan_ratio(const Game& g, const StrategyProfile& s_star) {
  auto profiles = testing::all_profiles(g);
  std::vector<double> lhs;
  std::vector<double> w;
  double ref = g.maximizes() ? 0.0 : testing::sw(g, s_star);
  for (const auto& s : profiles) {
    lhs.push_back(testing::oracle_worst_deviation_sum(g, s_star, s));
    w.push_back(testing::sw(g, s));
    if (g.maximizes()) ref = std::max(ref, w.back());
  }
  double best = g.maximizes() ? 0.0 : std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    double mu = g.maximizes() ? k * 0.01 : k * 0.000999;
    double lambda = g.maximizes() ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      double v = g.maximizes() ? (lhs[p] + mu * w[p]) / ref
                               : (lhs[p] - mu * w[p]) / ref;
      lambda = g.maximizes() ? std::min(lambda, v) : std::max(lambda, v);
    }
    double r = implied_ratio(g.direction(), lambda, mu);
    best = g.maximizes() ? std::max(best, r) : std::min(best, r);
  }
  return best;
}

TEST(DeviationSum, SinglePlayerIsAnchorUtility) {
  Game g = testing::table_game({3}, {{1.0, 5.0, 2.0}});
  EXPECT_DOUBLE_EQ(deviation_sum(g, StrategyProfile{2}, StrategyProfile{0},
                                 PlayerOrdering::identity(1)),
                   2.0);
}

TEST(DeviationSum, AtAnchorEqualsWelfare) {
  Game g = g3();
  for (const auto& seq : {std::vector<int>{0, 1, 2, 3}, {3, 1, 0, 2}}) {
    EXPECT_DOUBLE_EQ(deviation_sum(g, kG3MidMid, kG3MidMid,
                                   PlayerOrdering::from_sequence(seq)),
                     12.0);
  }
}

TEST(DeviationSum, G2HandEvaluation) {
  EXPECT_DOUBLE_EQ(deviation_sum(g2(), StrategyProfile{0, 0},
                                 StrategyProfile{1, 1},
                                 PlayerOrdering::identity(2)),
                   3.0);
}

TEST(WorstOrdering, SubsetRecursionMatchesAllPermutations) {
  for (Game g : {g1(), g2(), g3(), g4(), g5(),
                 games::load_game(games::fixtures::harmonic_congestion4())}) {
    auto profiles = testing::all_profiles(g);
    for (const auto& star : profiles) {
      for (const auto& s : profiles) {
        auto w = worst_ordering_exact(g, star, s);
        EXPECT_NEAR(w.value, testing::oracle_worst_deviation_sum(g, star, s),
                    1e-9);
        // The reported ordering attains the value.
        EXPECT_NEAR(deviation_sum(g, star, s, w.ordering), w.value, 1e-9);
      }
    }
  }
}

TEST(CheckCoalitional, G1HarmonicCertificate) {
  auto c = check_coalitional_smoothness(g1(), StrategyProfile{0, 0}, 1.5, 0.0);
  EXPECT_TRUE(c.verified);
  EXPECT_TRUE(c.exact);
  EXPECT_TRUE(testing::oracle_smooth(g1(), {0, 0}, 1.5, 0.0));
}

TEST(CheckCoalitional, G3HalfHalf) {
  auto c = check_coalitional_smoothness(g3(), kG3MidMid, 0.5, 0.5);
  EXPECT_TRUE(c.verified);
  EXPECT_TRUE(testing::oracle_smooth(g3(), kG3MidMid, 0.5, 0.5));
}

TEST(CheckCoalitional, ZeroParametersVacuousForUtilityGames) {
  for (Game g : {g2(), g3(), g4(), g5()}) {
    auto star = optimum(g).profile;
    EXPECT_TRUE(check_coalitional_smoothness(g, star, 0.0, 0.0).verified);
  }
}

TEST(CheckCoalitional, InfeasibleCertificateHasWitness) {
  auto c = check_coalitional_smoothness(g2(), StrategyProfile{0, 0}, 10.0, 0.0);
  ASSERT_FALSE(c.verified);
  ASSERT_TRUE(c.witness);
  EXPECT_LT(c.witness->lhs, c.witness->rhs);
  ASSERT_TRUE(c.witness->ordering);
  EXPECT_NEAR(deviation_sum(g2(), StrategyProfile{0, 0}, c.witness->profile,
                            *c.witness->ordering),
              c.witness->lhs, 1e-12);
  EXPECT_FALSE(testing::oracle_smooth(g2(), {0, 0}, 10.0, 0.0));
}

TEST(CheckCoalitional, NegativeParametersRejected) {
  EXPECT_THROW(check_coalitional_smoothness(g2(), StrategyProfile{0, 0}, -1, 0),
               Error);
}

TEST(CheckCoalitional, PermutationCapNeedsExplicitSampling) {
  SmoothnessOptions opts;
  opts.permutation_cap = 3;
  try {
    check_coalitional_smoothness(g3(), kG3MidMid, 0.5, 0.5, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStateSpaceTooLarge);
  }
  opts.sample = true;
  opts.samples = 200;
  opts.seed = 3;
  auto c = check_coalitional_smoothness(g3(), kG3MidMid, 0.5, 0.5, opts);
  EXPECT_FALSE(c.exact);
  EXPECT_TRUE(c.verified);
}

TEST(Fit, G1FrontierDominatesHarmonicPoint) {
  auto c = fit_coalitional_smoothness(g1());
  EXPECT_TRUE(c.verified);
  EXPECT_LE(c.best_ratio, 1.5 + 1e-12);
  bool dominated = false;
  for (const auto& p : c.frontier) {
    if (p.lambda <= 1.5 + 1e-12 && p.mu <= 1e-12) dominated = true;
  }
  EXPECT_TRUE(dominated);
  EXPECT_NEAR(c.best_ratio, 1.0, 1e-12);
  EXPECT_NEAR(c.best_ratio, grid_scan_ratio(g1(), c.s_star), 1e-9);
}

TEST(Fit, G5AtLeastOneThird) {
  auto c = fit_coalitional_smoothness(g5());
  EXPECT_TRUE(c.verified);
  EXPECT_GE(c.best_ratio, 1.0 / 3.0 - 1e-12);
  EXPECT_TRUE(testing::oracle_smooth(g5(), c.s_star, c.lambda, c.mu));
}

TEST(Fit, SinglePlayerAtArgmaxIsOneZero) {
  Game g = testing::table_game({3}, {{1.0, 5.0, 2.0}});
  auto c = fit_coalitional_smoothness(g);
  EXPECT_NEAR(c.lambda, 1.0, 1e-12);
  EXPECT_NEAR(c.mu, 0.0, 1e-12);
  EXPECT_NEAR(c.best_ratio, 1.0, 1e-12);
  auto u = fit_unilateral_smoothness(g);
  EXPECT_NEAR(u.lambda, 1.0, 1e-12);
  EXPECT_NEAR(u.mu, 0.0, 1e-12);
}

TEST(Fit, FittedPointsVerifyAndAreOptimal) {
  for (Game g : {g1(), g2(), g3(), g4(), g5()}) {
    auto c = fit_coalitional_smoothness(g);
    EXPECT_TRUE(c.verified);
    EXPECT_TRUE(testing::oracle_smooth(g, c.s_star, c.lambda, c.mu));
    double scan = grid_scan_ratio(g, c.s_star);
    if (g.maximizes()) {
      double ceiling = c.ratio_supremum ? *c.ratio_supremum : c.best_ratio;
      EXPECT_LE(scan, ceiling + 1e-9);
      if (!c.ratio_supremum) {
        EXPECT_GE(c.best_ratio, scan - 1e-9);
      }
    } else {
      EXPECT_LE(c.best_ratio, scan + 1e-9);
    }
  }
}

TEST(Fit, ZeroWelfareGameIsDegenerate) {
  Game g = testing::table_game({2, 2}, {std::vector<double>(4, 0.0),
                                         std::vector<double>(4, 0.0)});
  try {
    fit_coalitional_smoothness(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateGame);
  }
}

TEST(Fit, AnchorSearchNeverWorseThanOptimumAnchor) {
  for (Game g : {g1(), g2(), g4(), g5()}) {
    auto at_opt = fit_coalitional_smoothness(g);
    auto searched = search_smoothness_anchor(g, SmoothnessKind::kCoalitional);
    EXPECT_TRUE(searched.verified);
    double opt = optimum(g).value;
    double a = g.maximizes() ? at_opt.best_ratio
                             : at_opt.best_ratio * testing::sw(g, at_opt.s_star) / opt;
    double b = g.maximizes()
                   ? searched.best_ratio
                   : searched.best_ratio * testing::sw(g, searched.s_star) / opt;
    if (g.maximizes()) {
      EXPECT_GE(b, a - 1e-12);
    } else {
      EXPECT_LE(b, a + 1e-12);
    }
  }
}

TEST(FitUnilateral, G5RatioIsZero) {
  auto c = fit_unilateral_smoothness(g5());
  EXPECT_TRUE(c.verified);
  EXPECT_NEAR(c.best_ratio, 0.0, 1e-12);
}

TEST(FitUnilateral, G4HarmonicPointVerifies) {
  auto star = optimum(g4()).profile;
  EXPECT_TRUE(check_unilateral_smoothness(g4(), star, 1.0, 1.5).verified);
}

TEST(Envelope, UtilityVertexIsChosen) {
  // lambda <= 0.5 and lambda <= mu: best ratio 1/3 at (0.5, 0.5).
  std::vector<SmoothnessConstraint> cons{{0.5, 0.0}, {0.0, 1.0}};
  auto fit = fit_envelope(Direction::kUtilityMax, cons, 1.0);
  EXPECT_NEAR(fit.best.lambda, 0.5, 1e-12);
  EXPECT_NEAR(fit.best.mu, 0.5, 1e-12);
  EXPECT_NEAR(fit.best_ratio, 1.0 / 3.0, 1e-12);
  EXPECT_FALSE(fit.ratio_supremum);
}

TEST(Envelope, UtilitySupremumReported) {
  // lambda <= mu alone: ratio mu/(1+mu) approaches 1 without attaining it.
  std::vector<SmoothnessConstraint> cons{{0.0, 1.0}};
  auto fit = fit_envelope(Direction::kUtilityMax, cons, 1.0);
  ASSERT_TRUE(fit.ratio_supremum);
  EXPECT_NEAR(*fit.ratio_supremum, 1.0, 1e-12);
}

TEST(Envelope, RoundedParallelSlopesDoNotCross) {
  // Every profile optimal: welfare 13 summed in two orders differs by an ulp.
  double w = 0.1 * 130.0;
  double w2 = std::nextafter(w, 0.0);
  ASSERT_NE(w, w2);
  std::vector<SmoothnessConstraint> cons{{10.0, w}, {11.0, w2}};
  auto fit = fit_envelope(Direction::kUtilityMax, cons, 13.0);
  EXPECT_EQ(fit.best.mu, 0.0);
  EXPECT_NEAR(fit.best.lambda, 10.0 / 13.0, 1e-12);
  for (const auto& p : fit.frontier) EXPECT_LT(p.mu, 1e6);
}

TEST(Envelope, CostPrefersSmallestMu) {
  // lambda >= 1.5 and lambda >= 2 - mu: ratio 2 at mu = 0, 3 at mu = 0.5.
  std::vector<SmoothnessConstraint> cons{{1.5, 0.0}, {2.0, 1.0}};
  auto fit = fit_envelope(Direction::kCostMin, cons, 1.0);
  EXPECT_NEAR(fit.best.lambda, 2.0, 1e-12);
  EXPECT_NEAR(fit.best.mu, 0.0, 1e-12);
  EXPECT_NEAR(fit.best_ratio, 2.0, 1e-12);
}

TEST(Envelope, CostBreakpointCanWin) {
  // lambda >= 3 - 4 mu and lambda >= 0.5: at mu = 0.625, ratio 0.5/0.375.
  std::vector<SmoothnessConstraint> cons{{3.0, 4.0}, {0.5, 0.0}};
  auto fit = fit_envelope(Direction::kCostMin, cons, 1.0);
  EXPECT_NEAR(fit.best.mu, 0.625, 1e-12);
  EXPECT_NEAR(fit.best_ratio, 0.5 / 0.375, 1e-12);
}

TEST(Envelope, ZeroReferenceIsDegenerate) {
  std::vector<SmoothnessConstraint> cons{{1.0, 1.0}};
  EXPECT_THROW(fit_envelope(Direction::kUtilityMax, cons, 0.0), Error);
}

TEST(ImpliedRatio, Forms) {
  EXPECT_DOUBLE_EQ(implied_ratio(Direction::kUtilityMax, 0.5, 0.5), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(implied_ratio(Direction::kCostMin, 1.0, 0.5), 2.0);
  EXPECT_TRUE(std::isinf(implied_ratio(Direction::kCostMin, 1.0, 1.0)));
}

}  // namespace
}  // namespace coalsmooth
