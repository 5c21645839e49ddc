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

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(SocialWelfare, G1SharedSharedCostsOne) {
  EXPECT_DOUBLE_EQ(g1().social_welfare(StrategyProfile{0, 0}), 1.0);
}

TEST(SocialWelfare, G2CooperateCooperateIsSix) {
  EXPECT_DOUBLE_EQ(g2().social_welfare(StrategyProfile{0, 0}), 6.0);
}

TEST(SocialWelfare, AllOutIsZero) {
  Game g = g3();
  EXPECT_DOUBLE_EQ(g.social_welfare_unchecked(g.out_profile()), 0.0);
}

TEST(SocialWelfare, RejectsOutOfRangeStrategy) {
  EXPECT_EQ(code_of([] { g1().social_welfare(StrategyProfile{0, 3}); }),
            ErrorCode::kInvalidProfile);
  EXPECT_EQ(code_of([] { g1().social_welfare(StrategyProfile{0}); }),
            ErrorCode::kInvalidProfile);
}

TEST(Utility, G2DefectorAgainstCooperator) {
  EXPECT_DOUBLE_EQ(g2().utility(0, StrategyProfile{1, 0}), 4.0);
}

TEST(Utility, G1SoleUserPaysFullCost) {
  EXPECT_DOUBLE_EQ(g1().utility(0, StrategyProfile{0, 1}), 1.0);
}

TEST(Utility, OutStrategyYieldsZero) {
  Game g = g3();
  StrategyProfile s{0, 0, 0, 0};
  s[1] = g.out_strategy(1);
  EXPECT_DOUBLE_EQ(g.utility_unchecked(1, s), 0.0);
}

TEST(Utility, RejectsBadPlayer) {
  EXPECT_EQ(code_of([] { g2().utility(2, StrategyProfile{0, 0}); }),
            ErrorCode::kInvalidPlayer);
  EXPECT_EQ(code_of([] { g2().utility(-1, StrategyProfile{0, 0}); }),
            ErrorCode::kInvalidPlayer);
}

TEST(ApplyDeviation, SingleSubstitution) {
  StrategyProfile s{0, 1, 2};
  EXPECT_EQ(apply_deviation(s, Coalition({1}, 3), std::vector<int>{7}),
            (StrategyProfile{0, 7, 2}));
}

TEST(ApplyDeviation, GrandCoalitionReplacesEverything) {
  StrategyProfile s{0, 1, 2};
  EXPECT_EQ(apply_deviation(s, Coalition::grand(3), std::vector<int>{4, 5, 6}),
            (StrategyProfile{4, 5, 6}));
}

TEST(ApplyDeviation, NonContiguousCoalition) {
  StrategyProfile s{0, 1, 2};
  EXPECT_EQ(apply_deviation(s, Coalition({0, 2}, 3), std::vector<int>{8, 9}),
            (StrategyProfile{8, 1, 9}));
}

TEST(ApplyDeviation, ArityMismatch) {
  StrategyProfile s{0, 1, 2};
  EXPECT_EQ(code_of([&] {
              apply_deviation(s, Coalition({0, 2}, 3), std::vector<int>{8});
            }),
            ErrorCode::kArityMismatch);
}

TEST(SuffixDeviation, FirstRankSwitchesEveryone) {
  StrategyProfile s{0, 0, 0};
  StrategyProfile star{1, 2, 3};
  auto order = PlayerOrdering::from_sequence(std::vector<int>{2, 0, 1});
  EXPECT_EQ(suffix_deviation_profile(s, star, order, 2), star);
}

TEST(SuffixDeviation, LastRankSwitchesOnlyThatPlayer) {
  StrategyProfile s{0, 0, 0};
  StrategyProfile star{1, 2, 3};
  auto order = PlayerOrdering::from_sequence(std::vector<int>{2, 0, 1});
  EXPECT_EQ(suffix_deviation_profile(s, star, order, 1),
            (StrategyProfile{0, 2, 0}));
}

TEST(SuffixDeviation, IdentityOrderingMiddlePlayer) {
  StrategyProfile s{0, 0, 0};
  StrategyProfile star{1, 2, 3};
  EXPECT_EQ(suffix_deviation_profile(s, star, PlayerOrdering::identity(3), 1),
            (StrategyProfile{0, 2, 3}));
}

TEST(PlayerOrdering, SequenceAndRanksAreInverse) {
  auto o = PlayerOrdering::from_sequence(std::vector<int>{2, 0, 1});
  EXPECT_EQ(o.rank(2), 1);
  EXPECT_EQ(o.rank(0), 2);
  EXPECT_EQ(o.rank(1), 3);
  EXPECT_EQ(o.sequence(), (std::vector<int>{2, 0, 1}));
}

TEST(PlayerOrdering, RejectsNonPermutation) {
  EXPECT_THROW(PlayerOrdering::from_ranks({0, 0}), Error);
  EXPECT_THROW(PlayerOrdering::from_sequence(std::vector<int>{0, 3}), Error);
}

TEST(EnumerateProfiles, TwoByTwoIsLexicographic) {
  auto g = testing::table_game({2, 2}, {std::vector<double>(4, 0.0),
                                         std::vector<double>(4, 0.0)});
  EXPECT_EQ(enumerate_profiles(g), (std::vector<StrategyProfile>{
                                       {0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(EnumerateProfiles, SinglePlayerThreeStrategies) {
  auto g = testing::table_game({3}, {{1.0, 2.0, 3.0}});
  EXPECT_EQ(enumerate_profiles(g).size(), 3u);
}

TEST(EnumerateProfiles, MixedArityFirstAndLast) {
  auto g = testing::table_game(
      {2, 3, 2},
      std::vector<std::vector<double>>(3, std::vector<double>(12, 0.0)));
  auto all = enumerate_profiles(g);
  ASSERT_EQ(all.size(), 12u);
  EXPECT_EQ(all.front(), (StrategyProfile{0, 0, 0}));
  EXPECT_EQ(all.back(), (StrategyProfile{1, 2, 1}));
  EXPECT_EQ(all, testing::all_profiles(g));
}

TEST(EnumerateProfiles, CapOverflow) {
  EXPECT_EQ(code_of([] { enumerate_profiles(g1(), 3); }),
            ErrorCode::kStateSpaceTooLarge);
}

TEST(Optimum, FixtureValues) {
  auto o1 = optimum(g1());
  EXPECT_EQ(o1.profile, (StrategyProfile{0, 0}));
  EXPECT_DOUBLE_EQ(o1.value, 1.0);
  auto o2 = optimum(g2());
  EXPECT_EQ(o2.profile, (StrategyProfile{0, 0}));
  EXPECT_DOUBLE_EQ(o2.value, 6.0);
  auto o3 = optimum(g3());
  EXPECT_EQ(o3.profile, (StrategyProfile{0, 0, 1, 0}));
  EXPECT_DOUBLE_EQ(o3.value, 12.0);
}

TEST(Harmonic, SmallValues) {
  EXPECT_DOUBLE_EQ(harmonic(1), 1.0);
  EXPECT_DOUBLE_EQ(harmonic(2), 1.5);
  EXPECT_NEAR(harmonic(4), 25.0 / 12.0, 1e-15);
  EXPECT_EQ(code_of([] { harmonic(0); }), ErrorCode::kInvalidArgument);
}

TEST(Coalitions, CountAndOrder) {
  auto all = all_coalitions(3);
  ASSERT_EQ(all.size(), 7u);
  EXPECT_EQ(all[0].to_string(), "0");
  EXPECT_EQ(all[3].to_string(), "0-1");
  EXPECT_EQ(all[6].to_string(), "0-1-2");
}

TEST(ProfileText, RoundTrip) {
  StrategyProfile s{3, 0, 12};
  EXPECT_EQ(format_profile(s), "3-0-12");
  EXPECT_EQ(parse_profile("3-0-12"), s);
  EXPECT_THROW(parse_profile("3--1"), Error);
}

}  // namespace
}  // namespace coalsmooth
