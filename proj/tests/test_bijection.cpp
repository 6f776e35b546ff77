#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "rperm/bijection.hpp"
#include "rperm/bregular.hpp"

using namespace rperm;

TEST(RecordPositions, Examples) {
  EXPECT_EQ(record_positions(Permutation::identity(4)).positions, (std::vector<std::size_t>{1, 2, 3, 4}));
  const auto r = record_positions(Permutation({5, 1, 2, 3, 4}));
  EXPECT_EQ(r.positions, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.values, (std::vector<int>{5}));
  EXPECT_EQ(record_positions(Permutation({2, 1, 5, 3, 4, 6})).positions, (std::vector<std::size_t>{1, 3, 6}));
}

TEST(PermToComposition, Examples) {
  EXPECT_EQ(perm_to_composition(Permutation::identity(4)), Composition({1, 1, 1, 1}));
  EXPECT_EQ(perm_to_composition(Permutation({5, 1, 2, 3, 4})), Composition({5}));
  // Records at 1, 2, 5, 6.
  const Permutation p({1, 4, 2, 3, 5, 10, 6, 7, 8, 9});
  EXPECT_EQ(record_positions(p).positions, (std::vector<std::size_t>{1, 2, 5, 6}));
  EXPECT_EQ(perm_to_composition(p), Composition({1, 3, 1, 5}));
}

TEST(PermToComposition, RejectsNonB2Regular) {
  EXPECT_THROW(perm_to_composition(Permutation({3, 2, 1})), invalid_input);
}

TEST(CompositionToPerm, Examples) {
  EXPECT_EQ(composition_to_perm(Composition({1, 1, 1, 1, 1})), Permutation::identity(5));
  EXPECT_EQ(composition_to_perm(Composition({6})), Permutation({6, 1, 2, 3, 4, 5}));
  const auto p = composition_to_perm(Composition({1, 3, 1, 5}));
  EXPECT_EQ(p, Permutation({1, 4, 2, 3, 5, 10, 6, 7, 8, 9}));
  const std::vector<std::vector<int>> cycles = {{1}, {2, 4, 3}, {5}, {6, 10, 9, 8, 7}};
  EXPECT_EQ(p.cycles(), cycles);
}

TEST(EnumerateCompositions, Examples) {
  EXPECT_EQ(enumerate_compositions(1), (std::vector<Composition>{Composition({1})}));
  const auto three = enumerate_compositions(3);
  // mask 0 = no cuts, bit 0 = cut after position 1.
  EXPECT_EQ(three, (std::vector<Composition>{Composition({3}), Composition({1, 2}), Composition({2, 1}),
                                             Composition({1, 1, 1})}));
  EXPECT_EQ(enumerate_compositions(5).size(), 16u);
  EXPECT_THROW(enumerate_compositions(25), cap_exceeded);
}

TEST(EnumerateCompositions, SameSetAsRecursiveOracle) {
  for (int n = 1; n <= 12; ++n) {
    std::set<Composition> got, want;
    for (auto& c : enumerate_compositions(n)) got.insert(c);
    for (auto& c : oracle::compositions(n)) want.insert(Composition(c));
    ASSERT_EQ(got.size(), std::size_t{1} << (n - 1));
    ASSERT_EQ(got, want);
  }
}

TEST(CompositionFromCutWords, SpansSeveralWords) {
  std::vector<std::uint64_t> words = {0, std::uint64_t{1} << 5};  // cut after position 70
  const auto c = composition_from_cut_words(100, words);
  EXPECT_EQ(c, Composition({70, 30}));
}

TEST(Bijection, RoundTripsAndCycleSizesExhaustive) {
  for (int n = 1; n <= 14; ++n) {
    std::set<Composition> image;
    for_each_b_regular(make_b2(n), [&](const Permutation& p) {
      const auto c = perm_to_composition(p);
      EXPECT_EQ(composition_to_perm(c), p);
      if (n <= 12) {
        for (int k = 1; k <= n; ++k) EXPECT_EQ(count_k_cycles(p, k), c.count_parts(k));
      }
      image.insert(c);
      return true;
    });
    const auto comps = enumerate_compositions(n);
    EXPECT_EQ(image, std::set<Composition>(comps.begin(), comps.end()));
    for (const auto& c : comps) EXPECT_EQ(perm_to_composition(composition_to_perm(c)), c);
  }
}

TEST(TotalKParts, Examples) {
  EXPECT_EQ(total_k_parts(5, 1), 28);
  EXPECT_EQ(total_k_parts(6, 2), 28);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(total_k_parts(n, n), 1);
  EXPECT_THROW(total_k_parts(3, 4), invalid_input);
}

TEST(TotalKParts, MatchesEnumerationAndShiftInvariance) {
  for (int n = 1; n <= 14; ++n) {
    const auto comps = oracle::compositions(n);
    for (int k = 1; k <= n; ++k) {
      long parts = 0;
      for (const auto& c : comps) parts += oracle::count_parts(c, k);
      EXPECT_EQ(total_k_parts(n, k), parts) << n << "," << k;
      for (int m = 1; m <= 5; ++m) EXPECT_EQ(total_k_parts(n, k), total_k_parts(n + m, k + m));
    }
  }
}
