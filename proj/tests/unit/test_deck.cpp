#include "cardguess/deck.hpp"
#include "cardguess/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace cardguess;

TEST(Deck, Count) {
  EXPECT_EQ(deck_count(DeckSpec(1, 3)), 6);
  EXPECT_EQ(deck_count(DeckSpec(2, 2)), 6);
  EXPECT_EQ(deck_count(DeckSpec(2, 6)), 7484400);
  EXPECT_EQ(deck_count(DeckSpec(5, 5)), BigInt("623360743125120"));
}

TEST(Deck, RejectsBadSpec) {
  EXPECT_THROW(DeckSpec(0, 3), std::invalid_argument);
  EXPECT_THROW(DeckSpec(2, 0), std::invalid_argument);
}

TEST(Deck, EnumerateSmall) {
  std::vector<std::string> got;
  for (const auto& p : enumerate(DeckSpec(1, 2))) got.push_back(p.to_string());
  EXPECT_EQ(got, (std::vector<std::string>{"12", "21"}));

  got.clear();
  for (const auto& p : enumerate(DeckSpec(2, 2))) got.push_back(p.to_string());
  EXPECT_EQ(got, (std::vector<std::string>{"1122", "1212", "1221", "2112", "2121", "2211"}));
}

TEST(Deck, EnumerationIsLexicographicAndComplete) {
  for (const DeckSpec spec : {DeckSpec(1, 5), DeckSpec(2, 4), DeckSpec(3, 3), DeckSpec(4, 2)}) {
    const auto all = enumerate(spec);
    EXPECT_EQ(BigInt(all.size()), deck_count(spec));
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  }
}

TEST(Deck, EnumerationCap) {
  EXPECT_THROW(PermutationEnumerator(DeckSpec(2, 6), 1000), CapExceeded);
  EXPECT_NO_THROW(PermutationEnumerator(DeckSpec(2, 2), 6));
}

TEST(Deck, MultisetValidation) {
  const DeckSpec spec(2, 2);
  EXPECT_NO_THROW(Permutation(spec, {1, 2, 2, 1}));
  EXPECT_THROW(Permutation(spec, {1, 1, 1, 2}), std::invalid_argument);
  EXPECT_THROW(Permutation(spec, {1, 2, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation(spec, {1, 2, 3, 1}), std::invalid_argument);
  EXPECT_EQ(Permutation::parse(spec, "1,2,2,1"), Permutation::parse(spec, "1221"));
  EXPECT_EQ(Permutation::canonical(spec).to_string(), "1122");
}

TEST(Deck, SampleSingleton) {
  RngStream rng(5, 0);
  EXPECT_EQ(sample(DeckSpec(1, 1), rng).to_string(), "1");
}

TEST(Deck, SampleIsUniform) {
  // 60000 draws over the six words of S_{2,2}; each count within 5 sigma.
  const DeckSpec spec(2, 2);
  std::map<std::string, int> freq;
  for (std::uint64_t i = 0; i < 60000; ++i) {
    RngStream rng(42, i);
    ++freq[sample(spec, rng).to_string()];
  }
  ASSERT_EQ(freq.size(), 6u);
  const double tol = 5 * std::sqrt(10000.0 * 5 / 6);
  for (const auto& [w, c] : freq) EXPECT_NEAR(c, 10000, tol) << w;
}

TEST(Deck, SampleDeterministic) {
  const DeckSpec spec(3, 4);
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream a(9, i), b(9, i);
    const auto p = sample(spec, a);
    EXPECT_EQ(p, sample(spec, b));
    EXPECT_NO_THROW(check_multiset(spec, p.word()));
  }
}

TEST(Deck, ProjectLeK) {
  const auto p = Permutation::parse(DeckSpec(2, 4), "41234132");
  EXPECT_EQ(project_le_k(p, 3).to_string(), "123132");
  EXPECT_EQ(project_le_k(p, 3).spec(), DeckSpec(2, 3));
  EXPECT_EQ(project_le_k(p, 4), p);
  EXPECT_EQ(project_le_k(Permutation::parse(DeckSpec(2, 2), "2211"), 1).to_string(), "11");
  EXPECT_THROW(project_le_k(p, 0), std::invalid_argument);
  EXPECT_THROW(project_le_k(p, 5), std::invalid_argument);
}

TEST(Deck, FirstIndexOfOne) {
  EXPECT_EQ(first_index_of_one(Permutation::parse(DeckSpec(2, 4), "41234132")), 2);
  EXPECT_EQ(first_index_of_one(Permutation::parse(DeckSpec(2, 2), "1122")), 1);
  EXPECT_EQ(first_index_of_one(Permutation::parse(DeckSpec(2, 2), "2211")), 3);
}
