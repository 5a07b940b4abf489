#include "cardguess/errors.hpp"
#include "cardguess/kernels.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>

using namespace cardguess;

namespace {

std::vector<Player> named_players(DeckSpec d) {
  std::vector<Player> out;
  for (const char* s : {"safe", "shift", "gshift:0.3", "half+", "half-", "half*+", "half*-", "avoid",
                        "fixed:1", "linear:0.51", "kgshift:2:0.35"}) {
    out.emplace_back(StrategySpec::parse(s), d);
  }
  return out;
}

// Shifting only depends on the remaining multiset and the current target, so
// its mean is a small Markov recursion over (counts, target).
Rational shifting_mean_dp(int m, int n) {
  std::map<std::pair<std::vector<int>, int>, Rational> memo;
  auto rec = [&](auto&& self, const std::vector<int>& c, int t) -> Rational {
    const int total = std::accumulate(c.begin(), c.end(), 0);
    if (total == 0) return 0;
    const auto key = std::make_pair(c, t);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Rational r = 0;
    for (int j = 0; j < n; ++j) {
      if (c[j] == 0) continue;
      auto next = c;
      --next[j];
      const Rational p(c[j], total);
      r += j == t ? p * (1 + self(self, next, (t + 1) % n)) : p * self(self, next, t);
    }
    memo.emplace(key, r);
    return r;
  };
  return rec(rec, std::vector<int>(static_cast<std::size_t>(n), m), 0);
}

}  // namespace

TEST(Kernels, ShiftingMatchesMarkovRecursion) {
  for (const DeckSpec d : {DeckSpec(2, 4), DeckSpec(3, 3), DeckSpec(2, 5), DeckSpec(4, 3), DeckSpec(2, 6)}) {
    const std::vector<Player> players{Player(StrategySpec::shifting(), d)};
    const auto res = enumerate_scores(d, players, FeedbackModel::YesNo);
    EXPECT_EQ(res.tallies[0].mean(), shifting_mean_dp(d.m, d.n)) << d.m << "," << d.n;
  }
  EXPECT_EQ(shifting_mean_dp(3, 5), Rational(42082853, 11211200));
}

TEST(Kernels, ParallelMatchesSerial) {
  for (const DeckSpec d : {DeckSpec(2, 3), DeckSpec(2, 4), DeckSpec(3, 3), DeckSpec(2, 5), DeckSpec(4, 3)}) {
    const auto players = named_players(d);
    const auto ref = enumerate_scores_serial(d, players, FeedbackModel::YesNo);
    for (int threads : {1, 2, 3, 8}) {
      const auto got = enumerate_scores(d, players, FeedbackModel::YesNo, kDefaultEnumerationCap, threads);
      ASSERT_EQ(got.words, ref.words);
      for (std::size_t i = 0; i < players.size(); ++i) {
        EXPECT_EQ(got.tallies[i], ref.tallies[i]) << players[i].spec().to_string() << " t=" << threads;
      }
    }
  }
}

TEST(Kernels, MatchesPlayScorePerWord) {
  const DeckSpec d(3, 3);
  const auto players = named_players(d);
  const auto res = enumerate_scores(d, players, FeedbackModel::YesNo);
  for (std::size_t i = 0; i < players.size(); ++i) {
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(d.length()) + 1, 0);
    for (const auto& p : enumerate(d)) ++hist[static_cast<std::size_t>(play_score(players[i], p.word(), FeedbackModel::YesNo))];
    EXPECT_EQ(res.tallies[i].score_hist, hist) << players[i].spec().to_string();
  }
}

TEST(Kernels, TallyShape) {
  const DeckSpec d(2, 4);
  const auto players = named_players(d);
  const auto res = enumerate_scores(d, players, FeedbackModel::YesNo);
  EXPECT_EQ(BigInt(res.words), deck_count(d));
  for (const auto& t : res.tallies) {
    EXPECT_EQ(t.words(), res.words);
    EXPECT_EQ(std::accumulate(t.first_correct_hist.begin(), t.first_correct_hist.end(), std::uint64_t{0}), res.words);
    std::uint64_t by_q = 0;
    for (const auto& row : t.by_q) by_q += std::accumulate(row.begin(), row.end(), std::uint64_t{0});
    EXPECT_EQ(by_q, res.words);
    // Words whose first "1" is at position q+1: (mn-1-q choose m-1) * rest.
    for (int q = 0; q < d.length(); ++q) {
      const auto cnt = std::accumulate(t.by_q[static_cast<std::size_t>(q)].begin(),
                                       t.by_q[static_cast<std::size_t>(q)].end(), std::uint64_t{0});
      const BigInt expect = binomial(d.length() - 1 - q, d.m - 1) * deck_count(DeckSpec(d.m, d.n - 1));
      EXPECT_EQ(BigInt(cnt), expect) << q;
    }
  }
}

TEST(Kernels, SafeTwoTypesMean) {
  const std::vector<Player> p{Player(StrategySpec::safe(), DeckSpec(2, 2))};
  EXPECT_EQ(enumerate_scores(DeckSpec(2, 2), p, FeedbackModel::YesNo).tallies[0].mean(), Rational(8, 3));
}

TEST(Kernels, FixedAndNoFeedback) {
  const DeckSpec d(2, 4);
  const std::vector<Player> p{Player(StrategySpec::fixed(3), d), Player(StrategySpec::safe(), d)};
  const auto res = enumerate_scores(d, p, FeedbackModel::None);
  EXPECT_EQ(res.tallies[0].mean(), 2);
  EXPECT_EQ(res.tallies[1].mean(), 2);  // without feedback safe never moves on
}

TEST(Kernels, CapExceeded) {
  const std::vector<Player> p{Player(StrategySpec::safe(), DeckSpec(2, 6))};
  EXPECT_THROW(enumerate_scores(DeckSpec(2, 6), p, FeedbackModel::YesNo, 1e6), CapExceeded);
}
