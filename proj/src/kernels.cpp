#include "cardguess/kernels.hpp"

#include "cardguess/errors.hpp"

#include <omp.h>

#include <algorithm>

namespace cardguess {

void StrategyTally::resize(int length) {
  const auto len = static_cast<std::size_t>(length);
  score_hist.assign(len + 1, 0);
  first_correct_hist.assign(len + 1, 0);
  by_q.assign(len, std::vector<std::uint64_t>(len + 1, 0));
}

void StrategyTally::merge(const StrategyTally& other) {
  for (std::size_t i = 0; i < score_hist.size(); ++i) score_hist[i] += other.score_hist[i];
  for (std::size_t i = 0; i < first_correct_hist.size(); ++i) {
    first_correct_hist[i] += other.first_correct_hist[i];
  }
  for (std::size_t q = 0; q < by_q.size(); ++q) {
    for (std::size_t s = 0; s < by_q[q].size(); ++s) by_q[q][s] += other.by_q[q][s];
  }
}

std::uint64_t StrategyTally::words() const {
  std::uint64_t total = 0;
  for (auto c : score_hist) total += c;
  return total;
}

Rational StrategyTally::mean() const {
  BigInt weighted = 0;
  BigInt total = 0;
  for (std::size_t s = 0; s < score_hist.size(); ++s) {
    weighted += BigInt(score_hist[s]) * static_cast<unsigned>(s);
    total += score_hist[s];
  }
  if (total == 0) return 0;
  return Rational(weighted, total);
}

namespace {

void check_cap(DeckSpec deck, double cap) {
  const BigInt count = deck_count(deck);
  if (count > BigInt(static_cast<std::uint64_t>(cap))) {
    throw CapExceeded("deck has " + count.str() + " orders, above the enumeration cap",
                      count.convert_to<double>(), cap);
  }
}

// Depth-first walk over multiset prefixes. Level d holds, per player, the
// guess made at trial d+1 and the "yes"/"no" successor states; the state
// in force at level d is a pointer into level d-1.
class Walker {
 public:
  Walker(DeckSpec deck, std::span<const Player> players, FeedbackModel model)
      : deck_(deck),
        players_(players),
        model_(model),
        len_(deck.length()),
        np_(players.size()),
        rem_(static_cast<std::size_t>(deck.n) + 1, deck.m),
        yes_((static_cast<std::size_t>(len_) + 1) * np_),
        no_((static_cast<std::size_t>(len_) + 1) * np_),
        cur_((static_cast<std::size_t>(len_) + 1) * np_),
        score_((static_cast<std::size_t>(len_) + 1) * np_),
        first_hit_((static_cast<std::size_t>(len_) + 1) * np_),
        guess_(static_cast<std::size_t>(len_) * np_),
        first_one_(static_cast<std::size_t>(len_) + 1, 0),
        tallies_(np_) {
    for (std::size_t i = 0; i < np_; ++i) {
      root_.push_back(players_[i].initial_state());
      tallies_[i].resize(len_);
    }
    rem_[0] = 0;
  }

  // Walks every completion of `prefix`.
  void run(std::span<const Symbol> prefix) {
    for (std::size_t i = 0; i < np_; ++i) {
      cur_[i] = &root_[i];
      score_[i] = 0;
      first_hit_[i] = 0;
    }
    first_one_[0] = 0;
    prefix_ = prefix;
    descend(0);
  }

  std::vector<StrategyTally>& tallies() { return tallies_; }

 private:
  void descend(int d) {
    const std::size_t base = static_cast<std::size_t>(d) * np_;
    if (d == len_) {
      const auto q = static_cast<std::size_t>(first_one_[static_cast<std::size_t>(d)] - 1);
      for (std::size_t i = 0; i < np_; ++i) {
        const auto sc = static_cast<std::size_t>(score_[base + i]);
        auto& t = tallies_[i];
        ++t.score_hist[sc];
        ++t.first_correct_hist[static_cast<std::size_t>(first_hit_[base + i])];
        ++t.by_q[q][sc];
      }
      return;
    }
    const int left = len_ - d;
    for (std::size_t i = 0; i < np_; ++i) {
      const StrategyState& s = *cur_[base + i];
      const Symbol g = players_[i].next_guess(s);
      guess_[base + i] = g;
      const int copies = g <= deck_.n ? rem_[g] : 0;
      if (copies > 0) {
        yes_[base + i] = s;
        players_[i].observe(yes_[base + i], g, make_feedback(model_, g, g));
      }
      if (left - copies > 0) {
        const auto other = static_cast<Symbol>(g % deck_.n + 1);
        no_[base + i] = s;
        players_[i].observe(no_[base + i], g, make_feedback(model_, g, other));
      }
    }
    const std::size_t next = base + np_;
    const auto du = static_cast<std::size_t>(d);
    int lo = 1;
    int hi = deck_.n;
    if (du < prefix_.size()) lo = hi = prefix_[du];
    for (int x = lo; x <= hi; ++x) {
      if (rem_[static_cast<std::size_t>(x)] == 0) continue;
      --rem_[static_cast<std::size_t>(x)];
      for (std::size_t i = 0; i < np_; ++i) {
        const bool hit = guess_[base + i] == x;
        cur_[next + i] = hit ? &yes_[base + i] : &no_[base + i];
        score_[next + i] = score_[base + i] + (hit ? 1 : 0);
        first_hit_[next + i] = first_hit_[base + i] == 0 && hit ? d + 1 : first_hit_[base + i];
      }
      first_one_[du + 1] = first_one_[du] != 0 ? first_one_[du] : (x == 1 ? d + 1 : 0);
      descend(d + 1);
      ++rem_[static_cast<std::size_t>(x)];
    }
  }

  DeckSpec deck_;
  std::span<const Player> players_;
  FeedbackModel model_;
  int len_;
  std::size_t np_;
  std::vector<int> rem_;
  std::vector<StrategyState> root_;
  std::vector<StrategyState> yes_;
  std::vector<StrategyState> no_;
  std::vector<const StrategyState*> cur_;
  std::vector<int> score_;
  std::vector<int> first_hit_;
  std::vector<Symbol> guess_;
  std::vector<int> first_one_;
  std::vector<StrategyTally> tallies_;
  std::span<const Symbol> prefix_;
};

void collect_prefixes(int n, int depth, std::vector<int>& rem, std::vector<Symbol>& cur,
                      std::vector<std::vector<Symbol>>& out) {
  if (static_cast<int>(cur.size()) == depth) {
    out.push_back(cur);
    return;
  }
  for (int x = 1; x <= n; ++x) {
    if (rem[static_cast<std::size_t>(x)] == 0) continue;
    --rem[static_cast<std::size_t>(x)];
    cur.push_back(static_cast<Symbol>(x));
    collect_prefixes(n, depth, rem, cur, out);
    cur.pop_back();
    ++rem[static_cast<std::size_t>(x)];
  }
}

// Smallest set of equal-length prefixes giving every thread enough work.
std::vector<std::vector<Symbol>> split_prefixes(DeckSpec deck, std::size_t want) {
  std::vector<std::vector<Symbol>> out;
  for (int depth = 0; depth <= deck.length(); ++depth) {
    out.clear();
    std::vector<int> rem(static_cast<std::size_t>(deck.n) + 1, deck.m);
    std::vector<Symbol> cur;
    collect_prefixes(deck.n, depth, rem, cur, out);
    if (out.size() >= want) break;
  }
  return out;
}

void check_players(std::span<const Player> players, FeedbackModel model, DeckSpec deck) {
  for (const auto& p : players) {
    check_model(p.spec(), model);
    if (!(p.deck() == deck)) throw std::invalid_argument("player built for a different deck");
  }
}

}  // namespace

EnumerationResult enumerate_scores(DeckSpec deck, std::span<const Player> players,
                                   FeedbackModel model, double cap, int threads) {
  check_cap(deck, cap);
  check_players(players, model, deck);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const auto prefixes = split_prefixes(deck, static_cast<std::size_t>(nthreads) * 64);

  EnumerationResult result;
  result.deck = deck;
  result.tallies.resize(players.size());
  for (auto& t : result.tallies) t.resize(deck.length());

#pragma omp parallel num_threads(nthreads)
  {
    Walker walker(deck, players, model);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t i = 0; i < prefixes.size(); ++i) walker.run(prefixes[i]);
#pragma omp critical(cardguess_enum_merge)
    for (std::size_t i = 0; i < players.size(); ++i) result.tallies[i].merge(walker.tallies()[i]);
  }
  result.words = result.tallies.empty() ? deck_count(deck).convert_to<std::uint64_t>()
                                        : result.tallies.front().words();
  return result;
}

EnumerationResult enumerate_scores_serial(DeckSpec deck, std::span<const Player> players,
                                          FeedbackModel model, double cap) {
  check_players(players, model, deck);
  PermutationEnumerator it(deck, cap);
  EnumerationResult result;
  result.deck = deck;
  result.tallies.resize(players.size());
  for (auto& t : result.tallies) t.resize(deck.length());

  std::vector<Symbol> word;
  while (it.next(word)) {
    ++result.words;
    const auto q = static_cast<std::size_t>(std::find(word.begin(), word.end(), 1) - word.begin());
    for (std::size_t i = 0; i < players.size(); ++i) {
      const Player& player = players[i];
      StrategyState s = player.initial_state();
      int score = 0;
      int first_hit = 0;
      for (std::size_t t = 0; t < word.size(); ++t) {
        const Symbol g = player.next_guess(s);
        const bool hit = g == word[t];
        if (hit) {
          ++score;
          if (first_hit == 0) first_hit = static_cast<int>(t) + 1;
        }
        player.observe(s, g, make_feedback(model, g, word[t]));
      }
      auto& tally = result.tallies[i];
      ++tally.score_hist[static_cast<std::size_t>(score)];
      ++tally.first_correct_hist[static_cast<std::size_t>(first_hit)];
      ++tally.by_q[q][static_cast<std::size_t>(score)];
    }
  }
  return result;
}

}  // namespace cardguess
