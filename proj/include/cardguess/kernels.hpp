#pragma once

#include "cardguess/deck.hpp"
#include "cardguess/numeric.hpp"
#include "cardguess/strategy.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cardguess {

// Per-strategy counts gathered over a full enumeration of S_{m,n}.
struct StrategyTally {
  // [score] -> number of words.
  std::vector<std::uint64_t> score_hist;
  // [trial of first correct guess], index 0 = never correct.
  std::vector<std::uint64_t> first_correct_hist;
  // [q][score] where q = (index of leftmost "1") - 1.
  std::vector<std::vector<std::uint64_t>> by_q;

  void resize(int length);
  void merge(const StrategyTally& other);
  std::uint64_t words() const;
  Rational mean() const;
  bool operator==(const StrategyTally&) const = default;
};

struct EnumerationResult {
  DeckSpec deck;
  std::uint64_t words = 0;
  std::vector<StrategyTally> tallies;  // one per player, same order
};

// Plays every player on every word of S_{m,n} with a depth-first walk over
// shared prefixes: each strategy state is advanced once per prefix instead
// of once per word. Prefixes are split across OpenMP threads (`threads` = 0
// uses the runtime default). Integer tallies make the result independent
// of the thread count. Throws CapExceeded beyond `cap` words.
//
// Strategies only consume the correctness of a guess, so one "yes" and one
// "no" successor per prefix covers every model.
EnumerationResult enumerate_scores(DeckSpec deck, std::span<const Player> players,
                                   FeedbackModel model, double cap = kDefaultEnumerationCap,
                                   int threads = 0);

// Reference implementation: next_permutation plus play_score per word.
EnumerationResult enumerate_scores_serial(DeckSpec deck, std::span<const Player> players,
                                          FeedbackModel model,
                                          double cap = kDefaultEnumerationCap);

}  // namespace cardguess
