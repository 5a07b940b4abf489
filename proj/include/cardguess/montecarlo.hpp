#pragma once

#include "cardguess/deck.hpp"
#include "cardguess/report.hpp"
#include "cardguess/strategy.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cardguess {

// Raw sums of one strategy's scores; exact, so merge order is irrelevant.
struct ScoreSums {
  std::uint64_t trials = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;

  void add(int score);
  void merge(const ScoreSums& o);
  double mean() const;
  double std_error() const;  // sample stddev / sqrt(trials)
  bool operator==(const ScoreSums&) const = default;
};

// Trial t shuffles with RngStream(seed, t) and breaks ties with a second
// stream derived from (seed, t), so every player in one call sees the same
// decks (common random numbers) and results do not depend on `threads`.
std::vector<ScoreSums> simulate_sums(DeckSpec deck, std::span<const Player> players,
                                     FeedbackModel model, std::uint64_t trials,
                                     std::uint64_t seed, int threads = 0);
// Single-threaded reference of simulate_sums.
std::vector<ScoreSums> simulate_sums_serial(DeckSpec deck, std::span<const Player> players,
                                            FeedbackModel model, std::uint64_t trials,
                                            std::uint64_t seed);

// Throws BudgetExceeded when the greedy posterior leaves the 128-bit range.
EvalReport simulate(DeckSpec deck, const StrategySpec& spec, FeedbackModel model,
                    std::uint64_t trials, std::uint64_t seed, int threads = 0,
                    Oracles oracles = {});

// One report per grid point, all on the same deck stream.
std::vector<EvalReport> sweep(DeckSpec deck, std::span<const StrategySpec> grid,
                              FeedbackModel model, std::uint64_t trials, std::uint64_t seed,
                              int threads = 0);

// Grid of a parametrized family: "gshift" / "linear" take the value as
// gamma / beta, "kgshift:K" takes gamma, "fixed" the symbol.
std::vector<StrategySpec> family_grid(std::string_view family, std::span<const Rational> values);

}  // namespace cardguess
