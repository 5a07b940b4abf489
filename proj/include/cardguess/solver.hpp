#pragma once

#include "cardguess/belief.hpp"
#include "cardguess/deck.hpp"
#include "cardguess/numeric.hpp"
#include "cardguess/report.hpp"
#include "cardguess/strategy.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <span>
#include <unordered_map>
#include <vector>

namespace cardguess {

struct SolverOptions {
  Arith arith = Arith::Exact;
  std::uint64_t max_states = 200'000'000;  // memo entries
  double max_millis = 0;                   // wall clock, 0 = unlimited
  double enumeration_cap = kDefaultEnumerationCap;
  int threads = 0;
};

struct U128Hash {
  std::size_t operator()(u128 v) const {
    const auto lo = static_cast<std::uint64_t>(v);
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    return static_cast<std::size_t>(mix64(lo ^ mix64(hi)));
  }
};

// Expectimax over canonical Yes/No belief states. Exact mode memoizes
// W(s) = count(s) * V(s), the total score summed over the completions
// consistent with s:
//   W(s) = opt_j [ count(s + yes_j) + W(s + yes_j) + W(s + no_j) ],
// which stays integral; V = W / |S_{m,n}|. A guess of an exhausted type is
// a legal action (it can only be answered "No").
//
// Also serves as the policy handle of the optimal strategy. Not
// thread-safe: queries extend the memo.
class OptimalSolver : public PolicyOracle {
 public:
  OptimalSolver(DeckSpec deck, Objective objective, SolverOptions options = {});
  ~OptimalSolver() override;

  // Throws BudgetExceeded (memo cap, wall clock, or 128-bit range).
  EvalReport solve();

  void best_guesses(std::span<const int> unconfirmed, std::span<const int> misses,
                    std::vector<Symbol>& out) const override;

  std::size_t states() const;

  // Memo spill file: a header naming (deck, objective, arithmetic) followed
  // by raw (key, value) records.
  void save_memo(const std::string& path) const;
  // False when the file is missing or belongs to a different solver.
  bool load_memo(const std::string& path);

  DeckSpec deck() const { return deck_; }
  Objective objective() const { return objective_; }

 private:
  struct Impl;
  DeckSpec deck_;
  Objective objective_;
  SolverOptions options_;
  std::unique_ptr<Impl> impl_;
};

EvalReport optimal_value(DeckSpec deck, Objective objective, SolverOptions options = {});

// Supplies the oracles a set of strategies needs, building (and solving)
// any the caller did not pass in.
class OracleSet {
 public:
  OracleSet(DeckSpec deck, std::span<const StrategySpec> specs, SolverOptions options = {},
            Oracles given = {});
  Oracles get(const StrategySpec& spec) const;

 private:
  Oracles given_;
  std::unique_ptr<PosteriorOracle> posterior_;
  std::unique_ptr<OptimalSolver> max_;
  std::unique_ptr<OptimalSolver> min_;
};

// Forward recursion for a strategy whose guess depends only on the belief
// counts (greedy, linear, optimal policy). Uniform tie-breaking averages
// over the tied guesses. Oracles are created internally when missing.
EvalReport policy_value(DeckSpec deck, const StrategySpec& spec, SolverOptions options = {},
                        Oracles oracles = {});
EvalReport greedy_value(DeckSpec deck, TieBreak ties = TieBreak::LowestIndex,
                        SolverOptions options = {});
EvalReport linear_value(DeckSpec deck, const Rational& beta, TieBreak ties = TieBreak::LowestIndex,
                        SolverOptions options = {});

// Exact mean over all of S_{m,n}. Uniform tie-breaks are averaged per word.
EvalReport exhaustive_value(DeckSpec deck, const StrategySpec& spec, FeedbackModel model,
                            SolverOptions options = {}, Oracles oracles = {});

EvalReport complete_feedback_optimal(DeckSpec deck);
EvalReport no_feedback_value(DeckSpec deck);

// Picks the cheapest exact method for (strategy, model).
EvalReport evaluate(DeckSpec deck, const StrategySpec& spec, FeedbackModel model,
                    SolverOptions options = {});

}  // namespace cardguess
