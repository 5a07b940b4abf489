#pragma once

#include "cardguess/belief.hpp"
#include "cardguess/deck.hpp"
#include "cardguess/numeric.hpp"
#include "cardguess/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cardguess {

enum class FeedbackModel { None, YesNo, Complete };

std::string to_string(FeedbackModel model);
FeedbackModel parse_feedback_model(std::string_view text);

enum class StrategyKind {
  Fixed,
  Safe,
  Shifting,
  GammaShifting,
  KGammaShifting,
  HalfwayPlus,
  HalfwayMinus,
  StarHalfwayPlus,
  StarHalfwayMinus,
  Avoiding,
  Linear,
  Greedy,
  OptimalPolicy,
};

enum class Objective { Max, Min };
enum class TieBreak { LowestIndex, Uniform };

struct StrategySpec {
  StrategyKind kind = StrategyKind::Safe;
  int symbol = 1;          // Fixed
  Rational gamma = 0;      // GammaShifting, KGammaShifting; in [0, 1]
  int k = 0;               // KGammaShifting
  Rational beta = 0;       // Linear
  Objective objective = Objective::Max;  // OptimalPolicy
  TieBreak ties = TieBreak::LowestIndex;  // Linear, Greedy

  static StrategySpec fixed(int symbol);
  static StrategySpec safe();
  static StrategySpec shifting();
  static StrategySpec gamma_shifting(Rational gamma);
  static StrategySpec k_gamma_shifting(int k, Rational gamma);
  static StrategySpec halfway_plus();
  static StrategySpec halfway_minus();
  static StrategySpec star_halfway_plus();
  static StrategySpec star_halfway_minus();
  static StrategySpec avoiding();
  static StrategySpec linear(Rational beta, TieBreak ties = TieBreak::LowestIndex);
  static StrategySpec greedy(TieBreak ties = TieBreak::LowestIndex);
  static StrategySpec optimal(Objective objective);

  // Compact CLI form: safe, shift, gshift:0.3, kgshift:6:0.35, half+, half-,
  // half*+, half*-, avoid, linear:0.51, greedy, opt:max, opt:min, fixed:1.
  // Greedy and linear accept a trailing ":uniform" / ":lowest" tie rule.
  static StrategySpec parse(std::string_view text);
  std::string to_string() const;

  bool needs_posterior() const { return kind == StrategyKind::Greedy; }
  bool needs_policy() const { return kind == StrategyKind::OptimalPolicy; }
  bool has_ties() const {
    return kind == StrategyKind::Greedy || kind == StrategyKind::Linear;
  }
  // True when the guess depends on nothing but the (c, g) belief counts.
  bool is_belief_policy() const {
    return kind == StrategyKind::Greedy || kind == StrategyKind::Linear ||
           kind == StrategyKind::OptimalPolicy;
  }
  // Throws std::invalid_argument on out-of-range parameters.
  void validate(DeckSpec deck) const;

  bool operator==(const StrategySpec&) const = default;
};

// Optimal-policy lookup provided by the solver.
class PolicyOracle {
 public:
  virtual ~PolicyOracle() = default;
  // All labels achieving the optimal value from (c, g), ascending.
  virtual void best_guesses(std::span<const int> unconfirmed, std::span<const int> misses,
                            std::vector<Symbol>& out) const = 0;
};

struct Oracles {
  PosteriorOracle* posterior = nullptr;
  const PolicyOracle* policy = nullptr;
};

// What the player is told after a guess.
struct Feedback {
  FeedbackModel model = FeedbackModel::YesNo;
  bool correct = false;   // YesNo, Complete
  Symbol revealed = 0;    // Complete

  bool knows_outcome() const { return model != FeedbackModel::None; }
};

Feedback make_feedback(FeedbackModel model, Symbol guess, Symbol card);

// Strategy memory. The per-type arrays are only kept by strategies that
// read them (shifting family and belief policies).
struct StrategyState {
  int trial = 0;        // guesses made so far
  int target = 1;
  int phase = 0;
  int correct = 0;
  int target_hits = 0;
  std::vector<std::uint8_t> confirmed;  // "Yes" answers per type
  std::vector<std::uint8_t> misses;     // "No" answers per type
};

struct TraceStep {
  Symbol guess = 0;
  Feedback feedback;
  bool correct = false;
};

struct PlayTrace {
  std::vector<TraceStep> steps;
  int score = 0;
};

// Runs one strategy on one deck. Cheap to copy; holds non-owning oracle
// pointers.
class Player {
 public:
  // Throws MissingOracle when greedy / optimal-policy lack their oracle.
  Player(StrategySpec spec, DeckSpec deck, Oracles oracles = {});

  const StrategySpec& spec() const { return spec_; }
  const DeckSpec& deck() const { return deck_; }

  StrategyState initial_state() const;

  // Every guess the strategy could make next (ties), ascending.
  void candidates(const StrategyState& s, std::vector<Symbol>& out) const;
  // Lowest-index pick for deterministic evaluation; `rng` breaks ties
  // uniformly when the spec asks for it.
  Symbol next_guess(const StrategyState& s, RngStream* rng = nullptr) const;

  void observe(StrategyState& s, Symbol guess, const Feedback& fb) const;

 private:
  Symbol scalar_guess(const StrategyState& s) const;
  void on_outcome(StrategyState& s, Symbol guess, bool correct) const;
  void advance_shift(StrategyState& s) const;

  StrategySpec spec_;
  DeckSpec deck_;
  Oracles oracles_;
  bool keeps_arrays_ = false;
  int halfway_ = 0;
};

// Requires greedy / optimal-policy to run under YesNo (IncompatibleModel).
void check_model(const StrategySpec& spec, FeedbackModel model);

PlayTrace play(const StrategySpec& spec, const Permutation& p, FeedbackModel model,
               Oracles oracles = {}, RngStream* tie_rng = nullptr);
int play_score(const Player& player, std::span<const Symbol> word, FeedbackModel model,
               RngStream* tie_rng = nullptr);

struct FGScores {
  int shifting = 0;  // F_k
  int safe = 0;      // G_k
  bool operator==(const FGScores&) const = default;
};

// F_k and G_k of sigma in S_{m,k}: scores of the modified shifting and
// modified safe continuations used by the (k, gamma)-shifting strategy.
FGScores score_fg(int k, const Permutation& sigma);

}  // namespace cardguess
