#include "cardguess/strategy.hpp"

#include "cardguess/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cardguess {

namespace {

// Phases shared by the (k,)gamma-shifting and halfway strategies.
enum Phase : int {
  kSeeking = 0,    // guessing "1" before the first hit / before halfway
  kSafePhase = 1,
  kShiftPhase = 2,
  kGiveUp = 3,     // repeat target for the rest of the game
  kLocked = 4,     // halfway decided / avoiding found its card
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string_view::npos ? text.npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

TieBreak parse_ties(std::string_view text) {
  if (text == "lowest") return TieBreak::LowestIndex;
  if (text == "uniform") return TieBreak::Uniform;
  throw std::invalid_argument("tie rule must be 'lowest' or 'uniform', got '" + std::string(text) + "'");
}

std::string ties_suffix(TieBreak t) { return t == TieBreak::Uniform ? ":uniform" : ""; }

int parse_int(std::string_view text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(std::string(text), &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
}

}  // namespace

std::string to_string(FeedbackModel model) {
  switch (model) {
    case FeedbackModel::None: return "none";
    case FeedbackModel::YesNo: return "yesno";
    case FeedbackModel::Complete: return "complete";
  }
  return "?";
}

FeedbackModel parse_feedback_model(std::string_view text) {
  if (text == "none" || text == "no") return FeedbackModel::None;
  if (text == "yesno" || text == "yes-no" || text == "yes/no") return FeedbackModel::YesNo;
  if (text == "complete") return FeedbackModel::Complete;
  throw std::invalid_argument("unknown feedback model '" + std::string(text) + "'");
}

StrategySpec StrategySpec::fixed(int symbol) {
  StrategySpec s;
  s.kind = StrategyKind::Fixed;
  s.symbol = symbol;
  return s;
}
StrategySpec StrategySpec::safe() { return StrategySpec{}; }
StrategySpec StrategySpec::shifting() {
  StrategySpec s;
  s.kind = StrategyKind::Shifting;
  return s;
}
StrategySpec StrategySpec::gamma_shifting(Rational gamma) {
  StrategySpec s;
  s.kind = StrategyKind::GammaShifting;
  s.gamma = std::move(gamma);
  return s;
}
StrategySpec StrategySpec::k_gamma_shifting(int k, Rational gamma) {
  StrategySpec s;
  s.kind = StrategyKind::KGammaShifting;
  s.k = k;
  s.gamma = std::move(gamma);
  return s;
}
StrategySpec StrategySpec::halfway_plus() {
  StrategySpec s;
  s.kind = StrategyKind::HalfwayPlus;
  return s;
}
StrategySpec StrategySpec::halfway_minus() {
  StrategySpec s;
  s.kind = StrategyKind::HalfwayMinus;
  return s;
}
StrategySpec StrategySpec::star_halfway_plus() {
  StrategySpec s;
  s.kind = StrategyKind::StarHalfwayPlus;
  return s;
}
StrategySpec StrategySpec::star_halfway_minus() {
  StrategySpec s;
  s.kind = StrategyKind::StarHalfwayMinus;
  return s;
}
StrategySpec StrategySpec::avoiding() {
  StrategySpec s;
  s.kind = StrategyKind::Avoiding;
  return s;
}
StrategySpec StrategySpec::linear(Rational beta, TieBreak ties) {
  StrategySpec s;
  s.kind = StrategyKind::Linear;
  s.beta = std::move(beta);
  s.ties = ties;
  return s;
}
StrategySpec StrategySpec::greedy(TieBreak ties) {
  StrategySpec s;
  s.kind = StrategyKind::Greedy;
  s.ties = ties;
  return s;
}
StrategySpec StrategySpec::optimal(Objective objective) {
  StrategySpec s;
  s.kind = StrategyKind::OptimalPolicy;
  s.objective = objective;
  return s;
}

StrategySpec StrategySpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  const auto head = parts[0];
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw std::invalid_argument("wrong number of parameters in strategy '" + std::string(text) + "'");
    }
  };
  if (head == "safe") { need(1, 1); return safe(); }
  if (head == "shift") { need(1, 1); return shifting(); }
  if (head == "gshift") { need(2, 2); return gamma_shifting(parse_rational(parts[1])); }
  if (head == "kgshift") { need(3, 3); return k_gamma_shifting(parse_int(parts[1]), parse_rational(parts[2])); }
  if (head == "half+") { need(1, 1); return halfway_plus(); }
  if (head == "half-") { need(1, 1); return halfway_minus(); }
  if (head == "half*+") { need(1, 1); return star_halfway_plus(); }
  if (head == "half*-") { need(1, 1); return star_halfway_minus(); }
  if (head == "avoid") { need(1, 1); return avoiding(); }
  if (head == "linear") {
    need(2, 3);
    return linear(parse_rational(parts[1]), parts.size() == 3 ? parse_ties(parts[2]) : TieBreak::LowestIndex);
  }
  if (head == "greedy") {
    need(1, 2);
    return greedy(parts.size() == 2 ? parse_ties(parts[1]) : TieBreak::LowestIndex);
  }
  if (head == "opt") {
    need(2, 2);
    if (parts[1] == "max") return optimal(Objective::Max);
    if (parts[1] == "min") return optimal(Objective::Min);
    throw std::invalid_argument("opt objective must be max or min");
  }
  if (head == "fixed") { need(2, 2); return fixed(parse_int(parts[1])); }
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

std::string StrategySpec::to_string() const {
  switch (kind) {
    case StrategyKind::Fixed: return "fixed:" + std::to_string(symbol);
    case StrategyKind::Safe: return "safe";
    case StrategyKind::Shifting: return "shift";
    case StrategyKind::GammaShifting: return "gshift:" + format_fraction(gamma);
    case StrategyKind::KGammaShifting: return "kgshift:" + std::to_string(k) + ":" + format_fraction(gamma);
    case StrategyKind::HalfwayPlus: return "half+";
    case StrategyKind::HalfwayMinus: return "half-";
    case StrategyKind::StarHalfwayPlus: return "half*+";
    case StrategyKind::StarHalfwayMinus: return "half*-";
    case StrategyKind::Avoiding: return "avoid";
    case StrategyKind::Linear: return "linear:" + format_fraction(beta) + ties_suffix(ties);
    case StrategyKind::Greedy: return "greedy" + ties_suffix(ties);
    case StrategyKind::OptimalPolicy: return objective == Objective::Max ? "opt:max" : "opt:min";
  }
  return "?";
}

void StrategySpec::validate(DeckSpec deck) const {
  if (kind == StrategyKind::Fixed && (symbol < 1 || symbol > deck.n)) {
    throw std::invalid_argument("fixed symbol outside 1..n");
  }
  if ((kind == StrategyKind::GammaShifting || kind == StrategyKind::KGammaShifting) &&
      (gamma < 0 || gamma > 1)) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }
  if (kind == StrategyKind::KGammaShifting && (k < 1 || k > deck.n)) {
    throw std::invalid_argument("kgshift needs 1 <= k <= n");
  }
  if (kind == StrategyKind::Linear && beta < 0) {
    throw std::invalid_argument("linear beta must be >= 0");
  }
}

Feedback make_feedback(FeedbackModel model, Symbol guess, Symbol card) {
  Feedback fb;
  fb.model = model;
  if (model != FeedbackModel::None) fb.correct = guess == card;
  if (model == FeedbackModel::Complete) fb.revealed = card;
  return fb;
}

void check_model(const StrategySpec& spec, FeedbackModel model) {
  if ((spec.needs_posterior() || spec.needs_policy()) && model != FeedbackModel::YesNo) {
    throw IncompatibleModel(spec.to_string() + " is defined for Yes/No feedback only");
  }
}

Player::Player(StrategySpec spec, DeckSpec deck, Oracles oracles)
    : spec_(std::move(spec)), deck_(deck), oracles_(oracles) {
  spec_.validate(deck_);
  if (spec_.needs_posterior() && oracles_.posterior == nullptr) {
    throw MissingOracle("greedy strategy needs a posterior oracle");
  }
  if (spec_.needs_policy() && oracles_.policy == nullptr) {
    throw MissingOracle("optimal policy needs a solver policy handle");
  }
  switch (spec_.kind) {
    case StrategyKind::Shifting:
    case StrategyKind::GammaShifting:
    case StrategyKind::Linear:
    case StrategyKind::Greedy:
    case StrategyKind::OptimalPolicy:
      keeps_arrays_ = true;
      break;
    default:
      break;
  }
  // The plain halfway strategies decide after ceil(mn/2) - 1 guesses, the
  // starred variants after floor(mn/2).
  const bool starred = spec_.kind == StrategyKind::StarHalfwayPlus ||
                       spec_.kind == StrategyKind::StarHalfwayMinus;
  halfway_ = starred ? deck_.length() / 2 : (deck_.length() - 1) / 2;
}

StrategyState Player::initial_state() const {
  StrategyState s;
  if (spec_.kind == StrategyKind::Fixed) s.target = spec_.symbol;
  if (keeps_arrays_) {
    s.confirmed.assign(static_cast<std::size_t>(deck_.n), 0);
    s.misses.assign(static_cast<std::size_t>(deck_.n), 0);
  }
  return s;
}

Symbol Player::scalar_guess(const StrategyState& s) const {
  return static_cast<Symbol>(s.target);
}

void Player::candidates(const StrategyState& s, std::vector<Symbol>& out) const {
  out.clear();
  const int m = deck_.m;
  const int n = deck_.n;
  switch (spec_.kind) {
    case StrategyKind::Linear: {
      // argmax of c_i + beta g_i over c_i > 0, compared exactly:
      // c*den + num*g with beta = num/den.
      const BigInt num = boost::multiprecision::numerator(spec_.beta);
      const BigInt den = boost::multiprecision::denominator(spec_.beta);
      BigInt best = -1;
      for (int i = 0; i < n; ++i) {
        const int c = m - s.confirmed[static_cast<std::size_t>(i)];
        if (c <= 0) continue;
        const BigInt score = c * den + num * s.misses[static_cast<std::size_t>(i)];
        if (score > best) {
          best = score;
          out.clear();
        }
        if (score == best) out.push_back(static_cast<Symbol>(i + 1));
      }
      if (out.empty()) out.push_back(static_cast<Symbol>(s.target));
      return;
    }
    case StrategyKind::Greedy: {
      std::vector<int> c(static_cast<std::size_t>(n));
      std::vector<int> g(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        c[static_cast<std::size_t>(i)] = m - s.confirmed[static_cast<std::size_t>(i)];
        g[static_cast<std::size_t>(i)] = s.misses[static_cast<std::size_t>(i)];
      }
      if (std::accumulate(c.begin(), c.end(), 0) - std::accumulate(g.begin(), g.end(), 0) <= 0) {
        out.push_back(1);
        return;
      }
      const auto w = oracles_.posterior->next_card_weights(c, g);
      u128 best = 0;
      for (int i = 0; i < n; ++i) {
        const u128 wi = w[static_cast<std::size_t>(i)];
        if (wi > best) {
          best = wi;
          out.clear();
        }
        if (wi == best && wi > 0) out.push_back(static_cast<Symbol>(i + 1));
      }
      if (out.empty()) out.push_back(1);
      return;
    }
    case StrategyKind::OptimalPolicy: {
      std::vector<int> c(static_cast<std::size_t>(n));
      std::vector<int> g(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        c[static_cast<std::size_t>(i)] = m - s.confirmed[static_cast<std::size_t>(i)];
        g[static_cast<std::size_t>(i)] = s.misses[static_cast<std::size_t>(i)];
      }
      oracles_.policy->best_guesses(c, g, out);
      if (out.empty()) out.push_back(1);
      return;
    }
    default:
      out.push_back(scalar_guess(s));
      return;
  }
}

Symbol Player::next_guess(const StrategyState& s, RngStream* rng) const {
  if (!spec_.is_belief_policy()) return scalar_guess(s);
  std::vector<Symbol> tied;
  candidates(s, tied);
  if (tied.size() > 1 && spec_.has_ties() && spec_.ties == TieBreak::Uniform && rng != nullptr) {
    return tied[static_cast<std::size_t>(rng->below(tied.size()))];
  }
  return tied.front();
}

void Player::advance_shift(StrategyState& s) const {
  // Next type in the cycle 1..n that still has unconfirmed copies.
  int next = s.target;
  for (int step = 0; step < deck_.n; ++step) {
    next = next % deck_.n + 1;
    if (s.confirmed[static_cast<std::size_t>(next - 1)] < deck_.m) {
      s.target = next;
      return;
    }
  }
}

void Player::observe(StrategyState& s, Symbol guess, const Feedback& fb) const {
  ++s.trial;
  if (!fb.knows_outcome()) {
    // No information: only the halfway clock moves.
    on_outcome(s, guess, false);
    return;
  }
  const bool correct = fb.model == FeedbackModel::Complete ? fb.revealed == guess : fb.correct;
  if (correct) ++s.correct;
  if (keeps_arrays_) {
    auto& slot = correct ? s.confirmed[guess - 1u] : s.misses[guess - 1u];
    if (slot < 255) ++slot;
  }
  on_outcome(s, guess, correct);
}

void Player::on_outcome(StrategyState& s, Symbol guess, bool correct) const {
  const int m = deck_.m;
  const int n = deck_.n;
  switch (spec_.kind) {
    case StrategyKind::Fixed:
    case StrategyKind::Linear:
    case StrategyKind::Greedy:
    case StrategyKind::OptimalPolicy:
      return;

    case StrategyKind::Safe:
      if (correct && ++s.target_hits == m && s.target < n) {
        ++s.target;
        s.target_hits = 0;
      }
      return;

    case StrategyKind::Shifting:
      if (correct) advance_shift(s);
      return;

    case StrategyKind::GammaShifting:
      if (!correct) return;
      if (s.phase == kSeeking) {
        // First hit on "1" after t - 1 misses: safe iff t - 1 >= gamma * mn.
        const bool late = Rational(s.trial - 1) >= spec_.gamma * deck_.length();
        s.phase = late ? kSafePhase : kShiftPhase;
        if (late) {
          s.target_hits = 1;
          if (m == 1 && s.target < n) {
            ++s.target;
            s.target_hits = 0;
          }
        } else {
          advance_shift(s);
        }
      } else if (s.phase == kSafePhase) {
        if (++s.target_hits == m && s.target < n) {
          ++s.target;
          s.target_hits = 0;
        }
      } else {
        advance_shift(s);
      }
      return;

    case StrategyKind::KGammaShifting: {
      if (!correct) return;
      const int k = spec_.k;
      if (s.phase == kSeeking) {
        const bool late = Rational(s.trial) >= spec_.gamma * deck_.length();
        s.phase = late ? kSafePhase : kShiftPhase;
      }
      if (s.phase == kShiftPhase) {
        // Cycle 1..k; the m-th hit on k ends the scoring attempts.
        if (s.target == k && ++s.target_hits == m) {
          s.phase = kGiveUp;
          return;
        }
        s.target = s.target % k + 1;
      } else if (s.phase == kSafePhase) {
        if (++s.target_hits == m) {
          if (s.target == k) {
            s.phase = kGiveUp;
          } else {
            ++s.target;
            s.target_hits = 0;
          }
        }
      }
      return;
    }

    case StrategyKind::HalfwayPlus:
    case StrategyKind::HalfwayMinus:
    case StrategyKind::StarHalfwayPlus:
    case StrategyKind::StarHalfwayMinus: {
      if (s.phase != kSeeking || s.trial != halfway_) return;
      s.phase = kLocked;
      const int hits = s.correct;
      const int up = 2 * hits - m;    // 2K - m
      const int down = m - 2 * hits;  // m - 2K
      bool switch_to_two = false;
      switch (spec_.kind) {
        case StrategyKind::HalfwayPlus: switch_to_two = up > 0; break;
        case StrategyKind::HalfwayMinus: switch_to_two = up < 0; break;
        // K >= m/2 + sqrt(m)/2  <=>  2K - m >= sqrt(m)
        case StrategyKind::StarHalfwayPlus: switch_to_two = up >= 0 && up * up >= m; break;
        // K <= m/2 - sqrt(m)/2  <=>  m - 2K >= sqrt(m)
        case StrategyKind::StarHalfwayMinus: switch_to_two = down >= 0 && down * down >= m; break;
        default: break;
      }
      if (switch_to_two && n >= 2) s.target = 2;
      return;
    }

    case StrategyKind::Avoiding:
      if (s.phase == kLocked) return;
      if (correct) {
        s.phase = kLocked;
      } else {
        s.target = s.target % n + 1;
      }
      return;
  }
  (void)guess;
}

int play_score(const Player& player, std::span<const Symbol> word, FeedbackModel model,
               RngStream* tie_rng) {
  StrategyState s = player.initial_state();
  int score = 0;
  for (Symbol card : word) {
    const Symbol guess = player.next_guess(s, tie_rng);
    if (guess == card) ++score;
    player.observe(s, guess, make_feedback(model, guess, card));
  }
  return score;
}

PlayTrace play(const StrategySpec& spec, const Permutation& p, FeedbackModel model,
               Oracles oracles, RngStream* tie_rng) {
  check_model(spec, model);
  const Player player(spec, p.spec(), oracles);
  StrategyState s = player.initial_state();
  PlayTrace trace;
  trace.steps.reserve(p.size());
  for (Symbol card : p.word()) {
    const Symbol guess = player.next_guess(s, tie_rng);
    const Feedback fb = make_feedback(model, guess, card);
    trace.steps.push_back(TraceStep{guess, fb, guess == card});
    if (guess == card) ++trace.score;
    player.observe(s, guess, fb);
  }
  return trace;
}

FGScores score_fg(int k, const Permutation& sigma) {
  if (k != sigma.spec().n) throw std::invalid_argument("score_fg needs sigma in S_{m,k}");
  const Player shifting(StrategySpec::k_gamma_shifting(k, 1), sigma.spec());
  const Player safe(StrategySpec::k_gamma_shifting(k, 0), sigma.spec());
  return FGScores{play_score(shifting, sigma.word(), FeedbackModel::YesNo),
                  play_score(safe, sigma.word(), FeedbackModel::YesNo)};
}

}  // namespace cardguess
