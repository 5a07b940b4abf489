#include "cardguess/solver.hpp"

#include "cardguess/errors.hpp"
#include "cardguess/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <type_traits>

namespace cardguess {

namespace {

using Clock = std::chrono::steady_clock;
using Pairs = std::vector<PackedPair>;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int bits_for(int v) { return static_cast<int>(std::bit_width(static_cast<unsigned>(v))); }

u128 count_or_budget(std::span<const PackedPair> pairs, std::uint64_t states, double ms) {
  auto c = count_completions_u128(pairs);
  if (!c) throw BudgetExceeded("completion counts leave the 128-bit range", states, ms);
  return *c;
}

Pairs live_pairs_of(std::span<const int> c, std::span<const int> g) {
  Pairs p;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > 0) p.push_back(pack_pair(c[i], g[i]));
  }
  std::sort(p.begin(), p.end());
  return p;
}

// Guards shared by the memoized recursions.
class Budget {
 public:
  explicit Budget(const SolverOptions& o) : options_(o), start_(Clock::now()) {}

  void check(std::size_t states) {
    if (states >= options_.max_states) {
      throw BudgetExceeded("memo budget of " + std::to_string(options_.max_states) +
                               " states exhausted",
                           states, millis_since(start_));
    }
    if (options_.max_millis > 0 && (++ticks_ & 0x3FFF) == 0 &&
        millis_since(start_) > options_.max_millis) {
      throw BudgetExceeded("wall-clock budget exhausted", states, millis_since(start_));
    }
  }
  double elapsed() const { return millis_since(start_); }

 private:
  SolverOptions options_;
  Clock::time_point start_;
  std::uint64_t ticks_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Expectimax

struct OptimalSolver::Impl {
  Impl(DeckSpec d, Objective o, const SolverOptions& opts)
      : deck(d), maximize(o == Objective::Max), budget(opts) {
    cb = bits_for(deck.m);
    gb = bits_for(deck.length());
    if (1 + deck.n * (cb + gb) + gb > 128) {
      throw BudgetExceeded("canonical state key wider than 128 bits", 0, 0.0);
    }
  }

  u128 key(const Pairs& p, int f) const {
    u128 k = 1;
    for (PackedPair x : p) k = (k << (cb + gb)) | (static_cast<u128>(pair_c(x)) << gb) | pair_g(x);
    return (k << gb) | static_cast<u128>(f);
  }

  std::size_t states() const { return std::max(exact.size(), approx.size()); }

  bool better(u128 a, u128 b) const { return maximize ? a > b : a < b; }
  bool better(double a, double b) const { return maximize ? a > b : a < b; }

  static Pairs yes_child(const Pairs& p, std::size_t i) {
    Pairs y = p;
    const int c = pair_c(p[i]);
    if (c == 1) {
      y.erase(y.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      y[i] = pack_pair(c - 1, pair_g(p[i]));
      std::sort(y.begin(), y.end());
    }
    return y;
  }
  static Pairs no_child(const Pairs& p, std::size_t i) {
    Pairs q = p;
    q[i] = pack_pair(pair_c(p[i]), pair_g(p[i]) + 1);
    std::sort(q.begin(), q.end());
    return q;
  }

  u128 child_count(const Pairs& p) {
    return count_or_budget(p, states(), budget.elapsed());
  }

  // Value of guessing a type of class p[i] (exact W units).
  u128 action_exact(const Pairs& p, int f, u128 count, std::size_t i) {
    const Pairs y = yes_child(p, i);
    const u128 cy = child_count(y);
    const u128 cn = count - cy;
    u128 v = cy;
    if (cy > 0) v += w(y, f - 1, cy);
    if (cn > 0) v += w(no_child(p, i), f - 1, cn);
    return v;
  }

  u128 w(const Pairs& p, int f, u128 count) {
    if (f == 0 || count == 0) return 0;
    const u128 k = key(p, f);
    if (auto it = exact.find(k); it != exact.end()) return it->second;
    budget.check(exact.size());
    bool have = false;
    u128 best = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0 && p[i] == p[i - 1]) continue;
      const u128 v = action_exact(p, f, count, i);
      if (!have || better(v, best)) best = v;
      have = true;
    }
    if (static_cast<int>(p.size()) < deck.n) {
      const u128 v = w(p, f - 1, count);
      if (!have || better(v, best)) best = v;
    }
    exact.emplace(k, best);
    return best;
  }

  double action_float(const Pairs& p, int f, u128 count, std::size_t i) {
    const Pairs y = yes_child(p, i);
    const u128 cy = child_count(y);
    const u128 cn = count - cy;
    const double py = static_cast<double>(cy) / static_cast<double>(count);
    double v = 0;
    if (cy > 0) v += py * (1.0 + val(y, f - 1, cy));
    if (cn > 0) v += (1.0 - py) * val(no_child(p, i), f - 1, cn);
    return v;
  }

  double val(const Pairs& p, int f, u128 count) {
    if (f == 0 || count == 0) return 0;
    const u128 k = key(p, f);
    if (auto it = approx.find(k); it != approx.end()) return it->second;
    budget.check(approx.size());
    bool have = false;
    double best = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0 && p[i] == p[i - 1]) continue;
      const double v = action_float(p, f, count, i);
      if (!have || better(v, best)) best = v;
      have = true;
    }
    if (static_cast<int>(p.size()) < deck.n) {
      const double v = val(p, f - 1, count);
      if (!have || better(v, best)) best = v;
    }
    approx.emplace(k, best);
    return best;
  }

  DeckSpec deck;
  bool maximize;
  Budget budget;
  int cb = 0;
  int gb = 0;
  bool float_mode = false;
  std::unordered_map<u128, u128, U128Hash> exact;
  std::unordered_map<u128, double, U128Hash> approx;
};

OptimalSolver::OptimalSolver(DeckSpec deck, Objective objective, SolverOptions options)
    : deck_(deck),
      objective_(objective),
      options_(options),
      impl_(std::make_unique<Impl>(deck, objective, options)) {
  impl_->float_mode = options.arith == Arith::Float;
}

OptimalSolver::~OptimalSolver() = default;

std::size_t OptimalSolver::states() const { return impl_->states(); }

namespace {

struct MemoHeader {
  char magic[8] = {'c', 'g', 'm', 'e', 'm', 'o', '0', '1'};
  std::int32_t m = 0;
  std::int32_t n = 0;
  std::int32_t maximize = 0;
  std::int32_t float_mode = 0;
  std::uint64_t records = 0;
};

template <class V>
void write_map(std::ofstream& out, const std::unordered_map<u128, V, U128Hash>& map) {
  for (const auto& [k, v] : map) {
    out.write(reinterpret_cast<const char*>(&k), sizeof k);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
}

template <class V>
void read_map(std::ifstream& in, std::uint64_t records, std::unordered_map<u128, V, U128Hash>& map) {
  map.reserve(map.size() + records);
  for (std::uint64_t i = 0; i < records; ++i) {
    u128 k = 0;
    V v{};
    in.read(reinterpret_cast<char*>(&k), sizeof k);
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("truncated memo file");
    map.emplace(k, v);
  }
}

}  // namespace

void OptimalSolver::save_memo(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write memo file " + path);
  MemoHeader h;
  h.m = deck_.m;
  h.n = deck_.n;
  h.maximize = impl_->maximize ? 1 : 0;
  h.float_mode = impl_->float_mode ? 1 : 0;
  h.records = impl_->float_mode ? impl_->approx.size() : impl_->exact.size();
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  if (impl_->float_mode) {
    write_map(out, impl_->approx);
  } else {
    write_map(out, impl_->exact);
  }
  if (!out) throw std::runtime_error("failed writing memo file " + path);
}

bool OptimalSolver::load_memo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  MemoHeader h;
  const MemoHeader expect;
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || !std::equal(std::begin(h.magic), std::end(h.magic), std::begin(expect.magic)) ||
      h.m != deck_.m || h.n != deck_.n || h.maximize != (impl_->maximize ? 1 : 0) ||
      h.float_mode != (impl_->float_mode ? 1 : 0)) {
    return false;
  }
  if (impl_->float_mode) {
    read_map(in, h.records, impl_->approx);
  } else {
    read_map(in, h.records, impl_->exact);
  }
  return true;
}

EvalReport OptimalSolver::solve() {
  const auto t0 = Clock::now();
  const Pairs start(static_cast<std::size_t>(deck_.n), pack_pair(deck_.m, 0));
  const u128 total = impl_->child_count(start);
  EvalReport r;
  r.deck = deck_;
  r.strategy = StrategySpec::optimal(objective_).to_string();
  r.model = FeedbackModel::YesNo;
  r.method = Method::Expectimax;
  r.arith = options_.arith;
  if (impl_->float_mode) {
    r.value = impl_->val(start, deck_.length(), total);
  } else {
    const u128 w = impl_->w(start, deck_.length(), total);
    r.exact = Rational(to_bigint(w), to_bigint(total));
    r.value = to_double(*r.exact);
  }
  r.nodes = impl_->states();
  r.runtime_ms = millis_since(t0);
  return r;
}

void OptimalSolver::best_guesses(std::span<const int> unconfirmed, std::span<const int> misses,
                                 std::vector<Symbol>& out) const {
  out.clear();
  Impl& s = *impl_;
  const Pairs p = live_pairs_of(unconfirmed, misses);
  const int f = std::accumulate(unconfirmed.begin(), unconfirmed.end(), 0) -
                std::accumulate(misses.begin(), misses.end(), 0);
  if (f <= 0) {
    out.push_back(1);
    return;
  }
  const u128 count = s.child_count(p);
  const auto n = unconfirmed.size();
  auto class_index = [&](std::size_t label) {
    const PackedPair x = pack_pair(unconfirmed[label], misses[label]);
    return static_cast<std::size_t>(std::lower_bound(p.begin(), p.end(), x) - p.begin());
  };
  if (s.float_mode) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = unconfirmed[i] > 0 ? s.action_float(p, f, count, class_index(i))
                                : s.val(p, f - 1, count);
    }
    const double best = s.maximize ? *std::max_element(v.begin(), v.end())
                                   : *std::min_element(v.begin(), v.end());
    const double slack = 1e-10 * std::max(1.0, std::abs(best));
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v[i] - best) <= slack) out.push_back(static_cast<Symbol>(i + 1));
    }
    return;
  }
  std::vector<u128> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = unconfirmed[i] > 0 ? s.action_exact(p, f, count, class_index(i)) : s.w(p, f - 1, count);
  }
  const u128 best = s.maximize ? *std::max_element(v.begin(), v.end())
                               : *std::min_element(v.begin(), v.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == best) out.push_back(static_cast<Symbol>(i + 1));
  }
}

EvalReport optimal_value(DeckSpec deck, Objective objective, SolverOptions options) {
  OptimalSolver solver(deck, objective, options);
  return solver.solve();
}

OracleSet::OracleSet(DeckSpec deck, std::span<const StrategySpec> specs, SolverOptions options,
                     Oracles given)
    : given_(given) {
  for (const auto& spec : specs) {
    if (spec.needs_posterior() && given_.posterior == nullptr && !posterior_) {
      posterior_ = std::make_unique<PosteriorOracle>();
    }
    if (spec.needs_policy() && given_.policy == nullptr) {
      auto& slot = spec.objective == Objective::Max ? max_ : min_;
      if (!slot) {
        slot = std::make_unique<OptimalSolver>(deck, spec.objective, options);
        slot->solve();
      }
    }
  }
}

Oracles OracleSet::get(const StrategySpec& spec) const {
  Oracles o = given_;
  if (o.posterior == nullptr) o.posterior = posterior_.get();
  if (o.policy == nullptr) o.policy = spec.objective == Objective::Max ? max_.get() : min_.get();
  return o;
}

// ---------------------------------------------------------------------------
// Belief-policy forward recursion over labeled states.

namespace {

template <class V>
class PolicyDP {
 public:
  PolicyDP(DeckSpec deck, const Player& player, const SolverOptions& options)
      : deck_(deck), player_(player), budget_(options), state_(player.initial_state()) {
    cb_ = bits_for(deck.m);
    gb_ = bits_for(deck.length());
    if (deck.n * (cb_ + gb_) > 128) {
      throw BudgetExceeded("labeled state key wider than 128 bits", 0, 0.0);
    }
    uniform_ = player.spec().has_ties() && player.spec().ties == TieBreak::Uniform;
  }

  V run() {
    std::vector<int> c(static_cast<std::size_t>(deck_.n), deck_.m);
    std::vector<int> g(static_cast<std::size_t>(deck_.n), 0);
    const u128 total = count(live_pairs_of(c, g));
    total_ = total;
    return eval(c, g, deck_.length(), total);
  }

  u128 total() const { return total_; }
  std::size_t states() const { return memo_.size(); }

 private:
  u128 count(const Pairs& p) { return count_or_budget(p, memo_.size(), budget_.elapsed()); }

  u128 key(const std::vector<int>& c, const std::vector<int>& g) const {
    u128 k = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      k = (k << (cb_ + gb_)) | (static_cast<u128>(c[i]) << gb_) | static_cast<u128>(g[i]);
    }
    return k;
  }

  V eval(std::vector<int>& c, std::vector<int>& g, int f, u128 cnt) {
    if (f == 0 || cnt == 0) return V(0);
    const u128 k = key(c, g);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    budget_.check(memo_.size());

    for (std::size_t i = 0; i < c.size(); ++i) {
      state_.confirmed[i] = static_cast<std::uint8_t>(deck_.m - c[i]);
      state_.misses[i] = static_cast<std::uint8_t>(std::min(g[i], 255));
    }
    std::vector<Symbol> tied;
    player_.candidates(state_, tied);
    if (!uniform_) tied.resize(1);

    V acc(0);
    for (Symbol label : tied) {
      const std::size_t j = label - 1u;
      u128 cy = 0;
      if (c[j] > 0) {
        --c[j];
        cy = count(live_pairs_of(c, g));
        ++c[j];
      }
      const u128 cn = cnt - cy;
      V vy(0);
      V vn(0);
      if (cy > 0) {
        --c[j];
        vy = eval(c, g, f - 1, cy);
        ++c[j];
      }
      if (cn > 0) {
        ++g[j];
        vn = eval(c, g, f - 1, cn);
        --g[j];
      }
      if constexpr (std::is_same_v<V, double>) {
        const double py = static_cast<double>(cy) / static_cast<double>(cnt);
        acc += (cy > 0 ? py * (1.0 + vy) : 0.0) + (cn > 0 ? (1.0 - py) * vn : 0.0);
      } else if constexpr (std::is_same_v<V, Rational>) {
        acc += Rational(to_bigint(cy)) + vy + vn;
      } else {
        acc += cy + vy + vn;
      }
    }
    if constexpr (!std::is_same_v<V, u128>) acc /= static_cast<int>(tied.size());
    memo_.emplace(k, acc);
    return acc;
  }

  DeckSpec deck_;
  const Player& player_;
  Budget budget_;
  StrategyState state_;
  int cb_ = 0;
  int gb_ = 0;
  bool uniform_ = false;
  u128 total_ = 0;
  std::unordered_map<u128, V, U128Hash> memo_;
};

EvalReport base_report(DeckSpec deck, const StrategySpec& spec, FeedbackModel model) {
  EvalReport r;
  r.deck = deck;
  r.strategy = spec.to_string();
  r.model = model;
  return r;
}

}  // namespace

EvalReport policy_value(DeckSpec deck, const StrategySpec& spec, SolverOptions options,
                        Oracles oracles) {
  if (!spec.is_belief_policy()) {
    throw std::invalid_argument(spec.to_string() + " is not a belief-state policy");
  }
  const auto t0 = Clock::now();
  const OracleSet holder(deck, std::span(&spec, 1), options, oracles);
  const Player player(spec, deck, holder.get(spec));
  EvalReport r = base_report(deck, spec, FeedbackModel::YesNo);
  r.method = Method::BeliefDP;
  r.arith = options.arith;
  const bool uniform = spec.has_ties() && spec.ties == TieBreak::Uniform;
  if (options.arith == Arith::Float) {
    PolicyDP<double> dp(deck, player, options);
    r.value = dp.run();
    r.nodes = dp.states();
  } else if (uniform) {
    PolicyDP<Rational> dp(deck, player, options);
    const Rational w = dp.run();
    r.exact = w / Rational(to_bigint(dp.total()));
    r.value = to_double(*r.exact);
    r.nodes = dp.states();
  } else {
    PolicyDP<u128> dp(deck, player, options);
    const u128 w = dp.run();
    r.exact = Rational(to_bigint(w), to_bigint(dp.total()));
    r.value = to_double(*r.exact);
    r.nodes = dp.states();
  }
  r.runtime_ms = millis_since(t0);
  return r;
}

EvalReport greedy_value(DeckSpec deck, TieBreak ties, SolverOptions options) {
  return policy_value(deck, StrategySpec::greedy(ties), options);
}

EvalReport linear_value(DeckSpec deck, const Rational& beta, TieBreak ties, SolverOptions options) {
  return policy_value(deck, StrategySpec::linear(beta, ties), options);
}

namespace {

// Expected score of one word when tied guesses are drawn uniformly.
Rational tie_expectation(const Player& player, StrategyState s, std::span<const Symbol> word,
                         std::size_t pos, FeedbackModel model) {
  Rational total = 0;
  for (; pos < word.size(); ++pos) {
    std::vector<Symbol> tied;
    player.candidates(s, tied);
    if (tied.size() > 1) {
      Rational branch = 0;
      for (Symbol gss : tied) {
        StrategyState next = s;
        player.observe(next, gss, make_feedback(model, gss, word[pos]));
        branch += (gss == word[pos] ? 1 : 0) + tie_expectation(player, next, word, pos + 1, model);
      }
      return total + branch / static_cast<int>(tied.size());
    }
    const Symbol gss = tied.front();
    if (gss == word[pos]) total += 1;
    player.observe(s, gss, make_feedback(model, gss, word[pos]));
  }
  return total;
}

}  // namespace

EvalReport exhaustive_value(DeckSpec deck, const StrategySpec& spec, FeedbackModel model,
                            SolverOptions options, Oracles oracles) {
  check_model(spec, model);
  const auto t0 = Clock::now();
  const OracleSet holder(deck, std::span(&spec, 1), options, oracles);
  const Player player(spec, deck, holder.get(spec));
  EvalReport r = base_report(deck, spec, model);
  r.method = Method::Enumeration;
  r.arith = Arith::Exact;
  if (spec.has_ties() && spec.ties == TieBreak::Uniform) {
    PermutationEnumerator it(deck, options.enumeration_cap);
    std::vector<Symbol> word;
    Rational sum = 0;
    std::uint64_t words = 0;
    while (it.next(word)) {
      sum += tie_expectation(player, player.initial_state(), word, 0, model);
      ++words;
    }
    r.exact = sum / Rational(BigInt(words));
    r.nodes = words;
  } else {
    const std::vector<Player> players{player};
    const auto res = enumerate_scores(deck, players, model, options.enumeration_cap, options.threads);
    r.exact = res.tallies.front().mean();
    r.nodes = res.words;
  }
  r.value = to_double(*r.exact);
  r.runtime_ms = millis_since(t0);
  return r;
}

EvalReport complete_feedback_optimal(DeckSpec deck) {
  const auto t0 = Clock::now();
  std::map<std::vector<int>, Rational> memo;
  // V(counts) = max/N + sum_j (c_j/N) V(counts - e_j), counts kept sorted.
  auto value = [&](auto&& self, const std::vector<int>& counts) -> Rational {
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total == 0) return 0;
    if (auto it = memo.find(counts); it != memo.end()) return it->second;
    Rational v(*std::max_element(counts.begin(), counts.end()), total);
    for (std::size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] == 0 || (j > 0 && counts[j] == counts[j - 1])) continue;
      // Types sharing this count are interchangeable.
      int same = 0;
      for (int x : counts) same += x == counts[j] ? 1 : 0;
      std::vector<int> next = counts;
      --next[j];
      std::sort(next.begin(), next.end());
      v += Rational(counts[j] * same, total) * self(self, next);
    }
    memo.emplace(counts, v);
    return v;
  };
  const std::vector<int> start(static_cast<std::size_t>(deck.n), deck.m);
  EvalReport r = base_report(deck, StrategySpec::optimal(Objective::Max), FeedbackModel::Complete);
  r.exact = value(value, start);
  r.value = to_double(*r.exact);
  r.method = Method::ClosedForm;
  r.nodes = memo.size();
  r.runtime_ms = millis_since(t0);
  return r;
}

EvalReport no_feedback_value(DeckSpec deck) {
  EvalReport r = base_report(deck, StrategySpec::fixed(1), FeedbackModel::None);
  r.strategy = "any";
  r.exact = Rational(deck.m);
  r.value = deck.m;
  r.method = Method::ClosedForm;
  return r;
}

EvalReport evaluate(DeckSpec deck, const StrategySpec& spec, FeedbackModel model,
                    SolverOptions options) {
  spec.validate(deck);
  check_model(spec, model);
  if (model == FeedbackModel::None) {
    // No information ever arrives, so the guess sequence is fixed and each
    // trial is correct with probability 1/n.
    EvalReport r = no_feedback_value(deck);
    r.strategy = spec.to_string();
    return r;
  }
  if (model == FeedbackModel::YesNo && spec.kind == StrategyKind::OptimalPolicy) {
    return optimal_value(deck, spec.objective, options);
  }
  if (model == FeedbackModel::YesNo && spec.is_belief_policy()) {
    return policy_value(deck, spec, options);
  }
  return exhaustive_value(deck, spec, model, options);
}

}  // namespace cardguess
