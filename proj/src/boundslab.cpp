#include "cardguess/boundslab.hpp"

#include "cardguess/cutoff.hpp"
#include "cardguess/errors.hpp"
#include "cardguess/kernels.hpp"
#include "cardguess/montecarlo.hpp"
#include "cardguess/solver.hpp"
#include "cardguess/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cardguess {

namespace {

std::string deck_str(int m, int n) {
  return "(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
}

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

void finish(BoundCheckResult& r, const Rational& margin) {
  r.exact_margin = margin;
  r.margin = to_double(margin);
  r.pass = margin >= 0;
}

void finish(BoundCheckResult& r, double margin) {
  r.margin = margin;
  r.pass = margin >= 0;
}

// Rational to double without overflowing the denominator conversion.
double ratio_double(const BigInt& num, int pow2) {
  if (pow2 <= 60) return static_cast<double>(num) / std::ldexp(1.0, pow2);
  const BigInt top = num >> (pow2 - 60);
  return std::ldexp(static_cast<double>(top), -60);
}

// Smallest j with j >= m/2 + sqrt(m)/2.
int tail_threshold(int m) {
  std::int64_t d = isqrt(m);
  if (d * d < m) ++d;
  return static_cast<int>((m + d + 1) / 2);
}

int k1_of(std::span<const Symbol> w, int front) {
  int k = 0;
  for (int t = 0; t < front; ++t) k += w[static_cast<std::size_t>(t)] == 1;
  return k;
}

}  // namespace

Rational k1_pmf(int m, int n, int k) {
  if (m < 1 || n < 1) throw std::invalid_argument("k1_pmf needs m, n >= 1");
  if (k < 0 || k > m) return 0;
  const int len = m * n;
  const int front = len / 2;
  return Rational(binomial(front, k) * binomial(len - front, m - k), binomial(len, m));
}

Rational k1_pmf_enumerated(int m, int n, int k, double cap) {
  const DeckSpec deck(m, n);
  PermutationEnumerator en(deck, cap);
  std::vector<Symbol> w;
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  const int front = deck.length() / 2;
  while (en.next(w)) {
    ++total;
    hits += k1_of(w, front) == k;
  }
  return Rational(BigInt(hits), BigInt(total));
}

BoundCheckResult check_k1_lower_bound(int m, int n) {
  if (m < 2 || n < 8 * m) throw std::invalid_argument("needs m >= 2 and n >= 8m");
  BoundCheckResult r;
  r.name = "k1-halfway-count";
  r.ranges = deck_str(m, n) + ", k=0.." + std::to_string(m);
  std::optional<Rational> worst;
  std::ostringstream detail;
  for (int k = 0; k <= m; ++k) {
    const Rational rhs(binomial(m, k), BigInt(2) << m);
    const Rational margin = k1_pmf(m, n, k) - rhs;
    detail << (k ? " " : "") << "k=" << k << ":" << format_decimal(margin, 6);
    if (!worst || margin < *worst) {
      worst = margin;
      r.witness = "k=" + std::to_string(k);
    }
  }
  r.detail = "margins " + detail.str();
  finish(r, *worst);
  return r;
}

Rational binom_upper_tail(int m) {
  if (m < 1) throw std::invalid_argument("binomial tail needs m >= 1");
  BigInt t = 0;
  for (int j = tail_threshold(m); j <= m; ++j) t += binomial(m, j);
  return Rational(t, BigInt(1) << m);
}

BoundCheckResult binom_tail_check(int m_max) {
  if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
  BoundCheckResult r;
  r.name = "binomial-tail";
  r.ranges = "m=1.." + std::to_string(m_max);

  // T = sum_{j >= a} C(m, j) and B = C(m, a - 1), advanced one m at a time
  // so every step costs a few big-integer operations.
  int a = tail_threshold(1);
  BigInt tail = 1;
  BigInt below = 1;
  BigInt best_tail = tail;
  int best_m = 1;
  std::vector<int> equal_at;
  const auto check = [&](int m) {
    // tail / 2^m vs best_tail / 2^best_m
    if ((tail << best_m) < (best_tail << m)) {
      best_tail = tail;
      best_m = m;
    }
    if (tail * 64 == BigInt(7) << m) equal_at.push_back(m);
  };
  check(1);
  for (int m = 1; m < m_max; ++m) {
    tail = 2 * tail + below;
    below = below * (m + 1) / (m + 2 - a);
    const int target = tail_threshold(m + 1);
    while (a < target) {
      const BigInt c = below * (m + 2 - a) / a;  // C(m+1, a)
      tail -= c;
      below = c;
      ++a;
    }
    check(m + 1);
  }
  const Rational worst = Rational(best_tail, BigInt(1) << best_m) - Rational(7, 64);
  r.witness = "m=" + std::to_string(best_m) + " tail=" + format_fraction(Rational(best_tail, BigInt(1) << best_m));
  std::ostringstream eq;
  for (std::size_t i = 0; i < equal_at.size(); ++i) eq << (i ? "," : "") << equal_at[i];
  r.detail = "minimum tail " + format_decimal(ratio_double(best_tail, best_m), 6) +
             "; equality with 7/64 at m=" + (equal_at.empty() ? "none" : eq.str());
  finish(r, worst);
  return r;
}

Rational k2_conditional(int m, int n, int k) {
  if (n < 2) throw std::invalid_argument("k2_conditional needs n >= 2");
  if (k < 0 || k > m) throw std::invalid_argument("k out of range");
  const int len = m * n;
  return Rational(len - len / 2 - m + k, n - 1);
}

Rational k2_conditional_enumerated(int m, int n, int k, double cap) {
  const DeckSpec deck(m, n);
  PermutationEnumerator en(deck, cap);
  std::vector<Symbol> w;
  const int front = deck.length() / 2;
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  while (en.next(w)) {
    if (k1_of(w, front) != k) continue;
    ++count;
    for (std::size_t t = static_cast<std::size_t>(front); t < w.size(); ++t) sum += w[t] == 2;
  }
  if (count == 0) throw std::domain_error("K1 = k has probability zero");
  return Rational(BigInt(sum), BigInt(count));
}

BoundCheckResult check_k2_identity(int m, int n) {
  BoundCheckResult r;
  r.name = "k2-conditional-mean";
  r.ranges = deck_str(m, n) + ", k=0.." + std::to_string(m);
  Rational mismatch = 0;
  std::optional<Rational> direction;
  for (int k = 0; k <= m; ++k) {
    if (k1_pmf(m, n, k) == 0) continue;
    const Rational f = k2_conditional(m, n, k);
    const Rational diff = abs_r(f - k2_conditional_enumerated(m, n, k));
    if (diff > mismatch) {
      mismatch = diff;
      r.witness = "k=" + std::to_string(k);
    }
    // k >= m/2 gives at least m/2, k < m/2 at most m/2.
    const Rational half(m, 2);
    const Rational d = 2 * k >= m ? Rational(f - half) : Rational(half - f);
    if (!direction || d < *direction) {
      direction = d;
      if (mismatch == 0) r.witness = "k=" + std::to_string(k);
    }
  }
  r.detail = "formula vs enumeration max diff " + format_fraction(mismatch) +
             "; half-m comparison margin " + format_fraction(direction.value_or(0));
  finish(r, mismatch > 0 ? Rational(-mismatch) : direction.value_or(0));
  return r;
}

Rational safe_two_type_formula(int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  return Rational(m + 1) - Rational(1, m + 1);
}

BoundCheckResult check_safe_two_type(int m_max) {
  BoundCheckResult r;
  r.name = "safe-two-types";
  r.ranges = "n=2, m=1.." + std::to_string(m_max);
  Rational worst = 0;
  r.witness = "all equal";
  for (int m = 1; m <= m_max; ++m) {
    const EvalReport e = exhaustive_value(DeckSpec(m, 2), StrategySpec::safe(), FeedbackModel::YesNo);
    const Rational diff = abs_r(*e.exact - safe_two_type_formula(m));
    if (diff > worst) {
      worst = diff;
      r.witness = "m=" + std::to_string(m);
    }
  }
  finish(r, Rational(-worst));
  return r;
}

Real avoiding_asymptotic(int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const Real mm = m;
  return mm - 1 + 1 / mm - boost::multiprecision::exp(-mm) / mm;
}

FirstCorrectDistribution first_correct_distribution(int m, int n, std::uint64_t mc_trials,
                                                    std::uint64_t seed, double cap, int threads) {
  const DeckSpec deck(m, n);
  const int len = deck.length();
  FirstCorrectDistribution out;
  out.deck = deck;
  out.prob.assign(static_cast<std::size_t>(len) + 1, Rational(0));
  try {
    const std::vector<Player> players{Player(StrategySpec::avoiding(), deck)};
    const EnumerationResult res = enumerate_scores(deck, players, FeedbackModel::YesNo, cap, threads);
    const auto& hist = res.tallies[0].first_correct_hist;
    for (std::size_t k = 0; k < hist.size() && k < out.prob.size(); ++k) {
      out.prob[k] = Rational(BigInt(hist[k]), BigInt(res.words));
    }
  } catch (const CapExceeded&) {
    if (mc_trials == 0) throw;
    out.exact = false;
    out.trials = mc_trials;
    const Player player(StrategySpec::avoiding(), deck);
    std::vector<std::uint64_t> hist(out.prob.size(), 0);
    std::vector<Symbol> word;
    for (std::uint64_t t = 0; t < mc_trials; ++t) {
      RngStream rng(seed, t);
      sample_into(deck, rng, word);
      StrategyState s = player.initial_state();
      std::size_t first = 0;
      for (std::size_t i = 0; i < word.size(); ++i) {
        const Symbol g = player.next_guess(s);
        const bool hit = g == word[i];
        player.observe(s, g, make_feedback(FeedbackModel::YesNo, g, word[i]));
        if (hit) {
          first = i + 1;
          break;
        }
      }
      ++hist[first];
    }
    for (std::size_t k = 0; k < hist.size(); ++k) out.prob[k] = Rational(BigInt(hist[k]), BigInt(mc_trials));
  }
  for (int k = 1; k <= len; ++k) {
    const double approx = std::exp(-static_cast<double>(k) / n) / n;
    const double dev = std::abs(to_double(out.prob[static_cast<std::size_t>(k)]) - approx);
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.argmax = k;
    }
  }
  return out;
}

namespace {

// Critical points of h (roots of h') inside (lo, hi), located by Sturm
// bisection to width `eps`.
void isolate(const RationalPoly& dh, const Rational& lo, const Rational& hi, const Rational& eps,
             std::vector<Rational>& out) {
  const int c = dh.count_roots(lo, hi);
  if (c == 0) return;
  const Rational mid = (lo + hi) / 2;
  if (c == 1 && hi - lo < eps) {
    out.push_back(mid);
    return;
  }
  if (dh(mid) == 0) out.push_back(mid);
  isolate(dh, lo, mid, eps, out);
  isolate(dh, mid, hi, eps, out);
}

}  // namespace

SumIntegralParts sum_integral_parts(const RationalPoly& h, std::int64_t a, std::int64_t b) {
  if (a >= b) throw std::invalid_argument("need integers a < b");
  SumIntegralParts p;
  for (std::int64_t i = a; i <= b; ++i) p.sum += h(Rational(i));
  p.integral = h.integrate(Rational(a), Rational(b));

  const Rational lo(a - 1);
  const Rational hi(b + 1);
  const RationalPoly dh = h.derivative();
  std::vector<Rational> points{lo, hi};
  if (dh.is_zero()) {
    p.pieces = 1;
  } else {
    p.pieces = dh.count_roots(lo, hi) + 1;
    isolate(dh, lo, hi, Rational(1, BigInt(1) << 40), points);
  }
  for (const auto& x : points) p.max_abs = std::max(p.max_abs, abs_r(h(x)));
  return p;
}

BoundCheckResult sum_vs_integral_check(const RationalPoly& h, std::int64_t a, std::int64_t b) {
  const SumIntegralParts p = sum_integral_parts(h, a, b);
  BoundCheckResult r;
  r.name = "sum-vs-integral";
  r.ranges = "[" + std::to_string(a) + "," + std::to_string(b) + "]";
  r.witness = "S=" + format_decimal(p.sum, 6) + " I=" + format_decimal(p.integral, 6) +
              " r=" + std::to_string(p.pieces) + " M=" + format_decimal(p.max_abs, 6);
  r.detail = "critical points located to width 2^-40";
  finish(r, Rational(6 * p.pieces * p.max_abs - abs_r(p.sum - p.integral)));
  return r;
}

namespace {

Rational e_partial(int n) {
  Rational s = 0;
  BigInt f = 1;
  for (int k = 1; k <= n; ++k) {
    f *= k;
    s += Rational(BigInt(1), f);
  }
  return s;
}

BoundCheckResult m1_series(const AuditOptions&) {
  BoundCheckResult r;
  r.name = "m1-optimal-e-series";
  r.ranges = "m=1, n=1..8";
  Rational worst = 0;
  r.witness = "n=1";
  for (int n = 1; n <= 8; ++n) {
    const EvalReport e = optimal_value(DeckSpec(1, n), Objective::Max);
    const Rational d = abs_r(*e.exact - e_partial(n));
    if (d > worst) {
      worst = d;
      r.witness = "n=" + std::to_string(n);
    }
  }
  r.detail = "max |opt - sum_{k<=n} 1/k!| = " + format_fraction(worst) + ", tolerance 1/1000";
  finish(r, Rational(1, 1000) - worst);
  return r;
}

BoundCheckResult m1_limit(Objective objective) {
  const EvalReport e = optimal_value(DeckSpec(1, 6), objective);
  const Real target = objective == Objective::Max ? boost::multiprecision::exp(Real(1)) - 1
                                                  : 1 - boost::multiprecision::exp(Real(-1));
  const Real diff = boost::multiprecision::abs(Real(*e.exact) - target);
  BoundCheckResult r;
  r.name = objective == Objective::Max ? "m1-optimal-limit" : "m1-misere-limit";
  r.ranges = "m=1, n=6";
  r.witness = "value " + format_fraction(*e.exact) + " = " + format_decimal(*e.exact, 6);
  r.detail = std::string("within 1/6! of ") + (objective == Objective::Max ? "e-1" : "1-1/e");
  finish(r, static_cast<double>(Real(1) / 720 - diff));
  return r;
}

BoundCheckResult misere_corridor(const AuditOptions& o) {
  const double lower = static_cast<double>(1 - boost::multiprecision::exp(Real(-2)));
  const double upper = static_cast<double>(avoiding_asymptotic(2));
  constexpr double slack = 0.15;
  BoundCheckResult r;
  r.name = "m2-misere-corridor";
  r.ranges = "m=2, n=6.." + std::to_string(o.misere_n_max);
  r.empirical = true;
  double worst = 1e300;
  std::ostringstream vals;
  for (int n = 6; n <= o.misere_n_max; ++n) {
    const EvalReport e = optimal_value(DeckSpec(2, n), Objective::Min);
    const double margin = std::min(e.value - (lower - slack), (upper + slack) - e.value);
    vals << (n > 6 ? " " : "") << n << ":" << e.decimal(4);
    if (margin < worst) {
      worst = margin;
      r.witness = "n=" + std::to_string(n);
    }
  }
  r.detail = "values " + vals.str() + "; corridor [1-e^-2, 3/2-e^-2/2] widened by 0.15";
  finish(r, worst);
  return r;
}

BoundCheckResult avoiding_corridor(const AuditOptions& o) {
  const double limit = static_cast<double>(avoiding_asymptotic(2));
  const EvalReport e6 = exhaustive_value(DeckSpec(2, 6), StrategySpec::avoiding(), FeedbackModel::YesNo);
  const EvalReport e8 = simulate(DeckSpec(2, 8), StrategySpec::avoiding(), FeedbackModel::YesNo,
                                 o.trials, o.seed, o.threads);
  const EvalReport e40 = simulate(DeckSpec(2, 40), StrategySpec::avoiding(), FeedbackModel::YesNo,
                                  o.trials, o.seed, o.threads);
  BoundCheckResult r;
  r.name = "avoiding-limit";
  r.ranges = "m=2, n in {6 exact, 8 MC, 40 MC}";
  r.empirical = true;
  r.witness = "n=40 mean " + format_decimal(e40.value, 5) + " +- " + format_decimal(e40.std_error, 5);
  r.detail = "limit " + format_decimal(limit, 5) + "; n=6 " + e6.decimal(5) + ", n=8 " +
             format_decimal(e8.value, 5) + "; tolerance 0.05 at n=40";
  finish(r, 0.05 - std::abs(e40.value - limit));
  return r;
}

BoundCheckResult first_correct_corridor(const AuditOptions& o) {
  const FirstCorrectDistribution d = first_correct_distribution(2, 6, 0, o.seed, kDefaultEnumerationCap, o.threads);
  BoundCheckResult r;
  r.name = "first-correct-shape";
  r.ranges = "m=2, n=6, k=1..12";
  r.empirical = true;
  r.witness = "k=" + std::to_string(d.argmax);
  r.detail = "max |P[f=k] - e^{-k/n}/n| = " + format_decimal(d.max_deviation, 6) + ", tolerance 0.25/n";
  finish(r, 0.25 / 6 - d.max_deviation);
  return r;
}

BoundCheckResult halfway_star(int m, int n, bool plus, const AuditOptions& o) {
  const StrategySpec spec = plus ? StrategySpec::star_halfway_plus() : StrategySpec::star_halfway_minus();
  const EvalReport e = simulate(DeckSpec(m, n), spec, FeedbackModel::YesNo, o.trials, o.seed, o.threads);
  const double edge = std::sqrt(static_cast<double>(m)) / 40;
  BoundCheckResult r;
  r.name = plus ? "halfway-plus-star" : "halfway-minus-star";
  r.ranges = deck_str(m, n) + ", " + std::to_string(o.trials) + " trials";
  r.witness = "mean " + format_decimal(e.value, 5) + " +- " + format_decimal(e.std_error, 5);
  r.detail = plus ? "mean >= m + sqrt(m)/40 - 4 sigma" : "mean <= m - sqrt(m)/40 + 4 sigma";
  const double margin = plus ? e.value + 4 * e.std_error - (m + edge)
                             : (m - edge) + 4 * e.std_error - e.value;
  finish(r, margin);
  return r;
}

BoundCheckResult zero_score_maximal() {
  BoundCheckResult r;
  r.name = "avoiding-zero-score";
  r.ranges = "m*n <= 10";
  const std::vector<StrategySpec> named{
      StrategySpec::safe(),          StrategySpec::shifting(),
      StrategySpec::gamma_shifting(Rational(1, 4)), StrategySpec::halfway_plus(),
      StrategySpec::halfway_minus(), StrategySpec::star_halfway_plus(),
      StrategySpec::star_halfway_minus(), StrategySpec::fixed(1),
      StrategySpec::linear(Rational(1, 2)), StrategySpec::greedy(),
      StrategySpec::optimal(Objective::Max), StrategySpec::optimal(Objective::Min)};
  Rational worst = 1;
  for (const DeckSpec deck : {DeckSpec(2, 3), DeckSpec(2, 4), DeckSpec(2, 5), DeckSpec(3, 3)}) {
    std::vector<StrategySpec> specs{StrategySpec::avoiding()};
    specs.insert(specs.end(), named.begin(), named.end());
    const OracleSet oracles(deck, specs);
    std::vector<Player> players;
    for (const auto& s : specs) players.emplace_back(s, deck, oracles.get(s));
    const EnumerationResult res = enumerate_scores(deck, players, FeedbackModel::YesNo);
    const auto zero = [&](std::size_t i) {
      return Rational(BigInt(res.tallies[i].score_hist[0]), BigInt(res.words));
    };
    for (std::size_t i = 1; i < specs.size(); ++i) {
      const Rational margin = zero(0) - zero(i);
      if (margin < worst) {
        worst = margin;
        r.witness = deck_str(deck.m, deck.n) + " vs " + specs[i].to_string();
      }
    }
  }
  r.detail = "P[score=0] of avoid minus that of each named strategy";
  finish(r, worst);
  return r;
}

BoundCheckResult cutoff_basis_sum() {
  // One limit density rescaled to t in [0, mn], n = 20.
  const BoundPolynomials polys = build_polynomials(build_score_table(2, 2));
  const int n = 20;
  const Rational scale(1, 2 * n);
  const RationalPoly h = polys.g.compose_affine(scale, 0) * scale;
  BoundCheckResult r = sum_vs_integral_check(h, 0, 2 * n);
  r.ranges = "g density of (m=2,k=2) on [0,40]";
  return r;
}

}  // namespace

std::vector<BoundCheckResult> theorem_inequality_audit(const AuditOptions& o) {
  std::vector<BoundCheckResult> out;
  for (int m = 2; m <= 4; ++m) {
    out.push_back(check_k1_lower_bound(m, 8 * m));
    out.push_back(check_k1_lower_bound(m, 8 * m + 1));
  }
  out.push_back(binom_tail_check(o.binom_m_max));
  out.push_back(check_k2_identity(2, 3));
  out.push_back(check_k2_identity(2, 4));
  out.push_back(check_safe_two_type(6));
  out.push_back(sum_vs_integral_check(RationalPoly({0, 1}), 0, 10));
  out.push_back(cutoff_basis_sum());
  out.push_back(m1_series(o));
  out.push_back(m1_limit(Objective::Max));
  out.push_back(m1_limit(Objective::Min));
  out.push_back(misere_corridor(o));
  out.push_back(zero_score_maximal());
  out.push_back(first_correct_corridor(o));
  out.push_back(avoiding_corridor(o));
  for (const auto& [m, n] : {std::pair{2, 16}, std::pair{4, 32}}) {
    out.push_back(halfway_star(m, n, true, o));
    out.push_back(halfway_star(m, n, false, o));
  }
  return out;
}

}  // namespace cardguess
