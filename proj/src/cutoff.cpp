#include "cardguess/cutoff.hpp"

#include "cardguess/kernels.hpp"
#include "cardguess/montecarlo.hpp"
#include "cardguess/strategy.hpp"

#include <stdexcept>

namespace cardguess {

ScoreTable build_score_table(int m, int k, bool keep_rows, double cap, int threads) {
  const DeckSpec deck(m, k);
  const std::vector<Player> players{Player(StrategySpec::k_gamma_shifting(k, 1), deck),
                                    Player(StrategySpec::k_gamma_shifting(k, 0), deck)};
  const EnumerationResult res = enumerate_scores(deck, players, FeedbackModel::YesNo, cap, threads);

  ScoreTable t;
  t.m = m;
  t.k = k;
  t.words = res.words;
  const int len = deck.length();
  t.count.assign(static_cast<std::size_t>(len), 0);
  t.sum_f.assign(static_cast<std::size_t>(len), 0);
  t.sum_g.assign(static_cast<std::size_t>(len), 0);
  const auto& fq = res.tallies[0].by_q;
  const auto& gq = res.tallies[1].by_q;
  for (std::size_t q = 0; q < fq.size() && q < t.count.size(); ++q) {
    for (std::size_t s = 0; s < fq[q].size(); ++s) {
      t.count[q] += fq[q][s];
      t.sum_f[q] += fq[q][s] * s;
    }
    for (std::size_t s = 0; s < gq[q].size(); ++s) t.sum_g[q] += gq[q][s] * s;
  }

  if (keep_rows) {
    std::vector<ScoreRow> rows;
    PermutationEnumerator en(deck, cap);
    std::vector<Symbol> word;
    while (en.next(word)) {
      Permutation p(deck, word);
      const FGScores fg = score_fg(k, p);
      rows.push_back(ScoreRow{p, first_index_of_one(p) - 1, fg.shifting, fg.safe});
    }
    t.rows = std::move(rows);
  }
  return t;
}

BoundPolynomials build_polynomials(const ScoreTable& table) {
  const int m = table.m;
  const int k = table.k;
  const int top = m * k - 1;
  BigInt mk_fact = 1;
  const BigInt mf = factorial(m);
  for (int i = 0; i < k; ++i) mk_fact *= mf;

  BoundPolynomials out{m, k, {}, {}};
  for (int q = 0; q <= top; ++q) {
    const auto qi = static_cast<std::size_t>(q);
    if (qi >= table.count.size() || table.count[qi] == 0) continue;
    const Rational phi(mk_fact, factorial(q) * factorial(top - q));
    const RationalPoly basis = RationalPoly::bernstein_like(q, top - q, phi);
    out.f += basis * Rational(BigInt(table.sum_f[qi]));
    out.g += basis * Rational(BigInt(table.sum_g[qi]));
  }
  return out;
}

Rational bound_integral(const BoundPolynomials& polys, const Rational& gamma) {
  if (gamma < 0 || gamma > 1) throw std::invalid_argument("gamma must lie in [0, 1]");
  const RationalPoly fi = polys.f.antiderivative();
  const RationalPoly gi = polys.g.antiderivative();
  return fi(gamma) - fi(Rational(0)) + gi(Rational(1)) - gi(gamma);
}

GammaOptimum optimize_gamma(const BoundPolynomials& polys, int resolution, int refinements) {
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  if (refinements < 0) throw std::invalid_argument("refinements must be >= 0");
  const RationalPoly fi = polys.f.antiderivative();
  const RationalPoly gi = polys.g.antiderivative();
  const Rational g_total = gi(Rational(1));

  GammaOptimum best;
  bool have = false;
  auto consider = [&](const Rational& x) {
    if (x < 0 || x > 1) return;
    const Rational v = fi(x) + g_total - gi(x);
    ++best.evaluations;
    if (!have || v > best.value || (v == best.value && x < best.gamma)) {
      best.gamma = x;
      best.value = v;
      have = true;
    }
  };

  Rational step(1, resolution);
  for (int i = 0; i <= resolution; ++i) consider(step * i);
  for (int level = 0; level < refinements; ++level) {
    const Rational centre = best.gamma;
    const Rational fine = step / resolution;
    for (int i = -resolution; i <= resolution; ++i) consider(centre + fine * i);
    step = fine;
  }
  return best;
}

FiniteNCheck finite_n_check(int m, int k, const Rational& gamma, int n, std::uint64_t trials,
                            std::uint64_t seed, int threads) {
  if (k > n) throw std::invalid_argument("k must not exceed n");
  const BoundPolynomials polys = build_polynomials(build_score_table(m, k));
  FiniteNCheck out;
  out.asymptotic_bound = bound_integral(polys, gamma);
  out.simulated = simulate(DeckSpec(m, n), StrategySpec::k_gamma_shifting(k, gamma),
                           FeedbackModel::YesNo, trials, seed, threads);
  out.simulated.note = "asymptotic bound " + format_decimal(out.asymptotic_bound, 6) +
                       " (limit n -> infinity; finite-n gap is O(1/n))";
  return out;
}

}  // namespace cardguess
