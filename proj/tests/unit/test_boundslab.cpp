#include "cardguess/boundslab.hpp"
#include "cardguess/errors.hpp"
#include "cardguess/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace cardguess;

namespace {

// P[first correct = k] for the avoiding rule, straight from its definition.
std::vector<Rational> avoiding_first_hit(DeckSpec d) {
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(d.length()) + 1, 0);
  std::uint64_t total = 0;
  for (const auto& p : enumerate(d)) {
    int first = 0;
    for (int t = 0; t < d.length() && first == 0; ++t) {
      if (p.word()[static_cast<std::size_t>(t)] == t % d.n + 1) first = t + 1;
    }
    ++hist[static_cast<std::size_t>(first)];
    ++total;
  }
  std::vector<Rational> out;
  for (auto h : hist) out.emplace_back(h, total);
  return out;
}

}  // namespace

TEST(K1, Examples) {
  EXPECT_EQ(k1_pmf(2, 8, 0), Rational(7, 30));
  EXPECT_EQ(k1_pmf(2, 8, 1), Rational(8, 15));
  for (int m = 1; m <= 5; ++m) {
    Rational s = 0;
    for (int k = 0; k <= m; ++k) s += k1_pmf(m, 7, k);
    EXPECT_EQ(s, 1);
  }
}

TEST(K1, MatchesEnumeration) {
  for (auto [m, n] : {std::pair{1, 2}, {1, 5}, {1, 9}, {2, 2}, {2, 3}, {2, 5}, {2, 6}, {3, 2},
                      {3, 3}, {3, 4}, {4, 2}, {4, 3}, {5, 2}, {6, 2}}) {
    for (int k = 0; k <= m; ++k) {
      EXPECT_EQ(k1_pmf(m, n, k), k1_pmf_enumerated(m, n, k)) << m << "," << n << " k=" << k;
    }
  }
}

TEST(K1, LowerBoundChecks) {
  EXPECT_TRUE(check_k1_lower_bound(2, 16).pass);
  EXPECT_TRUE(check_k1_lower_bound(3, 24).pass);
  const auto r = check_k1_lower_bound(2, 16);
  ASSERT_TRUE(r.exact_margin);
  EXPECT_GT(*r.exact_margin, 0);
  // Below the hypothesis the k=0 term still clears 2^-m / 2.
  EXPECT_GT(k1_pmf(2, 8, 0), Rational(1, 8));
  EXPECT_THROW(check_k1_lower_bound(2, 15), std::invalid_argument);
  EXPECT_THROW(check_k1_lower_bound(1, 20), std::invalid_argument);
}

TEST(BinomialTail, Examples) {
  EXPECT_EQ(binom_upper_tail(6), Rational(7, 64));
  EXPECT_EQ(binom_upper_tail(1), Rational(1, 2));
  // Direct sum for a few m.
  for (int m = 1; m <= 40; ++m) {
    const double thr = m / 2.0 + std::sqrt(static_cast<double>(m)) / 2.0;
    BigInt s = 0;
    for (int a = 0; a <= m; ++a) {
      if (a >= thr - 1e-12) s += binomial(m, a);
    }
    EXPECT_EQ(binom_upper_tail(m), Rational(s, BigInt(1) << m)) << m;
  }
}

TEST(BinomialTail, SweepMinimumAtSix) {
  const auto r = binom_tail_check(10000);
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.exact_margin);
  EXPECT_EQ(*r.exact_margin, 0);
  EXPECT_NE(r.witness.find("m=6"), std::string::npos) << r.witness;
}

TEST(K2, Examples) {
  EXPECT_EQ(k2_conditional(2, 4, 2), Rational(4, 3));
  EXPECT_EQ(k2_conditional(2, 4, 0), Rational(2, 3));
  for (auto [m, n] : {std::pair{2, 3}, {2, 4}, {3, 3}}) {
    for (int k = 0; k <= m; ++k) EXPECT_EQ(k2_conditional(m, n, k), k2_conditional_enumerated(m, n, k));
  }
  EXPECT_TRUE(check_k2_identity(2, 3).pass);
  EXPECT_TRUE(check_k2_identity(2, 4).pass);
  EXPECT_THROW(k2_conditional(2, 1, 0), std::invalid_argument);
  EXPECT_THROW(k2_conditional_enumerated(2, 3, 3), std::domain_error);
}

TEST(SafeTwoTypes, Formula) {
  EXPECT_EQ(safe_two_type_formula(2), Rational(8, 3));
  EXPECT_EQ(safe_two_type_formula(1), Rational(3, 2));
  EXPECT_EQ(safe_two_type_formula(5), Rational(35, 6));
  EXPECT_EQ(*optimal_value(DeckSpec(1, 2), Objective::Max).exact, Rational(3, 2));
  for (int m = 1; m <= 6; ++m) {
    EXPECT_EQ(*exhaustive_value(DeckSpec(m, 2), StrategySpec::safe(), FeedbackModel::YesNo).exact,
              safe_two_type_formula(m));
  }
  EXPECT_TRUE(check_safe_two_type(6).pass);
}

TEST(Avoiding, Asymptotic) {
  EXPECT_NEAR(static_cast<double>(avoiding_asymptotic(1)), 1 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(static_cast<double>(avoiding_asymptotic(2)), 1.5 - std::exp(-2.0) / 2, 1e-15);
  EXPECT_EQ(format_decimal(from_double(static_cast<double>(avoiding_asymptotic(2))), 4), "1.4323");
}

TEST(SingleCopy, PartialSumsOfE) {
  const double e1 = std::exp(1.0) - 1;
  const auto opt = optimal_value(DeckSpec(1, 6), Objective::Max);
  EXPECT_LT(std::abs(opt.value - e1), 1.0 / 720);
  EXPECT_EQ(format_decimal(*opt.exact, 5), "1.71806");
  const auto mis = optimal_value(DeckSpec(1, 6), Objective::Min);
  EXPECT_LT(std::abs(mis.value - (1 - std::exp(-1.0))), 1.0 / 720);
}

TEST(FirstCorrect, SmallDecks) {
  const auto d = first_correct_distribution(1, 3);
  EXPECT_TRUE(d.exact);
  EXPECT_EQ(d.prob, avoiding_first_hit(DeckSpec(1, 3)));
  for (auto [m, n] : {std::pair{2, 3}, {2, 4}, {3, 3}}) {
    const auto e = first_correct_distribution(m, n);
    EXPECT_EQ(e.prob, avoiding_first_hit(DeckSpec(m, n)));
    EXPECT_EQ(e.prob[1], Rational(1, n));
    Rational s = 0;
    for (const auto& p : e.prob) s += p;
    EXPECT_EQ(s, 1);
  }
}

TEST(FirstCorrect, ShapeCorridor) {
  const auto d = first_correct_distribution(2, 6);
  EXPECT_TRUE(d.exact);
  EXPECT_LT(d.max_deviation, 0.25 / 6);
}

TEST(FirstCorrect, MonteCarloFallback) {
  const auto d = first_correct_distribution(2, 8, 200000, 3, 1e6);
  EXPECT_FALSE(d.exact);
  EXPECT_EQ(d.trials, 200000u);
  EXPECT_NEAR(to_double(d.prob[1]), 1.0 / 8, 0.005);
  EXPECT_THROW(first_correct_distribution(2, 8, 0, 3, 1e6), CapExceeded);
}

TEST(SumIntegral, Linear) {
  const auto p = sum_integral_parts(RationalPoly({0, 1}), 0, 10);
  EXPECT_EQ(p.sum, 55);
  EXPECT_EQ(p.integral, 50);
  EXPECT_EQ(p.pieces, 1);
  EXPECT_EQ(p.max_abs, 11);
  EXPECT_TRUE(sum_vs_integral_check(RationalPoly({0, 1}), 0, 10).pass);
}

TEST(SumIntegral, Constant) {
  const auto p = sum_integral_parts(RationalPoly::constant(Rational(-3, 2)), 2, 9);
  EXPECT_EQ(p.sum - p.integral, Rational(-3, 2));
  EXPECT_EQ(p.max_abs, Rational(3, 2));
  EXPECT_TRUE(sum_vs_integral_check(RationalPoly::constant(Rational(-3, 2)), 2, 9).pass);
}

TEST(SumIntegral, ScaledDensityTerm) {
  // q=1 term of the two-type g density, u = t/40.
  const auto h = RationalPoly::bernstein_like(1, 2, 2).compose_affine(Rational(1, 40), 0);
  const auto p = sum_integral_parts(h, 0, 40);
  EXPECT_EQ(p.pieces, 3);  // turning points at t = 40/3 and t = 40
  EXPECT_TRUE(sum_vs_integral_check(h, 0, 40).pass);
}

TEST(SumIntegral, Wiggly) {
  const auto h = RationalPoly({0, 30, -31, 10, -1});  // several turning points
  const auto p = sum_integral_parts(h, -2, 9);
  EXPECT_GE(p.pieces, 3);
  EXPECT_TRUE(sum_vs_integral_check(h, -2, 9).pass);
  EXPECT_THROW(sum_integral_parts(h, 3, 3), std::invalid_argument);
}

TEST(Audit, EveryCheckPasses) {
  const auto results = theorem_inequality_audit();
  std::set<std::string> names;
  bool any_empirical = false;
  for (const auto& r : results) {
    EXPECT_TRUE(r.pass) << r.name << " [" << r.ranges << "] " << r.witness << " " << r.detail;
    EXPECT_TRUE(names.insert(r.name + r.ranges).second) << r.name;
    any_empirical |= r.empirical;
  }
  EXPECT_GE(results.size(), 20u);
  EXPECT_TRUE(any_empirical);
}
