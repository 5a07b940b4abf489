#pragma once

#include "cardguess/deck.hpp"
#include "cardguess/numeric.hpp"
#include "cardguess/polynomial.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cardguess {

using Real = boost::multiprecision::cpp_bin_float_50;

struct BoundCheckResult {
  std::string name;
  std::string ranges;                   // parameters swept
  double margin = 0;                    // worst LHS - RHS
  std::optional<Rational> exact_margin;
  std::string witness;                  // where the worst margin occurs
  bool pass = false;                    // margin >= 0
  bool empirical = false;               // tolerance picked here, not taken from a theorem
  std::string detail;
};

// P[K1 = k]: exactly k of the m "1"s among the first floor(mn/2) positions.
Rational k1_pmf(int m, int n, int k);
// Same probability by walking S_{m,n}; small decks only.
Rational k1_pmf_enumerated(int m, int n, int k, double cap = kDefaultEnumerationCap);

// P[K1 = k] >= 2^-m C(m,k) / 2 for all k. Requires m >= 2, n >= 8m.
BoundCheckResult check_k1_lower_bound(int m, int n);

// P[B_m >= m/2 + sqrt(m)/2] >= 7/64 for 1 <= m <= m_max, exact tails.
BoundCheckResult binom_tail_check(int m_max);
// The tail itself, for one m.
Rational binom_upper_tail(int m);

// E[K2 | K1 = k] = (mn - floor(mn/2) - m + k) / (n - 1), where K2 counts
// the "2"s after position floor(mn/2).
Rational k2_conditional(int m, int n, int k);
// Brute force over S_{m,n}; throws std::domain_error when P[K1 = k] = 0.
Rational k2_conditional_enumerated(int m, int n, int k, double cap = kDefaultEnumerationCap);
// Formula vs enumeration for every k, plus the half-m comparison.
BoundCheckResult check_k2_identity(int m, int n);

// Safe strategy on S_{m,2}: m + 1 - 1/(m+1).
Rational safe_two_type_formula(int m);
BoundCheckResult check_safe_two_type(int m_max);

// Limit of the avoiding strategy's mean: m - 1 + 1/m - e^{-m}/m.
Real avoiding_asymptotic(int m);

struct FirstCorrectDistribution {
  DeckSpec deck;
  std::vector<Rational> prob;  // [k] = P[f = k] for k = 1..mn; [0] = never correct
  bool exact = true;
  std::uint64_t trials = 0;    // Monte Carlo fallback
  double max_deviation = 0;    // max_k |P[f=k] - e^{-k/n}/n|
  int argmax = 0;
};

// Exact by enumeration; beyond the cap falls back to `mc_trials` samples
// when nonzero, otherwise throws CapExceeded.
FirstCorrectDistribution first_correct_distribution(int m, int n, std::uint64_t mc_trials = 0,
                                                    std::uint64_t seed = 1,
                                                    double cap = kDefaultEnumerationCap,
                                                    int threads = 0);

struct SumIntegralParts {
  Rational sum;       // sum_{i=a}^{b} h(i)
  Rational integral;  // int_a^b h
  int pieces = 0;     // monotone pieces on [a-1, b+1]
  Rational max_abs;   // max |h| on [a-1, b+1]
};

SumIntegralParts sum_integral_parts(const RationalPoly& h, std::int64_t a, std::int64_t b);
// |S - I| <= 6 r M.
BoundCheckResult sum_vs_integral_check(const RationalPoly& h, std::int64_t a, std::int64_t b);

struct AuditOptions {
  std::uint64_t trials = 200'000;
  std::uint64_t seed = 1;
  int threads = 0;
  int misere_n_max = 10;  // m = 2 misere values for n = 6..this
  int binom_m_max = 10'000;
};

// Every verifier above at its default parameters, plus solver and Monte
// Carlo values against the asymptotic statements.
std::vector<BoundCheckResult> theorem_inequality_audit(const AuditOptions& options = {});

}  // namespace cardguess
