#pragma once

#include "cardguess/deck.hpp"
#include "cardguess/numeric.hpp"
#include "cardguess/polynomial.hpp"
#include "cardguess/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cardguess {

struct ScoreRow {
  Permutation sigma;
  int q = 0;
  int f = 0;  // F_k
  int g = 0;  // G_k
};

// Per-q aggregates of F_k and G_k over S_{m,k}; q = sigma^{-1}(1) - 1.
struct ScoreTable {
  int m = 0;
  int k = 0;
  std::uint64_t words = 0;
  std::vector<std::uint64_t> count;  // [q]
  std::vector<std::uint64_t> sum_f;  // [q]
  std::vector<std::uint64_t> sum_g;  // [q]
  std::optional<std::vector<ScoreRow>> rows;
};

// Streams the enumeration of S_{m,k}; `keep_rows` also materializes every
// word (small decks only). Throws CapExceeded.
ScoreTable build_score_table(int m, int k, bool keep_rows = false,
                             double cap = kDefaultEnumerationCap, int threads = 0);

// Limit densities in u = t/(mn):
//   f(u) = sum_q SF[q] (m!)^k / (q! (mk-1-q)!) u^q (1-u)^(mk-1-q), g alike.
struct BoundPolynomials {
  int m = 0;
  int k = 0;
  RationalPoly f;
  RationalPoly g;
};

BoundPolynomials build_polynomials(const ScoreTable& table);

// int_0^gamma f + int_gamma^1 g.
Rational bound_integral(const BoundPolynomials& polys, const Rational& gamma);

struct GammaOptimum {
  Rational gamma;
  Rational value;
  std::uint64_t evaluations = 0;
};

// Grid {0, 1/r, ..., 1}, then `refinements` rounds of r-fold finer grids
// around the incumbent. Ties keep the smallest gamma.
GammaOptimum optimize_gamma(const BoundPolynomials& polys, int resolution = 256,
                            int refinements = 2);

struct FiniteNCheck {
  EvalReport simulated;
  Rational asymptotic_bound;
};

// Monte Carlo of the (k, gamma)-shifting strategy on S_{m,n}, next to the
// n -> infinity bound.
FiniteNCheck finite_n_check(int m, int k, const Rational& gamma, int n, std::uint64_t trials,
                            std::uint64_t seed, int threads = 0);

}  // namespace cardguess
