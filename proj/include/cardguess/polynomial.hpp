#pragma once

#include "cardguess/numeric.hpp"

#include <string>
#include <vector>

namespace cardguess {

// Dense polynomial with exact rational coefficients, lowest degree first.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);
  static RationalPoly constant(const Rational& c);
  static RationalPoly monomial(int degree, const Rational& c = 1);
  // c * u^a * (1 - u)^b
  static RationalPoly bernstein_like(int a, int b, const Rational& c = 1);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int i) const;

  Rational operator()(const Rational& x) const;
  double eval(double x) const;

  RationalPoly derivative() const;
  RationalPoly antiderivative() const;  // zero constant term
  Rational integrate(const Rational& a, const Rational& b) const;

  // p(a x + b)
  RationalPoly compose_affine(const Rational& a, const Rational& b) const;

  RationalPoly operator+(const RationalPoly& o) const;
  RationalPoly operator-(const RationalPoly& o) const;
  RationalPoly operator*(const RationalPoly& o) const;
  RationalPoly operator*(const Rational& s) const;
  RationalPoly& operator+=(const RationalPoly& o);

  bool is_zero() const { return coeffs_.empty(); }
  bool operator==(const RationalPoly&) const = default;

  // Number of distinct real roots in the open interval (a, b), via a Sturm
  // sequence. The polynomial must be nonzero.
  int count_roots(const Rational& a, const Rational& b) const;
  // Squarefree part p / gcd(p, p').
  RationalPoly squarefree() const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// Polynomial long division; throws std::domain_error on a zero divisor.
void divmod(const RationalPoly& num, const RationalPoly& den, RationalPoly& quot, RationalPoly& rem);
RationalPoly gcd(RationalPoly a, RationalPoly b);

}  // namespace cardguess
