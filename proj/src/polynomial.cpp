#include "cardguess/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace cardguess {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::bernstein_like(int a, int b, const Rational& c) {
  // (1 - u)^b expanded with binomial coefficients, shifted by u^a.
  std::vector<Rational> v(static_cast<std::size_t>(a + b) + 1, Rational(0));
  for (int j = 0; j <= b; ++j) {
    Rational term = c * Rational(binomial(b, j));
    if (j % 2 == 1) term = -term;
    v[static_cast<std::size_t>(a + j)] = term;
  }
  return RationalPoly(std::move(v));
}

Rational RationalPoly::coeff(int i) const {
  return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(i)]
                                                         : Rational(0);
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double RationalPoly::eval(double x) const {
  double acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

RationalPoly RationalPoly::derivative() const {
  std::vector<Rational> v;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) v.push_back(coeffs_[i] * static_cast<int>(i));
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::antiderivative() const {
  std::vector<Rational> v(coeffs_.size() + 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i + 1] = coeffs_[i] / static_cast<int>(i + 1);
  return RationalPoly(std::move(v));
}

Rational RationalPoly::integrate(const Rational& a, const Rational& b) const {
  const RationalPoly p = antiderivative();
  return p(b) - p(a);
}

RationalPoly RationalPoly::compose_affine(const Rational& a, const Rational& b) const {
  // Horner in polynomial arithmetic.
  const RationalPoly lin({b, a});
  RationalPoly acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + constant(*it);
  return acc;
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
  std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const { return *this + o * Rational(-1); }

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::operator*(const Rational& s) const {
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c *= s;
  return RationalPoly(std::move(v));
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  *this = *this + o;
  return *this;
}

void divmod(const RationalPoly& num, const RationalPoly& den, RationalPoly& quot, RationalPoly& rem) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r = num.coeffs();
  const int dd = den.degree();
  const Rational lead = den.coeffs().back();
  std::vector<Rational> q(static_cast<std::size_t>(std::max(0, num.degree() - dd + 1)), Rational(0));
  for (int i = num.degree(); i >= dd; --i) {
    const Rational f = r[static_cast<std::size_t>(i)] / lead;
    q[static_cast<std::size_t>(i - dd)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= dd; ++j) {
      r[static_cast<std::size_t>(i - dd + j)] -= f * den.coeffs()[static_cast<std::size_t>(j)];
    }
  }
  quot = RationalPoly(std::move(q));
  rem = RationalPoly(std::move(r));
}

RationalPoly gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    RationalPoly q;
    RationalPoly r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * (Rational(1) / a.coeffs().back());
}

RationalPoly RationalPoly::squarefree() const {
  if (degree() <= 0) return *this;
  const RationalPoly g = gcd(*this, derivative());
  RationalPoly q;
  RationalPoly r;
  divmod(*this, g, q, r);
  return q;
}

int RationalPoly::count_roots(const Rational& a, const Rational& b) const {
  if (is_zero()) throw std::domain_error("count_roots of the zero polynomial");
  const RationalPoly p = squarefree();
  std::vector<RationalPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    RationalPoly q;
    RationalPoly r;
    divmod(seq[seq.size() - 2], seq.back(), q, r);
    if (r.is_zero()) break;
    seq.push_back(r * Rational(-1));
  }
  auto variations = [&](const Rational& x) {
    int changes = 0;
    int last = 0;
    for (const auto& s : seq) {
      const Rational v = s(x);
      const int sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (sign == 0) continue;
      if (last != 0 && sign != last) ++changes;
      last = sign;
    }
    return changes;
  };
  // Sturm counts roots in (a, b]; drop a root sitting exactly at b.
  int roots = variations(a) - variations(b);
  if (p(b) == 0) --roots;
  return roots;
}

std::string RationalPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) out << " + ";
    out << "(" << format_fraction(coeffs_[i]) << ")";
    if (i > 0) out << "*u^" << i;
    first = false;
  }
  return out.str();
}

}  // namespace cardguess
