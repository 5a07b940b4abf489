#include "cardguess/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace cardguess {

namespace mp = boost::multiprecision;

BigInt to_bigint(u128 v) {
  BigInt hi = static_cast<std::uint64_t>(v >> 64);
  BigInt lo = static_cast<std::uint64_t>(v);
  return (hi << 64) | lo;
}

u128 to_u128(const BigInt& v) {
  if (v == 0) return 0;
  if (v < 0 || mp::msb(v) >= 128) throw std::overflow_error("value does not fit in 128 bits");
  const BigInt mask = (BigInt(1) << 64) - 1;
  const auto lo = static_cast<std::uint64_t>(v & mask);
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  return (static_cast<u128>(hi) << 64) | lo;
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer for every double.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r = BigInt(scaled);
  if (exp >= 0) {
    r *= BigInt(1) << exp;
  } else {
    r /= BigInt(1) << (-exp);
  }
  return r;
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) fail();
    return num / den;
  }
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  BigInt digits = 0;
  BigInt scale = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.') {
      if (seen_point) fail();
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits = digits * 10 + (ch - '0');
      if (seen_point) scale *= 10;
      seen_digit = true;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  Rational r(digits, scale);
  return negative ? Rational(-r) : r;
}

std::string format_decimal(const Rational& r, int digits) {
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const Rational scaled = r * scale;
  const bool negative = scaled < 0;
  const Rational mag = negative ? Rational(-scaled) : scaled;
  const BigInt num = mp::numerator(mag);
  const BigInt den = mp::denominator(mag);
  BigInt q = num / den;
  const BigInt rem2 = 2 * (num % den);
  if (rem2 > den || (rem2 == den && (q & 1) == 1)) ++q;

  std::string body = q.str();
  if (digits > 0) {
    if (static_cast<int>(body.size()) <= digits) {
      body.insert(0, static_cast<std::size_t>(digits + 1 - static_cast<int>(body.size())), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && q != 0) body.insert(0, "-");
  return body;
}

std::string format_decimal(double x, int digits) {
  return format_decimal(from_double(x), digits);
}

std::string format_fraction(const Rational& r) {
  const BigInt den = mp::denominator(r);
  if (den == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + den.str();
}

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) throw std::domain_error("isqrt of negative");
  auto r = static_cast<i128>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return static_cast<std::int64_t>(r);
}

}  // namespace cardguess
