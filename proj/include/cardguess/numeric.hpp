#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace cardguess {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using u128 = unsigned __int128;
using i128 = __int128;

BigInt to_bigint(u128 v);
// Throws std::overflow_error if v does not fit.
u128 to_u128(const BigInt& v);
std::string to_string(u128 v);

BigInt factorial(int n);
BigInt binomial(int n, int k);

double to_double(const Rational& r);
// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double x);

// Parses "0.35", "-1.25", "7/20", "3" into an exact rational.
Rational parse_rational(std::string_view text);

// Round-half-even to `digits` decimal places, printed with exactly that many
// fractional digits.
std::string format_decimal(const Rational& r, int digits);
std::string format_decimal(double x, int digits);

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_fraction(const Rational& r);

// Integer square-root floor.
std::int64_t isqrt(std::int64_t v);

}  // namespace cardguess
