#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace intertwine {

// GMP keeps mpq_class canonical (reduced, positive denominator) as long as
// every value is either produced by arithmetic or passed through canonicalize().
using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Accepts "p", "p/q", and plain decimals such as "-1.05" or "2e-3";
/// every accepted string is converted exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double (every double is a dyadic rational).
Rational from_double(double value);

double to_double(const Rational& r);

Integer factorial(unsigned long n);

/// binom(n, k) with the convention binom(n, k) = 0 unless 0 <= k <= n.
Integer binomial(long n, long k);

/// 2^e for any integer e.
Rational pow2(long e);

int sign(const Rational& r);

}  // namespace intertwine
