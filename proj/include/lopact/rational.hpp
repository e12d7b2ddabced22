#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lopact {

// Exact rational arithmetic. Every coefficient, norm and error bound in the
// library is a Rational; doubles only appear in rendered reports.
using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in lowest terms with a positive denominator; den != 0.
Rational make_rational(const Integer& num, const Integer& den);

/// "p/q" with q > 0, always including the denominator.
std::string to_fraction_string(const Rational& q);

/// Deterministic scientific rendering with `digits` significant digits,
/// computed with integer arithmetic (no platform float formatting).
std::string to_decimal_string(const Rational& q, int digits = 12);

/// Accepts "p", "p/q", and plain decimals such as "0.001" or "1e-3".
/// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

/// Nearest integer, ties rounded up.
Integer round_of(const Rational& q);

/// Representative of q mod 1 in [0, 1).
Rational frac(const Rational& q);

/// Distance from q to the nearest integer, in [0, 1/2].
Rational distance_to_integer(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);

double to_double(const Rational& q);

}  // namespace lopact
