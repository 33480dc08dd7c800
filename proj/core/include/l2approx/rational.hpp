#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace l2approx {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p" or "p/q" with an optional sign. Decimal points and exponents
/// are rejected so that every coefficient enters the core exactly.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; the denominator is always written, e.g. "3/1", "0/1".
std::string to_string(const Rational& value);

bool is_integer(const Rational& value);

/// Exact square root when `value` is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& value);

/// Smallest integer n >= 0 with n*n >= value (value >= 0).
Integer ceil_sqrt(const Rational& value);

long double to_long_double(const Rational& value);

}  // namespace l2approx
