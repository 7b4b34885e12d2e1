#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ceei {

/// Arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "a" or "a/b" (optional leading '-'). Throws std::invalid_argument
/// on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical rendering: "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Closest representable rational to a finite double (exact binary expansion).
Rational from_double(double value);

}  // namespace ceei
