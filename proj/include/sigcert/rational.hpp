#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigcert {

/// Arbitrary-precision rational used throughout the symbolic layer.
using Rational = mpq_class;

/// Parses "p", "p/q", "-p/q" or a decimal literal such as "1.25" or "-3e-2"
/// into an exact rational. Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Exact binary value of a double (every finite double is a dyadic rational).
Rational exact_rational(double x);

std::vector<Rational> exact_rationals(std::span<const double> xs);

}  // namespace sigcert
