#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cfsem {

/// Exact rational number. All probabilities, distances and weights in the
/// engine are values of this type; no floating point enters any computation.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses a probability-like literal: a decimal ("0.82", "1", ".5") or a
/// fraction of integers ("41/50"). Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical fraction rendering: "41/50", or just "1" when the denominator
/// is one.
std::string format_fraction(const Rational& r);

/// Fixed-point decimal rendering with the given number of fractional digits,
/// rounding half to even. format_decimal(801/1250, 6) == "0.640800".
std::string format_decimal(const Rational& r, unsigned digits);

/// The rational closest to r with the given number of fractional digits,
/// ties to even. Used for "rounds to" checks.
Rational round_half_even(const Rational& r, unsigned digits);

}  // namespace cfsem
