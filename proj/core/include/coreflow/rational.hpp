#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <string>
#include <string_view>

namespace coreflow {

using BigInt = boost::multiprecision::cpp_int;

// Exact arithmetic everywhere: probabilities, dissatisfaction weights, flow
// epsilons and objective values are all Rational. cpp_rational keeps the
// canonical form for us (positive denominator, gcd-reduced), so equality and
// comparisons are bit-exact. No floating point in any solve path.
using Rational = boost::multiprecision::cpp_rational;

// Parses a fraction literal: an optional sign, digits, and optionally
// "/digits" ("3/7", "2", "-6/4"). The result is canonical. Throws ParseError
// on malformed text and std::domain_error on a zero denominator.
Rational rat_of_string(std::string_view text);

// Renders "p/q", with "/q" omitted when the denominator is 1. This is the
// fraction format used in every instance and report file.
std::string rat_to_string(const Rational& r);

// Least common multiple of all denominators; multiplying each value by it
// yields integers. Throws std::invalid_argument on an empty list.
BigInt common_denominator(std::span<const Rational> values);

BigInt numerator(const Rational& r);
BigInt denominator(const Rational& r);

bool is_integer(const Rational& r);
bool is_zero_or_one(const Rational& r);

// Smallest integer >= r.
BigInt rat_ceil(const Rational& r);

}  // namespace coreflow
