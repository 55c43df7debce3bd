#include "coreflow/rational.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "coreflow/errors.hpp"

namespace coreflow {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational rat_of_string(std::string_view text) {
  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && rest.front() == '-') {
    negative = true;
    rest.remove_prefix(1);
  }
  std::string_view num_part = rest;
  std::string_view den_part;
  if (auto slash = rest.find('/'); slash != std::string_view::npos) {
    num_part = rest.substr(0, slash);
    den_part = rest.substr(slash + 1);
    if (!all_digits(den_part)) {
      throw ParseError("malformed fraction literal: \"" + std::string(text) + "\"");
    }
  }
  if (!all_digits(num_part)) {
    throw ParseError("malformed fraction literal: \"" + std::string(text) + "\"");
  }

  BigInt num{std::string(num_part)};
  BigInt den = den_part.empty() ? BigInt(1) : BigInt{std::string(den_part)};
  if (den == 0) {
    throw std::domain_error("fraction literal with zero denominator: \"" + std::string(text) +
                            "\"");
  }
  if (negative) num = -num;
  return Rational(num, den);
}

std::string rat_to_string(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

BigInt common_denominator(std::span<const Rational> values) {
  if (values.empty()) {
    throw std::invalid_argument("common_denominator: empty list");
  }
  BigInt acc = 1;
  for (const Rational& v : values) {
    acc = boost::multiprecision::lcm(acc, denominator(v));
  }
  return acc;
}

BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }

BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

bool is_integer(const Rational& r) { return denominator(r) == 1; }

bool is_zero_or_one(const Rational& r) { return r == 0 || r == 1; }

BigInt rat_ceil(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);  // truncates toward zero
  if (q * denominator(r) != numerator(r) && r > 0) ++q;
  return q;
}

}  // namespace coreflow
