#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "flatland/errors.hpp"

namespace flatland {

using BigInt = boost::multiprecision::cpp_int;

/// Unbounded exact rational, always kept in lowest terms with a positive
/// denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow3(std::size_t exponent) {
  return boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(exponent));
}

/// Renders as "p/q", including "p/1" for integers.
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {

inline BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw ParseError("malformed rational '" + std::string(whole) + "'");
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw ParseError("malformed rational '" + std::string(whole) + "'");
    value = value * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace detail

/// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(text, text));
  const BigInt num = detail::parse_integer(text.substr(0, slash), text);
  const BigInt den = detail::parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw ZeroDenominator("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace flatland
