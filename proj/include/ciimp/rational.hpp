#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace ciimp {

/// Exact arbitrary-precision rational. Always stored in lowest terms with a
/// positive denominator; provides a total order and exact field arithmetic.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

/// Formats as "num/den" with the denominator always spelled out ("3/1", "-2/5").
inline std::string rational_to_fraction(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "n", "n/d" and an optional leading sign. Throws std::invalid_argument.
inline Rational rational_from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: '" + text + "'");
  }
}

}  // namespace ciimp
