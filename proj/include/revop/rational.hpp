#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "revop/error.hpp"

namespace revop {

// Arbitrary-precision rational, always in lowest terms with positive
// denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den = 1) { return Rational(BigInt(num), BigInt(den)); }

// Always "p/q", including integers ("0/1", "1/1").
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw UsageError("malformed rational '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw UsageError("malformed rational '" + std::string(text) + "'");
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw UsageError("malformed rational '" + std::string(text) + "'");
    return BigInt(std::string(s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

}  // namespace revop
