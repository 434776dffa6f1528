#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace treebound {

// Exact arbitrary-precision rational. Every quantity in the analyzer (tick
// amounts, annotation coefficients, LP tableau entries, evaluator costs) is
// one of these; no floating point anywhere.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses an integer, decimal, or fraction literal ("2", "-1.5", "3/4")
// into an exact rational. Decimal digits become an exact power-of-ten
// denominator: "1.5" -> 3/2, never a float round-trip.
inline std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool neg = false;
  if (text[pos] == '-' || text[pos] == '+') {
    neg = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::string& out) {
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') out += text[pos++];
    return pos > start;
  };
  std::string whole;
  if (!digits(whole)) return std::nullopt;
  Rational value{BigInt(whole)};
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::string frac;
    if (!digits(frac)) return std::nullopt;
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    value += Rational(BigInt(frac), den);
  } else if (pos < text.size() && text[pos] == '/') {
    ++pos;
    std::string den;
    if (!digits(den)) return std::nullopt;
    BigInt d{den};
    if (d == 0) return std::nullopt;
    value = Rational(BigInt(whole), d);
  }
  if (pos != text.size()) return std::nullopt;
  return neg ? Rational(-value) : value;
}

// Renders exactly: integers plain ("3"), non-integers as "num/den" ("3/2").
inline std::string rational_str(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

}  // namespace treebound
