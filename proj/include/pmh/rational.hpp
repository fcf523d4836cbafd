#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "pmh/errors.hpp"

namespace pmh {

using BigInt = boost::multiprecision::cpp_int;
// Always kept in lowest terms with a positive denominator by the backend.
using Rational = boost::multiprecision::cpp_rational;

// The two carriers a measure can be built on. Exact mode is chosen by
// constructing with Rational; there is no implicit promotion between them.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& r) { return r.convert_to<double>(); }

template <Scalar T>
T ipow(T base, unsigned exponent) {
  T result{1};
  while (exponent != 0) {
    if ((exponent & 1U) != 0) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

template <Scalar T>
T abs_value(const T& x) {
  return x < T{0} ? T(-x) : x;
}

namespace detail {

inline BigInt pow10(unsigned e) {
  BigInt p = 1;
  for (unsigned i = 0; i < e; ++i) p *= 10;
  return p;
}

// Floor division for a positive denominator.
inline BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

inline std::string insert_point(const BigInt& scaled, int decimals) {
  const bool negative = scaled < 0;
  std::string digits = (negative ? BigInt(-scaled) : scaled).str();
  if (decimals > 0) {
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
      digits.insert(0, static_cast<std::size_t>(decimals) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  return negative ? "-" + digits : digits;
}

}  // namespace detail

// Parses "3", "-0.125", "2.5e-3", "1/3" or "-7/12" exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> ParseError {
    return ParseError("not a rational number: '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      any_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();

  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw fail();
    ++pos;
    const std::string rest(text.substr(pos));
    if (rest.empty()) throw fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(rest, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != rest.size() || exponent > 4000 || exponent < -4000) throw fail();
  }

  const long shift = exponent - scale;
  Rational value(mantissa);
  if (shift > 0) value *= Rational(detail::pow10(static_cast<unsigned>(shift)));
  if (shift < 0) value /= Rational(detail::pow10(static_cast<unsigned>(-shift)));
  return negative ? Rational(-value) : value;
}

// "p/q", or "p" when the denominator is one.
inline std::string to_fraction_string(const Rational& r) {
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

// Fixed-point rendering with round-half-even at the requested precision.
inline std::string to_fixed(const Rational& r, int decimals) {
  const BigInt scale = detail::pow10(static_cast<unsigned>(decimals < 0 ? 0 : decimals));
  const Rational scaled = r * Rational(scale);
  const BigInt& num = boost::multiprecision::numerator(scaled);
  const BigInt& den = boost::multiprecision::denominator(scaled);
  BigInt q = detail::floor_div(num, den);
  const Rational remainder = scaled - Rational(q);
  const Rational half(1, 2);
  if (remainder > half || (remainder == half && q % 2 != 0)) q += 1;
  return detail::insert_point(q, decimals);
}

// Exact decimal expansion when the denominator has only factors 2 and 5.
inline bool is_terminating_decimal(const Rational& r) {
  BigInt den = boost::multiprecision::denominator(r);
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  return den == 1;
}

// Lossless text form: a plain decimal when one exists, otherwise "p/q".
inline std::string to_exact_string(const Rational& r) {
  if (!is_terminating_decimal(r)) return to_fraction_string(r);
  int decimals = 0;
  Rational probe = r;
  while (boost::multiprecision::denominator(probe) != 1) {
    probe *= 10;
    ++decimals;
  }
  return detail::insert_point(boost::multiprecision::numerator(probe), decimals);
}

// Twelve significant digits; the CSV convention for real-valued columns.
inline std::string format_sig(double x, int significant = 12) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", significant, x);
  return buffer;
}

inline std::string format_sig(const Rational& r, int significant = 12) {
  return format_sig(to_double(r), significant);
}

}  // namespace pmh
