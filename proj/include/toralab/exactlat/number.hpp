#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>

namespace toralab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an operation's precondition on its inputs is violated.
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

template <class T>
std::strong_ordering compare3(const T& a, const T& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Rational abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }

/// Floor division for signed operands, b != 0.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Representative of a modulo m in [0, |m|).
inline Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs(m);
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

/// Extended Euclid: returns (g, s, t) with g = s*a + t*b, g >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

inline Integer floor(const Rational& r) { return floor_div(numerator(r), denominator(r)); }

/// Fractional part in [0,1).
inline Rational frac(const Rational& r) { return r - Rational(floor(r)); }

/// "p/q" in lowest terms, or "p" when q == 1.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string to_string(const Integer& i) { return i.str(); }

/// Parses "p", "p/q", or a plain decimal such as "0.001" or "1e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  std::size_t start = s.find_first_not_of(" \t");
  if (start == std::string::npos) throw domain_error("empty rational literal");
  s = s.substr(start);
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      Integer num(s.substr(0, slash));
      Integer den(s.substr(slash + 1));
      if (den == 0) throw domain_error("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    std::string mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
      mantissa = s.substr(0, e);
      exponent = std::stol(s.substr(e + 1));
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
      negative = mantissa[0] == '-';
      mantissa = mantissa.substr(1);
    }
    std::string digits;
    long scale = 0;
    bool seen_point = false;
    for (char c : mantissa) {
      if (c == '.') {
        if (seen_point) throw domain_error("bad number '" + s + "'");
        seen_point = true;
      } else if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (seen_point) ++scale;
      } else {
        throw domain_error("bad number '" + s + "'");
      }
    }
    if (digits.empty()) throw domain_error("bad number '" + s + "'");
    Rational value{Integer(digits)};
    long shift = exponent - scale;
    Integer ten = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
    value = shift < 0 ? value / Rational(ten) : value * Rational(ten);
    return negative ? Rational(-value) : value;
  } catch (const domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw domain_error("bad number '" + s + "'");
  }
}

inline long double to_long_double(const Rational& r) {
  return r.convert_to<long double>();
}

}  // namespace toralab
