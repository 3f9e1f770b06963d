#pragma once

#include "toralab/exactlat/number.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <compare>
#include <string>

namespace toralab {

/// Element p + q*sqrt(disc) of the real quadratic field Q(sqrt(disc)).
///
/// disc must be a positive non-square integer. Values from different fields
/// never mix; binary operations check this. A value with disc == 0 is a
/// plain rational that adopts the field of the other operand.
class QuadNumber {
 public:
  QuadNumber() = default;
  QuadNumber(Rational p, Rational q, Integer disc) : p_(std::move(p)), q_(std::move(q)), disc_(std::move(disc)) {
    if (disc_ < 0) throw domain_error("QuadNumber: negative discriminant");
    if (disc_ != 0) {
      Integer r = boost::multiprecision::sqrt(disc_);
      if (r * r == disc_) throw domain_error("QuadNumber: discriminant " + disc_.str() + " is a perfect square");
    }
    if (q_ != 0 && disc_ == 0) throw domain_error("QuadNumber: irrational part without discriminant");
  }
  // NOLINTNEXTLINE(google-explicit-constructor)
  QuadNumber(Rational p) : p_(std::move(p)) {}
  // NOLINTNEXTLINE(google-explicit-constructor)
  QuadNumber(int p) : p_(p) {}

  static QuadNumber sqrt_of(const Integer& disc) { return {0, 1, disc}; }

  const Rational& rational_part() const { return p_; }
  const Rational& irrational_part() const { return q_; }
  const Integer& disc() const { return disc_; }
  bool is_rational() const { return q_ == 0; }

  QuadNumber conjugate() const { return make(p_, -q_, disc_); }
  /// Field norm (p + q sqrt D)(p - q sqrt D).
  Rational norm() const { return p_ * p_ - q_ * q_ * Rational(disc_); }

  int sign() const {
    int sp = p_ > 0 ? 1 : (p_ < 0 ? -1 : 0);
    int sq = q_ > 0 ? 1 : (q_ < 0 ? -1 : 0);
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // opposite signs: compare p^2 with q^2 D
    Rational lhs = p_ * p_;
    Rational rhs = q_ * q_ * Rational(disc_);
    if (lhs == rhs) return 0;  // impossible for non-square D, kept for safety
    return lhs > rhs ? sp : sq;
  }

  QuadNumber operator-() const { return make(-p_, -q_, disc_); }

  friend QuadNumber operator+(const QuadNumber& x, const QuadNumber& y) {
    return make(x.p_ + y.p_, x.q_ + y.q_, common_disc(x, y));
  }
  friend QuadNumber operator-(const QuadNumber& x, const QuadNumber& y) {
    return make(x.p_ - y.p_, x.q_ - y.q_, common_disc(x, y));
  }
  friend QuadNumber operator*(const QuadNumber& x, const QuadNumber& y) {
    Integer d = common_disc(x, y);
    return make(x.p_ * y.p_ + x.q_ * y.q_ * Rational(d), x.p_ * y.q_ + x.q_ * y.p_, d);
  }
  QuadNumber inverse() const {
    Rational n = norm();
    if (n == 0) throw domain_error("QuadNumber: division by zero");
    return make(p_ / n, -q_ / n, disc_);
  }
  friend QuadNumber operator/(const QuadNumber& x, const QuadNumber& y) { return x * y.inverse(); }

  QuadNumber& operator+=(const QuadNumber& y) { return *this = *this + y; }
  QuadNumber& operator-=(const QuadNumber& y) { return *this = *this - y; }
  QuadNumber& operator*=(const QuadNumber& y) { return *this = *this * y; }
  QuadNumber& operator/=(const QuadNumber& y) { return *this = *this / y; }

  friend bool operator==(const QuadNumber& x, const QuadNumber& y) {
    return x.p_ == y.p_ && x.q_ == y.q_;
  }
  friend std::strong_ordering operator<=>(const QuadNumber& x, const QuadNumber& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  long double to_long_double() const {
    return toralab::to_long_double(p_) +
           toralab::to_long_double(q_) * std::sqrt(static_cast<long double>(disc_.convert_to<long double>()));
  }

  /// Exact floor; the float estimate is corrected by exact comparisons.
  Integer floor() const {
    if (is_rational()) return toralab::floor(p_);
    long double est = to_long_double();
    Integer f;
    if (std::isfinite(est) && std::fabs(est) < 1e15L) {
      f = Integer(static_cast<long long>(std::floor(est)));
    } else {
      f = bisect_floor();
    }
    while (QuadNumber(Rational(f)) > *this) --f;
    while (QuadNumber(Rational(f + 1)) <= *this) ++f;
    return f;
  }

  std::string str() const {
    if (q_ == 0) return to_string(p_);
    return to_string(p_) + (q_ < 0 ? " - " : " + ") + to_string(abs(q_)) + "*sqrt(" + disc_.str() + ")";
  }

 private:
  static QuadNumber make(Rational p, Rational q, Integer disc) {
    QuadNumber r;
    r.p_ = std::move(p);
    r.q_ = std::move(q);
    r.disc_ = r.q_ == 0 && disc == 0 ? Integer(0) : std::move(disc);
    return r;
  }

  static Integer common_disc(const QuadNumber& x, const QuadNumber& y) {
    if (x.disc_ == 0) return y.disc_;
    if (y.disc_ == 0 || x.disc_ == y.disc_) return x.disc_;
    throw domain_error("QuadNumber: mixing fields sqrt(" + x.disc_.str() + ") and sqrt(" + y.disc_.str() + ")");
  }

  // Floor by integer bisection for values out of long double range.
  Integer bisect_floor() const {
    Integer bound = abs(toralab::floor(p_)) + (abs(toralab::floor(q_)) + 1) * (boost::multiprecision::sqrt(disc_) + 1) + 2;
    Integer lo = -bound, hi = bound;  // lo <= x < hi
    while (hi - lo > 1) {
      Integer mid = floor_div(lo + hi, 2);
      if (QuadNumber(Rational(mid)) <= *this) lo = mid; else hi = mid;
    }
    return lo;
  }

  Rational p_{0};
  Rational q_{0};
  Integer disc_{0};
};

inline QuadNumber abs(const QuadNumber& x) { return x.sign() < 0 ? -x : x; }

inline QuadNumber max(const QuadNumber& x, const QuadNumber& y) { return x < y ? y : x; }

inline QuadNumber pow(const QuadNumber& x, long n) {
  if (n < 0) return pow(x.inverse(), -n);
  QuadNumber result(1);
  QuadNumber base = x;
  while (n > 0) {
    if (n & 1L) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

/// Fractional part in [0,1), exact.
inline QuadNumber frac(const QuadNumber& x) { return x - QuadNumber(Rational(x.floor())); }

}  // namespace toralab
