#pragma once

#include "toralab/toral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace toralab {

/// Orbits f^0 .. f^{steps-1} of a batch of rational points, stored as int64
/// numerators over one common denominator.
///
/// This is the word-size kernel behind separated sets and Bowen balls; every
/// distance comparison is still exact (integers over the shared den). build()
/// returns nullopt when the common denominator or the matrix does not fit, and
/// callers fall back to TorusPoint arithmetic.
class OrbitTable {
 public:
  static constexpr long long max_den = 1LL << 60;

  static std::optional<OrbitTable> build(const IntMatrix2& m, const std::vector<TorusPoint>& pts, std::size_t steps,
                                         const Integer& extra_den = 1) {
    if (steps < 1) throw domain_error("OrbitTable: steps must be >= 1");
    Integer l = extra_den;
    for (const auto& p : pts) {
      l = l / gcd(l, p.common_den()) * p.common_den();
      if (l > max_den) return std::nullopt;
    }
    for (const Integer* e : {&m.a, &m.b, &m.c, &m.d})
      if (abs(*e) > max_den) return std::nullopt;
    OrbitTable t;
    t.den_ = l.convert_to<long long>();
    t.steps_ = steps;
    t.m_ = {mod(m.a, t.den_), mod(m.b, t.den_), mod(m.c, t.den_), mod(m.d, t.den_)};
    for (const auto& p : pts) t.push(p);
    return t;
  }

  long long den() const { return den_; }
  std::size_t steps() const { return steps_; }
  std::size_t size() const { return xs_.size() / steps_; }

  long long x(std::size_t i, std::size_t k) const { return xs_[i * steps_ + k]; }
  long long y(std::size_t i, std::size_t k) const { return ys_[i * steps_ + k]; }

  /// Appends the orbit of p; false if p's denominator does not divide den().
  bool push(const TorusPoint& p) {
    if (den_ % p.common_den() != 0) return false;
    long long scale = den_ / p.common_den().convert_to<long long>();
    long long x = p.x_num_common().convert_to<long long>() * scale;
    long long y = p.y_num_common().convert_to<long long>() * scale;
    for (std::size_t k = 0; k < steps_; ++k) {
      xs_.push_back(x);
      ys_.push_back(y);
      long long nx = static_cast<long long>((static_cast<__int128>(m_[0]) * x + static_cast<__int128>(m_[1]) * y) % den_);
      long long ny = static_cast<long long>((static_cast<__int128>(m_[2]) * x + static_cast<__int128>(m_[3]) * y) % den_);
      x = nx;
      y = ny;
    }
    return true;
  }

  long long circle_gap(long long a, long long b) const {
    long long g = a > b ? a - b : b - a;
    return g < den_ - g ? g : den_ - g;
  }

  /// Sup distance between f^k(p_i) and f^k(p_j), as a numerator over den().
  long long torus_gap(std::size_t i, std::size_t j, std::size_t k) const {
    return std::max(circle_gap(x(i, k), x(j, k)), circle_gap(y(i, k), y(j, k)));
  }

  /// Quotient distance min(d(u, v), d(u, -v)) at step k.
  long long sphere_gap(std::size_t i, std::size_t j, std::size_t k) const {
    long long direct = torus_gap(i, j, k);
    long long nx = x(j, k) == 0 ? 0 : den_ - x(j, k), ny = y(j, k) == 0 ? 0 : den_ - y(j, k);
    long long flipped = std::max(circle_gap(x(i, k), nx), circle_gap(y(i, k), ny));
    return direct < flipped ? direct : flipped;
  }

 private:
  static long long mod(const Integer& v, long long d) { return floor_mod(v, Integer(d)).convert_to<long long>(); }

  long long den_ = 1;
  std::size_t steps_ = 1;
  std::array<long long, 4> m_{};
  std::vector<long long> xs_, ys_;
};

/// Integer threshold T with gap/den <= r  <=>  gap <= T (and > r <=> gap > T).
inline long long gap_threshold(const Rational& r, long long den) { return floor(r * Rational(den)).convert_to<long long>(); }

}  // namespace toralab
