#pragma once

#include "toralab/exactlat.hpp"

#include <algorithm>
#include <compare>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace toralab {

/// Exact rational point of T^2 = R^2/Z^2.
///
/// Stored as (x_num, y_num) over a common denominator den with
/// 0 <= x_num, y_num < den and gcd(x_num, y_num, den) = 1, which is unique
/// for each point. x() and y() give the coordinates in lowest terms.
class TorusPoint {
 public:
  TorusPoint() = default;
  TorusPoint(const Rational& x, const Rational& y) {
    Rational fx = frac(x), fy = frac(y);
    Integer dx = denominator(fx), dy = denominator(fy);
    Integer l = dx / gcd(dx, dy) * dy;
    den_ = l;
    xn_ = numerator(fx) * (l / dx);
    yn_ = numerator(fy) * (l / dy);
  }

  /// (x_num/den, y_num/den) reduced mod 1 and canonicalized.
  static TorusPoint from_numerators(const Integer& x_num, const Integer& y_num, const Integer& den) {
    if (den <= 0) throw domain_error("TorusPoint: denominator must be positive");
    TorusPoint p;
    p.xn_ = floor_mod(x_num, den);
    p.yn_ = floor_mod(y_num, den);
    p.den_ = den;
    p.reduce();
    return p;
  }

  Rational x() const { return Rational(xn_, den_); }
  Rational y() const { return Rational(yn_, den_); }
  const Integer& x_num_common() const { return xn_; }
  const Integer& y_num_common() const { return yn_; }
  const Integer& common_den() const { return den_; }

  /// The antipode -p mod Z^2.
  TorusPoint negated() const {
    TorusPoint p;
    p.den_ = den_;
    p.xn_ = xn_ == 0 ? Integer(0) : Integer(den_ - xn_);
    p.yn_ = yn_ == 0 ? Integer(0) : Integer(den_ - yn_);
    return p;
  }

  /// p = -p mod Z^2, i.e. both coordinates in {0, 1/2}.
  bool is_self_antipodal() const { return den_ <= 2; }

  /// Exact translation by a rational vector.
  TorusPoint translated(const Rational& dx, const Rational& dy) const { return {x() + dx, y() + dy}; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

  /// Lexicographic on (x, y) as rationals.
  friend std::strong_ordering operator<=>(const TorusPoint& p, const TorusPoint& q) {
    if (p.den_ == q.den_) {
      if (auto c = compare3(p.xn_, q.xn_); c != 0) return c;
      return compare3(p.yn_, q.yn_);
    }
    Integer lx = p.xn_ * q.den_, rx = q.xn_ * p.den_;
    if (lx != rx) return lx < rx ? std::strong_ordering::less : std::strong_ordering::greater;
    Integer ly = p.yn_ * q.den_, ry = q.yn_ * p.den_;
    if (ly != ry) return ly < ry ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  void reduce() {
    Integer g = gcd(gcd(xn_, yn_), den_);
    if (g > 1) {
      xn_ /= g;
      yn_ /= g;
      den_ /= g;
    }
  }

  Integer xn_{0};
  Integer yn_{0};
  Integer den_{1};
};

/// "p/q r/s" with both fractions in lowest terms ("0/1" for zero).
inline std::string to_string(const TorusPoint& p) {
  auto frac_str = [](const Rational& r) { return numerator(r).str() + "/" + denominator(r).str(); };
  return frac_str(p.x()) + " " + frac_str(p.y());
}

inline std::ostream& operator<<(std::ostream& os, const TorusPoint& p) { return os << to_string(p); }

inline TorusPoint parse_torus_point(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string xs, ys, extra;
  if (!(in >> xs >> ys)) throw domain_error("torus point needs two coordinates: '" + std::string(text) + "'");
  if (in >> extra) throw domain_error("torus point has trailing tokens: '" + std::string(text) + "'");
  return {parse_rational(xs), parse_rational(ys)};
}

/// Circle distance between a/den and b/den, as a numerator over den.
inline Integer circle_gap(const Integer& a, const Integer& b, const Integer& den) {
  Integer g = abs(a - b);
  Integer h = den - g;
  return g < h ? g : h;
}

/// Circle distance min(|x - y| mod 1, 1 - ...) in [0, 1/2].
inline Rational circle_distance(const Rational& x, const Rational& y) {
  Rational f = frac(x - y);
  Rational g = 1 - f;
  return f < g ? f : g;
}

/// Sup-metric on T^2: max of the two coordinatewise circle distances.
inline Rational torus_distance(const TorusPoint& p, const TorusPoint& q) {
  if (p.common_den() == q.common_den()) {
    const Integer& den = p.common_den();
    Integer gx = circle_gap(p.x_num_common(), q.x_num_common(), den);
    Integer gy = circle_gap(p.y_num_common(), q.y_num_common(), den);
    return Rational(gx < gy ? gy : gx, den);
  }
  Rational dx = circle_distance(p.x(), q.x());
  Rational dy = circle_distance(p.y(), q.y());
  return dx < dy ? dy : dx;
}

/// f_A(p) = A p mod Z^2.
inline TorusPoint apply(const IntMatrix2& m, const TorusPoint& p) {
  const Integer& den = p.common_den();
  Integer x = m.a * p.x_num_common() + m.b * p.y_num_common();
  Integer y = m.c * p.x_num_common() + m.d * p.y_num_common();
  return TorusPoint::from_numerators(x, y, den);
}

/// f_A^n(p).
inline TorusPoint apply_n(const IntMatrix2& m, const TorusPoint& p, unsigned long n) {
  return apply(mat_pow(m, n), p);
}

/// [p, f(p), ..., f^{n-1}(p)].
inline std::vector<TorusPoint> orbit(const IntMatrix2& m, const TorusPoint& p, std::size_t n) {
  std::vector<TorusPoint> out;
  out.reserve(n);
  TorusPoint cur = p;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(cur);
    if (i + 1 < n) cur = apply(m, cur);
  }
  return out;
}

/// Smallest m in [1, bound] with f^m(p) = p; nullopt means "exceeds bound".
inline std::optional<unsigned long> least_period(const IntMatrix2& m, const TorusPoint& p, unsigned long bound) {
  TorusPoint cur = p;
  for (unsigned long k = 1; k <= bound; ++k) {
    cur = apply(m, cur);
    if (cur == p) return k;
  }
  return std::nullopt;
}

enum class PeriodicKind { periodic, antipodal };

inline const char* to_string(PeriodicKind k) { return k == PeriodicKind::periodic ? "periodic" : "antipodal"; }

/// Solutions of f^n(x) = x (periodic) or f^n(x) = -x (antipodal), sorted.
struct PeriodicSet {
  unsigned long n = 1;
  PeriodicKind kind = PeriodicKind::periodic;
  std::vector<TorusPoint> points;

  std::size_t size() const { return points.size(); }
  bool contains(const TorusPoint& p) const { return std::binary_search(points.begin(), points.end(), p); }
};

/// All x in T^2 with M x in Z^2, enumerated from the Smith form U M V = D:
/// the solutions are V (k1/d1, k2/d2) mod Z^2 for 0 <= ki < di.
inline std::vector<TorusPoint> lattice_kernel(const IntMatrix2& mat) {
  if (mat.det() == 0) throw domain_error("lattice_kernel: singular matrix has infinitely many solutions");
  SmithDecomposition snf = smith_normal_form(mat);
  const Integer& d1 = snf.d1;
  const Integer& d2 = snf.d2;
  Integer step1 = d2 / d1;
  const IntMatrix2& v = snf.V;
  std::vector<TorusPoint> pts;
  pts.reserve(static_cast<std::size_t>(d1 * d2));

  // Word-size path: every point is (xn/d2, yn/d2), so sorting the numerator
  // pairs over the shared d2 is the same as sorting the rationals.
  if (d2 < (Integer(1) << 31)) {
    using i128 = __int128;
    const long long D = d2.convert_to<long long>(), s1 = step1.convert_to<long long>();
    auto md = [D](const Integer& e) { return static_cast<long long>(floor_mod(e, Integer(D)).convert_to<long long>()); };
    const long long va = md(v.a), vb = md(v.b), vc = md(v.c), vd = md(v.d);
    std::vector<std::pair<long long, long long>> raw;
    raw.reserve(pts.capacity());
    const long long n1 = d1.convert_to<long long>();
    for (long long k1 = 0; k1 < n1; ++k1) {
      long long c1 = static_cast<long long>(static_cast<i128>(k1) * s1 % D);
      long long bx = static_cast<long long>(static_cast<i128>(va) * c1 % D);
      long long by = static_cast<long long>(static_cast<i128>(vc) * c1 % D);
      for (long long k2 = 0; k2 < D; ++k2) {
        raw.emplace_back(static_cast<long long>((bx + static_cast<i128>(vb) * k2) % D),
                         static_cast<long long>((by + static_cast<i128>(vd) * k2) % D));
      }
    }
    std::sort(raw.begin(), raw.end());
    for (const auto& [x, y] : raw) pts.push_back(TorusPoint::from_numerators(x, y, d2));
    return pts;
  }

  for (Integer k1 = 0; k1 < d1; ++k1) {
    Integer c1 = k1 * step1;
    Integer bx = v.a * c1, by = v.c * c1;
    for (Integer k2 = 0; k2 < d2; ++k2) {
      pts.push_back(TorusPoint::from_numerators(bx + v.b * k2, by + v.d * k2, d2));
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

/// P_n(f_A) = {x : f_A^n(x) = x}, |P_n| = |det(A^n - I)| = trace(A^n) - 2.
inline PeriodicSet periodic_points(const IntMatrix2& m, unsigned long n) {
  if (n < 1) throw domain_error("periodic_points: n must be >= 1");
  return {n, PeriodicKind::periodic, lattice_kernel(mat_pow(m, n) - IntMatrix2::identity())};
}

/// P_n^-(f_A) = {x : f_A^n(x) = -x}, |P_n^-| = |det(A^n + I)| = trace(A^n) + 2.
inline PeriodicSet antipodal_periodic_points(const IntMatrix2& m, unsigned long n) {
  if (n < 1) throw domain_error("antipodal_periodic_points: n must be >= 1");
  return {n, PeriodicKind::antipodal, lattice_kernel(mat_pow(m, n) + IntMatrix2::identity())};
}

struct PerCounts {
  Integer per;        // Per_n(f_A)
  Integer per_minus;  // Per_n^-(f_A)
  friend bool operator==(const PerCounts&, const PerCounts&) = default;
};

/// Closed forms trace(A^n) -+ 2 (the system matrix has det 1, trace > 2).
inline PerCounts per_counts(const IntMatrix2& m, unsigned long n) {
  if (n < 1) throw domain_error("per_counts: n must be >= 1");
  require_positive_hyperbolic(m);
  Integer t = mat_pow(m, n).trace();
  return {t - 2, t + 2};
}

/// CSV with columns n,kind,x_num,x_den,y_num,y_den.
inline void write_csv(std::ostream& os, const PeriodicSet& set, bool header = true) {
  if (header) os << "n,kind,x_num,x_den,y_num,y_den\n";
  for (const auto& p : set.points) {
    Rational x = p.x(), y = p.y();
    os << set.n << ',' << to_string(set.kind) << ',' << numerator(x) << ',' << denominator(x) << ','
       << numerator(y) << ',' << denominator(y) << '\n';
  }
}

}  // namespace toralab
