#pragma once

#include "toralab/sphere.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace toralab {

enum class ArithmeticMode { exact, highprec };

inline const char* to_string(ArithmeticMode m) { return m == ArithmeticMode::exact ? "exact" : "highprec"; }

template <class Point>
inline constexpr Space space_of = Space::torus;
template <>
inline constexpr Space space_of<SpherePoint> = Space::sphere;

inline Rational point_distance(const TorusPoint& a, const TorusPoint& b) { return torus_distance(a, b); }
inline Rational point_distance(const SpherePoint& a, const SpherePoint& b) { return sphere_metric(a, b); }
inline TorusPoint map_point(const IntMatrix2& m, const TorusPoint& p) { return apply(m, p); }
inline SpherePoint map_point(const IntMatrix2& m, const SpherePoint& p) { return sphere_apply(m, p); }

/// Finite sequence of points; periodic means the index wraps mod N.
template <class Point>
struct PseudoOrbit {
  std::vector<Point> points;
  bool periodic = false;
  std::string diagnostic;

  std::size_t size() const { return points.size(); }
  static constexpr Space space() { return space_of<Point>; }
};

using TorusPseudoOrbit = PseudoOrbit<TorusPoint>;
using SpherePseudoOrbit = PseudoOrbit<SpherePoint>;

/// d(f(x_i), x_{i+1}); the last index wraps for periodic orbits.
template <class Point>
Rational jump_error(const IntMatrix2& m, const PseudoOrbit<Point>& po, std::size_t i) {
  std::size_t n = po.size();
  if (i + 1 >= n && !(po.periodic && i + 1 == n)) throw domain_error("jump_error: index out of range");
  return point_distance(map_point(m, po.points[i]), po.points[(i + 1) % n]);
}

/// max_i jump_error(i): the delta of a delta-pseudo-orbit.
template <class Point>
Rational pseudo_orbit_delta(const IntMatrix2& m, const PseudoOrbit<Point>& po) {
  Rational delta = 0;
  std::size_t jumps = po.periodic ? po.size() : (po.size() > 0 ? po.size() - 1 : 0);
  for (std::size_t i = 0; i < jumps; ++i) {
    Rational j = jump_error(m, po, i);
    if (j > delta) delta = j;
  }
  return delta;
}

namespace detail {

using Vec2Q = std::array<Rational, 2>;

inline Integer round_nearest(const Rational& r) { return floor(r + Rational(1, 2)); }

/// Representative of v mod 1 in (-1/2, 1/2]; an exact half goes to +1/2.
inline Rational centered(const Rational& v) {
  Rational r = frac(v);
  return r > Rational(1, 2) ? Rational(r - 1) : r;
}

inline Vec2Q apply_linear(const IntMatrix2& m, const Vec2Q& v) {
  return {Rational(m.a) * v[0] + Rational(m.b) * v[1], Rational(m.c) * v[0] + Rational(m.d) * v[1]};
}

/// Solve M x = rhs over Q for nonsingular integer M.
inline Vec2Q solve_rational(const IntMatrix2& m, const Vec2Q& rhs) {
  Rational det(m.det());
  if (det == 0) throw domain_error("solve_rational: singular matrix");
  return {(Rational(m.d) * rhs[0] - Rational(m.b) * rhs[1]) / det,
          (Rational(m.a) * rhs[1] - Rational(m.c) * rhs[0]) / det};
}

/// Minimal lift of x_{i+1} - A x_i.
inline Vec2Q jump_vector(const IntMatrix2& m, const TorusPoint& from, const TorusPoint& to) {
  TorusPoint image = apply(m, from);
  return {centered(to.x() - image.x()), centered(to.y() - image.y())};
}

/// Draws a rational in [-bound, bound] with denominator dividing 2*2^20*den(bound).
inline Rational draw_symmetric(std::mt19937_64& rng, const Rational& bound) {
  constexpr std::uint64_t half_range = std::uint64_t{1} << 20;
  auto r = static_cast<long long>(rng() % (2 * half_range + 1)) - static_cast<long long>(half_range);
  return bound * Rational(r, static_cast<long long>(half_range));
}

/// Uniform-ish Integer in [0, bound) from 64-bit draws (bias below 2^-64).
inline Integer draw_below(std::mt19937_64& rng, const Integer& bound) {
  Integer acc = 0;
  std::size_t bits = boost::multiprecision::msb(bound) + 65;
  for (std::size_t b = 0; b < bits; b += 64) acc = (acc << 64) + Integer(rng());
  return acc % bound;
}

}  // namespace detail

/// A seeded element of P_n(f_A), drawn from the Smith-form coordinates
/// without enumerating the set.
inline TorusPoint seeded_periodic_point(const IntMatrix2& m, unsigned long n, std::uint64_t seed) {
  if (n < 1) throw domain_error("seeded_periodic_point: n must be >= 1");
  require_positive_hyperbolic(m);
  SmithDecomposition snf = smith_normal_form(mat_pow(m, n) - IntMatrix2::identity());
  std::mt19937_64 rng(seed);
  Integer k1 = detail::draw_below(rng, snf.d1), k2 = detail::draw_below(rng, snf.d2);
  Integer c1 = k1 * (snf.d2 / snf.d1);
  return TorusPoint::from_numerators(snf.V.a * c1 + snf.V.b * k2, snf.V.c * c1 + snf.V.d * k2, snf.d2);
}

/// Seeded periodic pseudo-orbit x_{i+1} = f(x_i) + eta_i, |eta_i| <= noise.
///
/// The chain closes exactly (x_N = x_0 mod Z^2) by moving the start from x0
/// to x0 + c with (A^N - I) c = -(sum_j A^{N-1-j} eta_j) - residual, where the
/// residual measures how far x0 is from having period N. If c exceeds the
/// shadowing scale C*noise the closure is impossible within the noise level:
/// the open chain from x0 is returned with periodic = false and a diagnostic.
inline TorusPseudoOrbit make_pseudo_orbit(const IntMatrix2& m, const TorusPoint& x0, std::size_t length,
                                          const Rational& noise, std::uint64_t seed) {
  if (length < 1) throw domain_error("make_pseudo_orbit: length must be >= 1");
  if (noise < 0) throw domain_error("make_pseudo_orbit: noise must be >= 0");
  require_positive_hyperbolic(m);

  std::mt19937_64 rng(seed);
  std::vector<detail::Vec2Q> eta(length);
  for (auto& e : eta) {
    e[0] = detail::draw_symmetric(rng, noise);
    e[1] = detail::draw_symmetric(rng, noise);
  }

  IntMatrix2 closure = mat_pow(m, length) - IntMatrix2::identity();
  detail::Vec2Q sum{0, 0};
  for (const auto& e : eta) {
    sum = detail::apply_linear(m, sum);
    sum[0] += e[0];
    sum[1] += e[1];
  }
  detail::Vec2Q r = detail::apply_linear(closure, {x0.x(), x0.y()});
  detail::Vec2Q rhs{-(sum[0] + r[0] - Rational(detail::round_nearest(r[0]))),
                    -(sum[1] + r[1] - Rational(detail::round_nearest(r[1])))};
  detail::Vec2Q c = detail::solve_rational(closure, rhs);

  QuadNumber scale = quad_eigen(m).shadowing_constant() * QuadNumber(noise);
  QuadNumber shift = max(abs(QuadNumber(c[0])), abs(QuadNumber(c[1])));

  TorusPseudoOrbit po;
  TorusPoint start = x0;
  if (shift <= scale) {
    start = x0.translated(c[0], c[1]);
    po.periodic = true;
  } else {
    po.diagnostic = "closure impossible within noise: start shift " + std::to_string(static_cast<double>(shift.to_long_double())) +
                    " exceeds C*noise = " + std::to_string(static_cast<double>(scale.to_long_double()));
  }
  po.points.reserve(length);
  po.points.push_back(start);
  for (std::size_t i = 0; i + 1 < length; ++i) {
    po.points.push_back(apply(m, po.points.back()).translated(eta[i][0], eta[i][1]));
  }
  return po;
}

/// Outcome of a shadowing solve.
struct ShadowResult {
  ArithmeticMode mode = ArithmeticMode::exact;
  Space space = Space::torus;
  std::optional<TorusPoint> z0;                 // exact torus result
  std::optional<SpherePoint> z0_sphere;         // exact sphere result
  std::array<std::string, 2> z0_decimal;        // coordinates, always filled
  std::size_t period = 0;                       // f^period(z0) = z0
  std::optional<Rational> epsilon;              // exact max of the certificate
  long double epsilon_approx = 0;
  std::vector<Rational> certificate;            // exact d(f^k z0, x_k)
  std::vector<long double> certificate_approx;
  Rational delta = 0;                           // measured input delta
  QuadNumber bound;                             // C * delta
  bool bound_holds = false;                     // epsilon <= C * delta
  bool exactly_periodic = false;                // f^period(z0) == z0 verified exactly
  long double residual = 0;                     // highprec: max |z_{i+1} - A z_i|
  bool warning = false;                         // C * delta >= diameter/2
  bool lift_doubled = false;                    // sphere: lift closed antipodally
  std::string diagnostic;
};

/// Diameter of T^2 (and S^2) in the sup metric.
inline Rational sup_diameter() { return Rational(1, 2); }

namespace detail {

using HighFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

inline HighFloat to_high(const Rational& r) { return HighFloat(numerator(r)) / HighFloat(denominator(r)); }
inline HighFloat to_high(const QuadNumber& q) {
  return to_high(q.rational_part()) + to_high(q.irrational_part()) * boost::multiprecision::sqrt(HighFloat(q.disc()));
}

inline HighFloat circle_high(const HighFloat& v) {
  HighFloat f = v - boost::multiprecision::floor(v);
  HighFloat g = 1 - f;
  return f < g ? f : g;
}

inline std::string decimal(const HighFloat& v) { return v.str(40, std::ios_base::fixed); }

/// Spectral periodic correction w_0 for jumps e (minimal lifts), exact.
///
/// Unstable part: u_0 = sum_k lambda^-(k+1) e^u_k / (1 - lambda^-N).
/// Stable part:   s_0 = -sum_k lambda^-k e^s_{N-1-k} / (1 - lambda^-N).
inline std::array<QuadNumber, 2> spectral_correction(const EigenData& eig, const std::vector<Vec2Q>& e) {
  const std::size_t n = e.size();
  QuadNumber li = eig.lambda_inv;
  QuadNumber unstable = 0, stable = 0;
  for (std::size_t k = n; k-- > 0;) {
    auto split = eig.split(e[k][0], e[k][1]);
    unstable = (unstable + split[0]) * li;
  }
  for (std::size_t j = 0; j < n; ++j) {
    auto split = eig.split(e[j][0], e[j][1]);
    stable = stable * li + split[1];
  }
  QuadNumber wrap = (QuadNumber(1) - pow(li, static_cast<long>(n))).inverse();
  unstable *= wrap;
  stable = -(stable * wrap);
  return {unstable, stable};
}

}  // namespace detail

/// Periodic shadowing of a periodic torus pseudo-orbit by the exact spectral solve.
inline ShadowResult shadow_periodic(const IntMatrix2& m, const TorusPseudoOrbit& po,
                                    ArithmeticMode mode = ArithmeticMode::exact) {
  if (!po.periodic) throw domain_error("shadow_periodic: pseudo-orbit is not periodic");
  if (po.size() == 0) throw domain_error("shadow_periodic: empty pseudo-orbit");
  EigenData eig = quad_eigen(m);
  const std::size_t n = po.size();

  std::vector<detail::Vec2Q> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = detail::jump_vector(m, po.points[i], po.points[(i + 1) % n]);

  ShadowResult res;
  res.mode = mode;
  res.space = Space::torus;
  res.period = n;
  res.delta = 0;
  for (const auto& v : e) res.delta = std::max({res.delta, abs(v[0]), abs(v[1])});
  res.bound = eig.shadowing_constant() * QuadNumber(res.delta);
  res.warning = res.bound >= QuadNumber(sup_diameter() / 2);

  if (mode == ArithmeticMode::exact) {
    auto [u0, s0] = detail::spectral_correction(eig, e);
    QuadVec2 w0 = u0 * eig.v_u + s0 * eig.v_s;
    if (!w0[0].is_rational() || !w0[1].is_rational())
      throw std::logic_error("shadow_periodic: correction did not descend to Q");
    TorusPoint z0 = po.points[0].translated(w0[0].rational_part(), w0[1].rational_part());
    res.z0 = z0;
    res.z0_decimal = {detail::decimal(detail::to_high(z0.x())), detail::decimal(detail::to_high(z0.y()))};
    TorusPoint cur = z0;
    Rational eps = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Rational d = torus_distance(cur, po.points[k]);
      res.certificate.push_back(d);
      res.certificate_approx.push_back(to_long_double(d));
      if (d > eps) eps = d;
      cur = apply(m, cur);
    }
    res.exactly_periodic = cur == z0;
    res.epsilon = eps;
    res.epsilon_approx = to_long_double(eps);
    res.bound_holds = QuadNumber(eps) <= res.bound;
    return res;
  }

  // High-precision mode: contracting recursions in both directions.
  using detail::HighFloat;
  HighFloat lam = detail::to_high(eig.lambda);
  HighFloat lam_inv = detail::to_high(eig.lambda_inv);
  std::array<HighFloat, 4> binv{detail::to_high(eig.basis_inv.a), detail::to_high(eig.basis_inv.b),
                                detail::to_high(eig.basis_inv.c), detail::to_high(eig.basis_inv.d)};
  std::array<HighFloat, 2> vu{detail::to_high(eig.v_u[0]), detail::to_high(eig.v_u[1])};
  std::array<HighFloat, 2> vs{detail::to_high(eig.v_s[0]), detail::to_high(eig.v_s[1])};
  std::vector<HighFloat> eu(n), es(n), ex(n), ey(n);
  for (std::size_t i = 0; i < n; ++i) {
    ex[i] = detail::to_high(e[i][0]);
    ey[i] = detail::to_high(e[i][1]);
    eu[i] = binv[0] * ex[i] + binv[1] * ey[i];
    es[i] = binv[2] * ex[i] + binv[3] * ey[i];
  }
  HighFloat wrap = 1 / (1 - boost::multiprecision::pow(lam_inv, static_cast<int>(n)));
  HighFloat u0 = 0, s0 = 0;
  for (std::size_t k = n; k-- > 0;) u0 = (u0 + eu[k]) * lam_inv;
  for (std::size_t j = 0; j < n; ++j) s0 = s0 * lam_inv + es[j];
  u0 *= wrap;
  s0 = -s0 * wrap;

  std::vector<HighFloat> u(n + 1), s(n + 1);
  u[n] = u0;
  for (std::size_t i = n; i-- > 0;) u[i] = (u[i + 1] + eu[i]) / lam;
  s[0] = s0;
  for (std::size_t i = 0; i < n; ++i) s[i + 1] = lam_inv * s[i] - es[i];

  HighFloat eps = 0, resid = 0;
  auto wx = [&](std::size_t i) { return u[i] * vu[0] + s[i] * vs[0]; };
  auto wy = [&](std::size_t i) { return u[i] * vu[1] + s[i] * vs[1]; };
  for (std::size_t i = 0; i < n; ++i) {
    HighFloat d = std::max(detail::circle_high(wx(i)), detail::circle_high(wy(i)));
    res.certificate_approx.push_back(d.convert_to<long double>());
    if (d > eps) eps = d;
    // z_{i+1} - A z_i = e_i + w_{i+1} - A w_i
    HighFloat rx = ex[i] + wx(i + 1) - (HighFloat(m.a) * wx(i) + HighFloat(m.b) * wy(i));
    HighFloat ry = ey[i] + wy(i + 1) - (HighFloat(m.c) * wx(i) + HighFloat(m.d) * wy(i));
    resid = std::max({resid, boost::multiprecision::abs(rx), boost::multiprecision::abs(ry)});
  }
  HighFloat zx = detail::to_high(po.points[0].x()) + wx(0);
  HighFloat zy = detail::to_high(po.points[0].y()) + wy(0);
  zx -= boost::multiprecision::floor(zx);
  zy -= boost::multiprecision::floor(zy);
  res.z0_decimal = {detail::decimal(zx), detail::decimal(zy)};
  res.epsilon_approx = eps.convert_to<long double>();
  res.residual = resid.convert_to<long double>();
  res.bound_holds = eps <= detail::to_high(res.bound);
  res.exactly_periodic = false;
  return res;
}

/// Sphere shadowing via the minimal-jump torus lift.
///
/// Lifts need delta < 1/4. If the lift closes antipodally (f(x_{N-1}) near
/// -x_0) the doubled chain x, -x of length 2N is solved; the unique periodic
/// solution is odd under the shift by N, so the projection still has period N.
inline ShadowResult shadow_periodic_sphere(const IntMatrix2& m, const SpherePseudoOrbit& po) {
  if (!po.periodic) throw domain_error("shadow_periodic_sphere: pseudo-orbit is not periodic");
  if (po.size() == 0) throw domain_error("shadow_periodic_sphere: empty pseudo-orbit");
  Rational delta = pseudo_orbit_delta(m, po);
  if (delta >= Rational(1, 4))
    throw domain_error("shadow_periodic_sphere: delta " + to_string(delta) + " >= 1/4, lift is ambiguous");

  const std::size_t n = po.size();
  TorusPseudoOrbit lifted;
  lifted.periodic = true;
  lifted.points.reserve(2 * n);
  lifted.points.push_back(po.points[0].rep());
  for (std::size_t i = 1; i < n; ++i) {
    TorusPoint image = apply(m, lifted.points.back());
    const TorusPoint& a = po.points[i].rep();
    TorusPoint b = a.negated();
    lifted.points.push_back(torus_distance(image, b) < torus_distance(image, a) ? b : a);
  }
  TorusPoint closing = apply(m, lifted.points.back());
  const TorusPoint& x0 = lifted.points.front();
  bool doubled = torus_distance(closing, x0.negated()) < torus_distance(closing, x0);
  if (doubled) {
    for (std::size_t i = 0; i < n; ++i) lifted.points.push_back(lifted.points[i].negated());
  }

  ShadowResult torus = shadow_periodic(m, lifted);
  ShadowResult res;
  res.mode = ArithmeticMode::exact;
  res.space = Space::sphere;
  res.lift_doubled = doubled;
  res.period = n;
  res.delta = delta;
  EigenData eig = quad_eigen(m);
  res.bound = eig.shadowing_constant() * QuadNumber(delta);
  res.warning = res.bound >= QuadNumber(sup_diameter() / 2);

  SpherePoint z0 = project(*torus.z0);
  res.z0_sphere = z0;
  res.z0 = z0.rep();
  res.z0_decimal = {detail::decimal(detail::to_high(z0.rep().x())), detail::decimal(detail::to_high(z0.rep().y()))};
  SpherePoint cur = z0;
  Rational eps = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Rational d = sphere_metric(cur, po.points[k]);
    res.certificate.push_back(d);
    res.certificate_approx.push_back(to_long_double(d));
    if (d > eps) eps = d;
    cur = sphere_apply(m, cur);
  }
  res.exactly_periodic = cur == z0;
  res.epsilon = eps;
  res.epsilon_approx = to_long_double(eps);
  res.bound_holds = QuadNumber(eps) <= res.bound;
  if (doubled) res.diagnostic = "torus lift closed antipodally; solved the doubled lift of period " + std::to_string(2 * n);
  return res;
}

/// Exact point of T^2 with coordinates in Q(sqrt(disc)), reduced into [0,1).
using QuadTorusPoint = QuadVec2;

inline QuadTorusPoint reduce_mod1(const QuadVec2& v) { return {frac(v[0]), frac(v[1])}; }

inline QuadNumber circle_distance(const QuadNumber& x, const QuadNumber& y) {
  QuadNumber f = frac(x - y);
  QuadNumber g = QuadNumber(1) - f;
  return f < g ? f : g;
}

inline QuadNumber torus_distance(const QuadTorusPoint& p, const QuadTorusPoint& q) {
  return max(circle_distance(p[0], q[0]), circle_distance(p[1], q[1]));
}

inline QuadTorusPoint to_quad(const TorusPoint& p) { return {QuadNumber(p.x()), QuadNumber(p.y())}; }

/// Nearest point with denominator den (round half up per coordinate).
inline TorusPoint round_to_grid(const QuadTorusPoint& p, const Integer& den) {
  QuadNumber half(Rational(1, 2));
  Integer xn = (p[0] * QuadNumber(Rational(den)) + half).floor();
  Integer yn = (p[1] * QuadNumber(Rational(den)) + half).floor();
  return TorusPoint::from_numerators(xn, yn, den);
}

/// A point z with z near p_end along W^u(p_end) and f^L(z) near q_start along W^s(q_start).
struct Connection {
  QuadTorusPoint z;
  QuadNumber t;           // z = p_end + t v_u
  QuadNumber s;           // f^L(z) = q_start + s v_s
  std::array<Integer, 2> lattice;
  QuadNumber start_error;  // d(z, p_end)
  QuadNumber end_error;    // d(f^L z, q_start)
  std::size_t gap = 0;
  std::string diagnostic;
};

/// Smallest gap for which connection errors are guaranteed below 1/4:
/// 4 * kappa * lambda^{-L/2} < 1/4.
inline std::size_t min_specification_gap(const EigenData& eig) {
  long double k = eig.distortion().to_long_double();
  long double lam = eig.lambda.to_long_double();
  std::size_t gap = 1;
  while (4 * k * std::pow(lam, -static_cast<long double>(gap) / 2) >= 0.25L) ++gap;
  return gap;
}

/// Transversal intersection of W^u(p_end) with f^{-L} W^s(q_start) on T^2.
///
/// With y = q_start - A^L p_end and a lattice vector m, the unstable and stable
/// coordinates (tau, sigma) of y + m give t = tau * lambda^-L and s = -sigma.
/// For each m1 in [-R, R], R ~ 4 lambda^{L/2}, the two m2 nearest to sigma = 0
/// are tried; the minimizer of |t| + |s| is then evaluated exactly.
inline Connection connect_segments(const IntMatrix2& m, const TorusPoint& p_end, const TorusPoint& q_start,
                                   std::size_t gap) {
  if (gap < 1) throw domain_error("connect_segments: gap must be >= 1");
  EigenData eig = quad_eigen(m);
  IntMatrix2 power = mat_pow(m, gap);
  TorusPoint image = apply(power, p_end);
  Rational y0 = frac(q_start.x() - image.x());
  Rational y1 = frac(q_start.y() - image.y());

  const long double lam = eig.lambda.to_long_double();
  const long double lam_pow = std::pow(lam, -static_cast<long double>(gap));
  const long double lu0 = eig.basis_inv.a.to_long_double(), lu1 = eig.basis_inv.b.to_long_double();
  const long double ls0 = eig.basis_inv.c.to_long_double(), ls1 = eig.basis_inv.d.to_long_double();
  const long double fy0 = to_long_double(y0), fy1 = to_long_double(y1);
  long double radius_f = 4 * std::pow(lam, static_cast<long double>(gap) / 2) + 2;
  if (radius_f > 1e8L) throw domain_error("connect_segments: gap too large for the lattice search");
  const long long radius = static_cast<long long>(radius_f);

  long double best = std::numeric_limits<long double>::infinity();
  long long best1 = 0, best2 = 0;
  for (long long m1 = -radius; m1 <= radius; ++m1) {
    long double target = -(ls0 * (fy0 + m1)) / ls1 - fy1;
    long long base = static_cast<long long>(std::floor(target));
    for (long long m2 = base; m2 <= base + 1; ++m2) {
      long double a0 = fy0 + m1, a1 = fy1 + m2;
      long double tau = lu0 * a0 + lu1 * a1;
      long double sigma = ls0 * a0 + ls1 * a1;
      long double score = std::fabs(tau) * lam_pow + std::fabs(sigma);
      if (score < best) {
        best = score;
        best1 = m1;
        best2 = m2;
      }
    }
  }

  Connection c;
  c.gap = gap;
  c.lattice = {Integer(best1), Integer(best2)};
  auto split = eig.split(y0 + Rational(best1), y1 + Rational(best2));
  c.t = split[0] * pow(eig.lambda_inv, static_cast<long>(gap));
  c.s = -split[1];
  QuadTorusPoint pq = to_quad(p_end);
  c.z = reduce_mod1(pq + c.t * eig.v_u);
  c.start_error = torus_distance(c.z, pq);
  QuadTorusPoint fz = reduce_mod1(power * c.z);
  c.end_error = torus_distance(fz, to_quad(q_start));
  if (max(c.start_error, c.end_error) >= QuadNumber(Rational(1, 4)))
    c.diagnostic = "connection error >= 1/4: gap below the documented minimum, enlarge the gap";
  return c;
}

/// One prescribed orbit segment start, f(start), ..., f^{length-1}(start).
struct OrbitSegment {
  TorusPoint start;
  std::size_t length = 1;
};

/// Segments placed at times a_1 = 0, a_{j+1} = b_j + gap; period b_m + gap.
struct SpecificationRequest {
  std::vector<OrbitSegment> segments;
  std::size_t gap = 1;
};

struct SpecificationResult {
  ShadowResult shadow;                   // shadow of the glued pseudo-orbit
  std::vector<Connection> connections;   // connection j joins segment j to j+1 (cyclically)
  std::vector<std::size_t> segment_starts;
  std::size_t period = 0;                // b_m + gap
  Rational segment_epsilon = 0;          // max distance to the prescribed segments only
  TorusPseudoOrbit glued;
};

/// Periodic point shadowing an L-spaced specification.
///
/// Gap points are the connecting orbit f^i(z), rounded to denominator
/// rounding_den, so the glued pseudo-orbit is rational and shadow_periodic
/// applies exactly.
inline SpecificationResult periodic_specification(const IntMatrix2& m, const SpecificationRequest& req,
                                                  const Integer& rounding_den = Integer(1) << 48) {
  if (req.segments.empty()) throw domain_error("periodic_specification: no segments");
  if (req.gap < 1) throw domain_error("periodic_specification: gap must be >= 1");
  for (const auto& seg : req.segments)
    if (seg.length < 1) throw domain_error("periodic_specification: empty segment");

  SpecificationResult out;
  std::size_t t = 0;
  for (const auto& seg : req.segments) {
    out.segment_starts.push_back(t);
    t += seg.length - 1 + req.gap;
  }
  out.period = t;  // b_m + gap

  std::vector<std::optional<TorusPoint>> pts(out.period);
  for (std::size_t j = 0; j < req.segments.size(); ++j) {
    auto seg_orbit = orbit(m, req.segments[j].start, req.segments[j].length);
    for (std::size_t i = 0; i < seg_orbit.size(); ++i) pts[out.segment_starts[j] + i] = seg_orbit[i];
  }
  for (std::size_t j = 0; j < req.segments.size(); ++j) {
    std::size_t b = out.segment_starts[j] + req.segments[j].length - 1;
    const TorusPoint& p_end = *pts[b];
    const TorusPoint& q_start = req.segments[(j + 1) % req.segments.size()].start;
    Connection c = connect_segments(m, p_end, q_start, req.gap);
    QuadTorusPoint cur = c.z;
    for (std::size_t i = 1; i < req.gap; ++i) {
      cur = reduce_mod1(m * cur);
      pts[b + i] = round_to_grid(cur, rounding_den);
    }
    out.connections.push_back(std::move(c));
  }

  out.glued.periodic = true;
  out.glued.points.reserve(out.period);
  for (auto& p : pts) out.glued.points.push_back(*p);
  out.shadow = shadow_periodic(m, out.glued);

  for (std::size_t j = 0; j < req.segments.size(); ++j) {
    for (std::size_t i = 0; i < req.segments[j].length; ++i) {
      const Rational& d = out.shadow.certificate[out.segment_starts[j] + i];
      if (d > out.segment_epsilon) out.segment_epsilon = d;
    }
  }
  return out;
}

}  // namespace toralab
