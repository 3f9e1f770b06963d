#pragma once

#include "toralab/orbit_table.hpp"
#include "toralab/sphere.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <vector>

namespace toralab {

struct Atom {
  TorusPoint point;  // sphere measures store the class representative
  Rational weight;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// How a measure was built; periodic origins admit exact character values.
enum class MeasureOrigin {
  generic,
  torus_periodic,   // uniform on ker(A^n - I)
  sphere_periodic,  // uniform on P_n(g_A)
};

/// Finitely supported probability measure on T^2 or S^2 with rational weights.
struct EmpiricalMeasure {
  Space space = Space::torus;
  std::vector<Atom> atoms;  // sorted by point, distinct
  MeasureOrigin origin = MeasureOrigin::generic;
  IntMatrix2 power;  // A^n for periodic origins

  std::size_t size() const { return atoms.size(); }
  Rational total_mass() const {
    Rational s = 0;
    for (const auto& a : atoms) s += a.weight;
    return s;
  }
  std::vector<TorusPoint> points() const {
    std::vector<TorusPoint> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(a.point);
    return out;
  }
};

/// Uniform probability on the distinct points given (sphere points by representative).
inline EmpiricalMeasure uniform_measure(Space space, std::vector<TorusPoint> pts) {
  if (space == Space::sphere)
    for (auto& p : pts) p = project(p).rep();
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) throw domain_error("uniform_measure: no atoms");
  EmpiricalMeasure mu;
  mu.space = space;
  Rational w(1, static_cast<long long>(pts.size()));
  for (auto& p : pts) mu.atoms.push_back({std::move(p), w});
  return mu;
}

/// The periodic measures of the antipodal-quotient construction.
///
/// torus: uniform on P_n(f_A); starred: uniform on (P_n u P_n^-) minus spines.
/// sphere: uniform on P_n(g_A); starred: uniform on its non-spine points.
inline EmpiricalMeasure periodic_measure(const IntMatrix2& m, unsigned long n, Space space, bool starred = false) {
  if (n < 1) throw domain_error("periodic_measure: n must be >= 1");
  require_positive_hyperbolic(m);
  PeriodicSet per = periodic_points(m, n);
  if (space == Space::torus && !starred) {
    EmpiricalMeasure mu = uniform_measure(Space::torus, std::move(per.points));
    mu.origin = MeasureOrigin::torus_periodic;
    mu.power = mat_pow(m, n);
    return mu;
  }
  PeriodicSet anti = antipodal_periodic_points(m, n);
  if (space == Space::torus) {
    std::vector<TorusPoint> pts;
    for (const auto* set : {&per, &anti})
      for (const auto& p : set->points)
        if (!p.is_self_antipodal()) pts.push_back(p);
    return uniform_measure(Space::torus, std::move(pts));
  }
  SpherePeriodicSet sph = sphere_periodic_points(m, per, anti);
  std::vector<TorusPoint> pts;
  for (const auto& s : sph.points)
    if (!starred || !s.is_spine()) pts.push_back(s.rep());
  EmpiricalMeasure mu = uniform_measure(Space::sphere, std::move(pts));
  if (!starred) {
    mu.origin = MeasureOrigin::sphere_periodic;
    mu.power = mat_pow(m, n);
  }
  return mu;
}

/// pi_* of a torus measure: atoms over the same class merge, weights add.
inline EmpiricalMeasure pushforward(const EmpiricalMeasure& mu) {
  if (mu.space != Space::torus) throw domain_error("pushforward: input must be a torus measure");
  std::map<TorusPoint, Rational> acc;
  for (const auto& a : mu.atoms) acc[project(a.point).rep()] += a.weight;
  EmpiricalMeasure out;
  out.space = Space::sphere;
  for (auto& [p, w] : acc) out.atoms.push_back({p, w});
  return out;
}

/// k^T in the row lattice Z^2 M, i.e. the character e^{2 pi i k.x} is trivial on ker(M).
inline bool in_dual_lattice(const IntMatrix2& mat, long k1, long k2) {
  Integer det = mat.det();
  if (det == 0) throw domain_error("in_dual_lattice: singular matrix");
  // k^T M^{-1} = k^T adj(M) / det
  Integer u = Integer(k1) * mat.d - Integer(k2) * mat.c;
  Integer v = Integer(k2) * mat.a - Integer(k1) * mat.b;
  return u % det == 0 && v % det == 0;
}

using Frequency = std::array<long, 2>;

/// Value of a character integral.
struct CharacterValue {
  Frequency k{0, 0};
  long double re = 0;
  long double im = 0;
  bool trivial = false;           // k = 0: total mass
  std::optional<Rational> exact;  // set when the value is known exactly (then im = 0)
  long double modulus() const { return std::hypot(re, im); }
};

/// Torus: sum_j w_j exp(2 pi i k.x_j). Sphere: sum_j w_j cos(2 pi k.x_j) on
/// either lift. Phases k.x mod 1 are reduced exactly before evaluation.
///
/// Exact values: for uniform measures on ker(A^n - I) the sum over the subgroup
/// is 1 when k is in the dual lattice and 0 otherwise. For P_n(g_A) each class
/// has two preimages in P_n u P_n^- (spines once in each), so the value is
/// (Per_n [k in dual(A^n - I)] + Per_n^- [k in dual(A^n + I)]) / (2 trace A^n).
inline CharacterValue character_integral(const EmpiricalMeasure& mu, Frequency k) {
  CharacterValue out;
  out.k = k;
  if (k[0] == 0 && k[1] == 0) {
    Rational mass = mu.total_mass();
    out.trivial = true;
    out.exact = mass;
    out.re = to_long_double(mass);
    return out;
  }
  if (mu.origin == MeasureOrigin::torus_periodic) {
    out.exact = in_dual_lattice(mu.power - IntMatrix2::identity(), k[0], k[1]) ? 1 : 0;
    out.re = to_long_double(*out.exact);
    return out;
  }
  if (mu.origin == MeasureOrigin::sphere_periodic) {
    Integer t = mu.power.trace();
    Rational v = 0;
    if (in_dual_lattice(mu.power - IntMatrix2::identity(), k[0], k[1])) v += Rational(t - 2);
    if (in_dual_lattice(mu.power + IntMatrix2::identity(), k[0], k[1])) v += Rational(t + 2);
    out.exact = v / Rational(2 * t);
    out.re = to_long_double(*out.exact);
    return out;
  }
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  long double re = 0, im = 0;
  for (const auto& a : mu.atoms) {
    const Integer& den = a.point.common_den();
    Integer phase = floor_mod(Integer(k[0]) * a.point.x_num_common() + Integer(k[1]) * a.point.y_num_common(), den);
    long double angle = two_pi * phase.convert_to<long double>() / den.convert_to<long double>();
    long double w = to_long_double(a.weight);
    re += w * std::cos(angle);
    if (mu.space == Space::torus) im += w * std::sin(angle);
  }
  out.re = re;
  out.im = im;
  return out;
}

/// max over the frequency family of |integral - reference|; reference is 0
/// (Haar on T^2, pi_* Haar on S^2) for every nonzero k.
struct DiscrepancyReport {
  Space space = Space::torus;
  long cutoff = 1;
  std::vector<CharacterValue> values;
  long double value = 0;
  std::optional<Rational> exact;  // when every value is exact
  Frequency argmax{0, 0};
};

/// Torus: all k with 0 < |k|_inf <= K. Sphere: one k from each class {k, -k}.
inline std::vector<Frequency> frequency_family(Space space, long cutoff) {
  if (cutoff < 1) throw domain_error("frequency_family: cutoff must be >= 1");
  std::vector<Frequency> out;
  for (long a = -cutoff; a <= cutoff; ++a)
    for (long b = -cutoff; b <= cutoff; ++b) {
      if (a == 0 && b == 0) continue;
      if (space == Space::sphere && !(a > 0 || (a == 0 && b > 0))) continue;
      out.push_back({a, b});
    }
  return out;
}

inline DiscrepancyReport discrepancy(const EmpiricalMeasure& mu, long cutoff) {
  DiscrepancyReport rep;
  rep.space = mu.space;
  rep.cutoff = cutoff;
  bool all_exact = true;
  Rational best_exact = 0;
  for (const auto& k : frequency_family(mu.space, cutoff)) {
    CharacterValue v = character_integral(mu, k);
    long double d = v.modulus();
    if (v.exact) {
      Rational e = abs(*v.exact);
      if (e > best_exact) best_exact = e;
    } else {
      all_exact = false;
    }
    if (rep.values.empty() || d > rep.value) {
      rep.value = d;
      rep.argmax = k;
    }
    rep.values.push_back(v);
  }
  if (all_exact) rep.exact = best_exact;
  return rep;
}

/// CSV with columns x_num,x_den,y_num,y_den,weight.
inline void write_csv(std::ostream& os, const EmpiricalMeasure& mu, bool header = true) {
  if (header) os << "x_num,x_den,y_num,y_den,weight\n";
  for (const auto& a : mu.atoms) {
    Rational x = a.point.x(), y = a.point.y();
    os << numerator(x) << ',' << denominator(x) << ',' << numerator(y) << ',' << denominator(y) << ','
       << to_string(a.weight) << '\n';
  }
}

/// B_n(x, eps) = {y : d(f^k y, f^k x) <= eps, 0 <= k < n}.
struct BowenBall {
  TorusPoint center;  // sphere balls use the class representative
  std::size_t depth = 1;
  Rational radius = 0;
};

/// Exact membership by iterating both points (reference path).
inline bool in_bowen_ball(const IntMatrix2& m, Space space, const BowenBall& ball, const TorusPoint& y) {
  TorusPoint a = ball.center, b = y;
  for (std::size_t k = 0; k < ball.depth; ++k) {
    Rational d = space == Space::torus ? torus_distance(a, b) : sphere_metric(project(a), project(b));
    if (d > ball.radius) return false;
    a = apply(m, a);
    b = apply(m, b);
  }
  return true;
}

namespace detail {

// Ball masses for many centers over one orbit table; the last `centers` rows
// of the table are the centers, the first mu.size() rows are the atoms.
inline std::vector<Rational> table_ball_masses(const EmpiricalMeasure& mu, const OrbitTable& table, std::size_t centers,
                                               std::size_t depth, const Rational& radius) {
  long long thr = gap_threshold(radius, table.den());
  std::vector<Rational> out;
  std::size_t n_atoms = mu.size();
  for (std::size_t c = 0; c < centers; ++c) {
    std::size_t ci = n_atoms + c;
    Rational mass = 0;
    for (std::size_t i = 0; i < n_atoms; ++i) {
      bool inside = true;
      for (std::size_t k = 0; k < depth && inside; ++k) {
        long long g = mu.space == Space::torus ? table.torus_gap(ci, i, k) : table.sphere_gap(ci, i, k);
        inside = g <= thr;
      }
      if (inside) mass += mu.atoms[i].weight;
    }
    out.push_back(mass);
  }
  return out;
}

}  // namespace detail

/// mu(B_n(x, eps)), exact.
inline Rational ball_mass(const EmpiricalMeasure& mu, const BowenBall& ball, const IntMatrix2& m) {
  if (ball.depth < 1) throw domain_error("ball_mass: depth must be >= 1");
  if (ball.radius < 0) throw domain_error("ball_mass: negative radius");
  std::vector<TorusPoint> pts = mu.points();
  pts.push_back(ball.center);
  if (auto table = OrbitTable::build(m, pts, ball.depth, denominator(ball.radius)))
    return detail::table_ball_masses(mu, *table, 1, ball.depth, ball.radius)[0];
  Rational mass = 0;
  for (const auto& a : mu.atoms)
    if (in_bowen_ball(m, mu.space, ball, a.point)) mass += a.weight;
  return mass;
}

struct HomogeneityRow {
  std::size_t center = 0;
  TorusPoint point;
  std::size_t depth = 0;
  Rational mass = 0;
  long double normalized = 0;  // e^{h n} * mass
  bool empty = false;
};

struct HomogeneityLevel {
  std::size_t depth = 0;
  long double max = 0;
  long double min = 0;
  long double ratio = 0;  // max / min over nonempty balls
  std::size_t empty_balls = 0;
};

struct HomogeneityReport {
  Space space = Space::torus;
  bool starred = false;
  unsigned long r = 0;
  Rational radius = 0;
  long double entropy = 0;  // h = log lambda
  std::vector<HomogeneityRow> rows;
  std::vector<HomogeneityLevel> levels;
  long double ratio = 0;      // max over levels of the per-level ratio
  long double stability = 0;  // max level ratio / min level ratio
  bool any_empty = false;
};

/// Seeded centers on the grid of denominator grid_den.
inline std::vector<TorusPoint> seeded_centers(std::size_t count, std::uint64_t seed, long grid_den = 1024) {
  std::mt19937_64 rng(seed);
  std::vector<TorusPoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    long a = static_cast<long>(rng() % static_cast<std::uint64_t>(grid_den));
    long b = static_cast<long>(rng() % static_cast<std::uint64_t>(grid_den));
    out.emplace_back(Rational(a, grid_den), Rational(b, grid_den));
  }
  return out;
}

/// Normalized Bowen-ball masses of the periodic measure at level r.
///
/// Requires r > n + 1 for every depth n probed. Empty balls are kept in the
/// table and flagged, and excluded from the ratios.
inline HomogeneityReport homogeneity_probe(const IntMatrix2& m, unsigned long r, std::size_t n_min, std::size_t n_max,
                                           const Rational& radius, const std::vector<TorusPoint>& centers,
                                           Space space = Space::torus, bool starred = false) {
  if (n_min < 1 || n_max < n_min) throw domain_error("homogeneity_probe: need 1 <= n_min <= n_max");
  if (r <= n_max + 1) throw domain_error("homogeneity_probe: need r > n + 1 for every probed depth");
  if (centers.empty()) throw domain_error("homogeneity_probe: no centers");
  EmpiricalMeasure mu = periodic_measure(m, r, space, starred);
  EigenData eig = quad_eigen(m);

  HomogeneityReport rep;
  rep.space = space;
  rep.starred = starred;
  rep.r = r;
  rep.radius = radius;
  rep.entropy = std::log(eig.lambda.to_long_double());

  std::vector<TorusPoint> pts = mu.points();
  for (const auto& c : centers) pts.push_back(space == Space::sphere ? project(c).rep() : c);
  auto table = OrbitTable::build(m, pts, n_max, denominator(radius));

  for (std::size_t n = n_min; n <= n_max; ++n) {
    std::vector<Rational> masses;
    if (table) {
      masses = detail::table_ball_masses(mu, *table, centers.size(), n, radius);
    } else {
      for (const auto& c : centers) masses.push_back(ball_mass(mu, {c, n, radius}, m));
    }
    HomogeneityLevel level;
    level.depth = n;
    level.min = std::numeric_limits<long double>::infinity();
    long double scale = std::exp(rep.entropy * static_cast<long double>(n));
    for (std::size_t c = 0; c < centers.size(); ++c) {
      HomogeneityRow row;
      row.center = c;
      row.point = pts[mu.size() + c];
      row.depth = n;
      row.mass = masses[c];
      row.empty = masses[c] == 0;
      row.normalized = scale * to_long_double(masses[c]);
      if (row.empty) {
        ++level.empty_balls;
        rep.any_empty = true;
      } else {
        level.max = std::max(level.max, row.normalized);
        level.min = std::min(level.min, row.normalized);
      }
      rep.rows.push_back(std::move(row));
    }
    level.ratio = level.empty_balls == centers.size() ? std::numeric_limits<long double>::infinity() : level.max / level.min;
    rep.levels.push_back(level);
  }
  long double lo = std::numeric_limits<long double>::infinity(), hi = 0;
  for (const auto& l : rep.levels) {
    lo = std::min(lo, l.ratio);
    hi = std::max(hi, l.ratio);
  }
  rep.ratio = hi;
  rep.stability = hi / lo;
  return rep;
}

/// CSV with columns center,x,y,n,mass,normalized,empty.
inline void write_csv(std::ostream& os, const HomogeneityReport& rep, bool header = true) {
  if (header) os << "center,x,y,n,mass,normalized,empty\n";
  for (const auto& row : rep.rows) {
    os << row.center << ',' << to_string(row.point.x()) << ',' << to_string(row.point.y()) << ',' << row.depth << ','
       << to_string(row.mass) << ',' << static_cast<double>(row.normalized) << ',' << (row.empty ? "true" : "false")
       << '\n';
  }
}

}  // namespace toralab
