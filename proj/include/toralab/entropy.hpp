#pragma once

#include "toralab/orbit_table.hpp"
#include "toralab/sphere.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace toralab {

/// f_A on T^2 or g_A on S^2. Any integer matrix is allowed here (the identity
/// is a useful zero-entropy control); periodic schemes need a hyperbolic one.
struct System {
  IntMatrix2 matrix;
  Space space = Space::torus;
};

/// Distance between f^k(p) and f^k(q) in the system's metric, exactly.
inline Rational system_distance(const System& sys, const TorusPoint& p, const TorusPoint& q) {
  return sys.space == Space::torus ? torus_distance(p, q) : sphere_metric(project(p), project(q));
}

/// Some k < n with d(f^k p, f^k q) > delta (reference path, exact rationals).
inline bool is_separated_pair(const System& sys, const TorusPoint& p, const TorusPoint& q, std::size_t n,
                              const Rational& delta) {
  TorusPoint a = p, b = q;
  for (std::size_t k = 0; k < n; ++k) {
    if (system_distance(sys, a, b) > delta) return true;
    a = apply(sys.matrix, a);
    b = apply(sys.matrix, b);
  }
  return false;
}

struct SeparationReport {
  std::size_t n = 1;
  Rational delta = 0;
  std::string scheme;
  std::size_t candidates = 0;
  std::vector<TorusPoint> witness;  // pairwise (n, delta)-separated
  std::size_t count() const { return witness.size(); }
};

namespace detail {

inline std::vector<TorusPoint> normalize_candidates(const System& sys, std::vector<TorusPoint> pts) {
  if (sys.space == Space::sphere)
    for (auto& p : pts) p = project(p).rep();
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

/// Greedy maximal (n, delta)-separated subset of the candidates, taken in
/// sorted order; a lower bound for s_n(delta).
inline SeparationReport separated_set(const System& sys, std::vector<TorusPoint> candidates, std::size_t n,
                                      const Rational& delta, std::string scheme = "custom") {
  if (n < 1) throw domain_error("separated_set: n must be >= 1");
  if (delta <= 0) throw domain_error("separated_set: delta must be positive");
  candidates = detail::normalize_candidates(sys, std::move(candidates));
  SeparationReport rep;
  rep.n = n;
  rep.delta = delta;
  rep.scheme = std::move(scheme);
  rep.candidates = candidates.size();

  if (auto table = OrbitTable::build(sys.matrix, candidates, n, denominator(delta))) {
    long long thr = gap_threshold(delta, table->den());
    bool sphere = sys.space == Space::sphere;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      bool ok = true;
      for (std::size_t j : kept) {
        bool separated = false;
        for (std::size_t k = 0; k < n && !separated; ++k)
          separated = (sphere ? table->sphere_gap(i, j, k) : table->torus_gap(i, j, k)) > thr;
        if (!separated) {
          ok = false;
          break;
        }
      }
      if (ok) kept.push_back(i);
    }
    for (std::size_t i : kept) rep.witness.push_back(candidates[i]);
    return rep;
  }
  for (const auto& c : candidates) {
    bool ok = true;
    for (const auto& w : rep.witness)
      if (!is_separated_pair(sys, c, w, n, delta)) {
        ok = false;
        break;
      }
    if (ok) rep.witness.push_back(c);
  }
  return rep;
}

/// Number of unordered pairs that are NOT (n, delta)-separated; 0 certifies the set.
inline std::size_t separation_failures(const System& sys, std::vector<TorusPoint> pts, std::size_t n,
                                       const Rational& delta) {
  pts = detail::normalize_candidates(sys, std::move(pts));
  std::size_t failures = 0;
  if (auto table = OrbitTable::build(sys.matrix, pts, n, denominator(delta))) {
    long long thr = gap_threshold(delta, table->den());
    bool sphere = sys.space == Space::sphere;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        bool separated = false;
        for (std::size_t k = 0; k < n && !separated; ++k)
          separated = (sphere ? table->sphere_gap(i, j, k) : table->torus_gap(i, j, k)) > thr;
        if (!separated) ++failures;
      }
    return failures;
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!is_separated_pair(sys, pts[i], pts[j], n, delta)) ++failures;
  return failures;
}

/// Candidate scheme: the uniform grid of mesh 1/grid_den, or the periodic
/// points of the level being estimated.
struct CandidateScheme {
  enum class Kind { grid, periodic } kind = Kind::grid;
  long grid_den = 60;

  static CandidateScheme grid(long den) { return {Kind::grid, den}; }
  static CandidateScheme periodic() { return {Kind::periodic, 0}; }
  std::string name() const { return kind == Kind::grid ? "grid:" + std::to_string(grid_den) : "periodic"; }
};

inline std::vector<TorusPoint> grid_points(long den) {
  if (den < 1) throw domain_error("grid_points: mesh denominator must be >= 1");
  std::vector<TorusPoint> out;
  out.reserve(static_cast<std::size_t>(den * den));
  for (long i = 0; i < den; ++i)
    for (long j = 0; j < den; ++j) out.emplace_back(Rational(i, den), Rational(j, den));
  return out;
}

inline std::vector<TorusPoint> scheme_candidates(const System& sys, const CandidateScheme& scheme, std::size_t n) {
  if (scheme.kind == CandidateScheme::Kind::grid) return grid_points(scheme.grid_den);
  require_positive_hyperbolic(sys.matrix);
  if (sys.space == Space::torus) return periodic_points(sys.matrix, n).points;
  std::vector<TorusPoint> out;
  for (const auto& s : sphere_periodic_points(sys.matrix, n).points) out.push_back(s.rep());
  return out;
}

struct LinearFit {
  long double slope = 0;
  long double intercept = 0;
  std::vector<long double> residuals;
  bool degenerate = false;  // constant data: no growth information
};

inline LinearFit least_squares(const std::vector<long double>& xs, const std::vector<long double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw domain_error("least_squares: need >= 2 paired samples");
  long double n = static_cast<long double>(xs.size()), mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw domain_error("least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.degenerate = std::all_of(ys.begin(), ys.end(), [&](long double y) { return y == ys.front(); });
  for (std::size_t i = 0; i < xs.size(); ++i) fit.residuals.push_back(ys[i] - (fit.intercept + fit.slope * xs[i]));
  return fit;
}

struct EntropyEstimate {
  CandidateScheme scheme;
  Rational delta = 0;
  std::vector<SeparationReport> levels;
  LinearFit fit;  // log count against n
  long double slope() const { return fit.slope; }
};

/// Slope of log s_n(delta) in n over [n_min, n_max] (at least 4 levels).
inline EntropyEstimate entropy_estimate(const System& sys, const CandidateScheme& scheme, const Rational& delta,
                                        std::size_t n_min, std::size_t n_max) {
  if (n_min < 1 || n_max < n_min + 3) throw domain_error("entropy_estimate: n range must cover at least 4 levels");
  EntropyEstimate est;
  est.scheme = scheme;
  est.delta = delta;
  std::vector<long double> xs, ys;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    est.levels.push_back(separated_set(sys, scheme_candidates(sys, scheme, n), n, delta, scheme.name()));
    xs.push_back(static_cast<long double>(n));
    ys.push_back(std::log(static_cast<long double>(est.levels.back().count())));
  }
  est.fit = least_squares(xs, ys);
  return est;
}

/// CSV with columns n,delta,count,scheme.
inline void write_csv(std::ostream& os, const EntropyEstimate& est, bool header = true) {
  if (header) os << "n,delta,count,scheme\n";
  for (const auto& l : est.levels) os << l.n << ',' << to_string(l.delta) << ',' << l.count() << ',' << l.scheme << '\n';
}

struct GrowthRow {
  unsigned long n = 0;
  Integer count;              // Per_n(g_A) = trace(A^n)
  long double log_rate = 0;   // log(count) / n
  bool lower_holds = false;   // lambda^n <= count
  bool upper_holds = false;   // count <= 2 lambda^n
};

struct GrowthReport {
  long double log_lambda = 0;
  std::vector<GrowthRow> rows;
  std::optional<unsigned long> upper_from;  // first n from which the upper bound holds throughout
  bool all_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const GrowthRow& r) { return r.lower_holds && r.upper_holds; });
  }
};

/// lambda^n <= Per_n(g_A) <= 2 lambda^n, compared exactly in Q(sqrt(disc)).
inline GrowthReport periodic_growth(const IntMatrix2& m, unsigned long n_min, unsigned long n_max) {
  if (n_min < 1 || n_max < n_min) throw domain_error("periodic_growth: need 1 <= n_min <= n_max");
  EigenData eig = quad_eigen(m);
  GrowthReport rep;
  rep.log_lambda = std::log(eig.lambda.to_long_double());
  QuadNumber lam_n = pow(eig.lambda, static_cast<long>(n_min));
  IntMatrix2 power = mat_pow(m, n_min);
  for (unsigned long n = n_min; n <= n_max; ++n) {
    GrowthRow row;
    row.n = n;
    row.count = power.trace();
    QuadNumber c{Rational(row.count)};
    row.lower_holds = lam_n <= c;
    row.upper_holds = c <= 2 * lam_n;
    row.log_rate = std::log(row.count.convert_to<long double>()) / static_cast<long double>(n);
    rep.rows.push_back(row);
    lam_n *= eig.lambda;
    power = power * m;
  }
  for (std::size_t i = rep.rows.size(); i-- > 0;) {
    if (!rep.rows[i].upper_holds) break;
    rep.upper_from = rep.rows[i].n;
  }
  return rep;
}

}  // namespace toralab
