#pragma once

#include "toralab/toral.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <vector>

namespace toralab {

/// Phase space of an experiment: the torus T^2 or its antipodal quotient S^2.
enum class Space { torus, sphere };

inline const char* to_string(Space s) { return s == Space::torus ? "torus" : "sphere"; }

/// Class {x, -x} of the antipodal quotient T^2 -> S^2.
///
/// rep is the lexicographically smaller of the canonical torus points x and -x.
class SpherePoint {
 public:
  SpherePoint() = default;

  const TorusPoint& rep() const { return rep_; }

  /// One of the four branch points (0,0), (1/2,0), (0,1/2), (1/2,1/2).
  bool is_spine() const { return rep_.is_self_antipodal(); }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;
  friend auto operator<=>(const SpherePoint& a, const SpherePoint& b) { return a.rep_ <=> b.rep_; }

  friend SpherePoint project(const TorusPoint& p);

 private:
  explicit SpherePoint(TorusPoint rep) : rep_(std::move(rep)) {}
  TorusPoint rep_;
};

/// pi: T^2 -> S^2; project(p) == project(-p).
inline SpherePoint project(const TorusPoint& p) {
  TorusPoint q = p.negated();
  return SpherePoint(q < p ? q : p);
}

/// pi^{-1}(s): {rep, -rep}, a single point for spines.
inline std::vector<TorusPoint> lift(const SpherePoint& s) {
  if (s.is_spine()) return {s.rep()};
  return {s.rep(), s.rep().negated()};
}

/// The four spines in lexicographic order.
inline std::vector<SpherePoint> spines() {
  return {project(TorusPoint(0, 0)), project(TorusPoint(0, Rational(1, 2))),
          project(TorusPoint(Rational(1, 2), 0)), project(TorusPoint(Rational(1, 2), Rational(1, 2)))};
}

/// g_A = pi o f_A o pi^{-1}, well defined because A commutes with negation.
inline SpherePoint sphere_apply(const IntMatrix2& m, const SpherePoint& s) { return project(apply(m, s.rep())); }

inline SpherePoint sphere_apply_n(const IntMatrix2& m, const SpherePoint& s, unsigned long n) {
  return project(apply_n(m, s.rep(), n));
}

/// Quotient of the torus sup-metric: min(d(x, y), d(x, -y)).
inline Rational sphere_metric(const SpherePoint& s, const SpherePoint& t) {
  Rational d1 = torus_distance(s.rep(), t.rep());
  if (t.is_spine()) return d1;
  Rational d2 = torus_distance(s.rep(), t.rep().negated());
  return d1 < d2 ? d1 : d2;
}

inline std::optional<unsigned long> sphere_least_period(const IntMatrix2& m, const SpherePoint& s,
                                                        unsigned long bound) {
  SpherePoint cur = s;
  for (unsigned long k = 1; k <= bound; ++k) {
    cur = sphere_apply(m, cur);
    if (cur == s) return k;
  }
  return std::nullopt;
}

/// P_n(g_A) with the fiber bookkeeping of pi restricted to P_n(f_A) u P_n^-(f_A).
struct SpherePeriodicSet {
  unsigned long n = 1;
  std::vector<SpherePoint> points;  // sorted

  /// fibers[i] = number of (point, source set) pairs over points[i].
  /// Each fiber has size 2: a non-spine pair {x, -x} from one source set,
  /// or a spine counted once in P_n and once in P_n^-.
  std::vector<unsigned> fibers;

  std::size_t size() const { return points.size(); }
  bool contains(const SpherePoint& s) const { return std::binary_search(points.begin(), points.end(), s); }
  std::size_t spine_count() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const SpherePoint& s) { return s.is_spine(); }));
  }
};

/// Raised when an enumeration disagrees with its closed-form count.
struct enumeration_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Builds P_n(g_A) from already enumerated P_n and P_n^-.
inline SpherePeriodicSet sphere_periodic_points(const IntMatrix2& m, const PeriodicSet& per,
                                                const PeriodicSet& anti) {
  if (per.kind != PeriodicKind::periodic || anti.kind != PeriodicKind::antipodal || per.n != anti.n)
    throw domain_error("sphere_periodic_points: need P_n and P_n^- for the same n");
  std::map<SpherePoint, unsigned> fiber;
  for (const auto& p : per.points) ++fiber[project(p)];
  for (const auto& p : anti.points) ++fiber[project(p)];

  SpherePeriodicSet out;
  out.n = per.n;
  out.points.reserve(fiber.size());
  out.fibers.reserve(fiber.size());
  for (const auto& [s, count] : fiber) {
    out.points.push_back(s);
    out.fibers.push_back(count);
  }

  Integer expected = mat_pow(m, per.n).trace();
  if (Integer(out.points.size()) != expected)
    throw enumeration_error("|P_" + std::to_string(per.n) + "(g_A)| = " + std::to_string(out.points.size()) +
                            " but trace(A^n) = " + expected.str());
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (out.fibers[i] != 2)
      throw enumeration_error("fiber of size " + std::to_string(out.fibers[i]) + " over " + to_string(out.points[i].rep()));
  }
  return out;
}

inline SpherePeriodicSet sphere_periodic_points(const IntMatrix2& m, unsigned long n) {
  return sphere_periodic_points(m, periodic_points(m, n), antipodal_periodic_points(m, n));
}

/// CSV with columns n,x_num,x_den,y_num,y_den,spine.
inline void write_csv(std::ostream& os, const SpherePeriodicSet& set, bool header = true) {
  if (header) os << "n,x_num,x_den,y_num,y_den,spine\n";
  for (const auto& s : set.points) {
    Rational x = s.rep().x(), y = s.rep().y();
    os << set.n << ',' << numerator(x) << ',' << denominator(x) << ',' << numerator(y) << ','
       << denominator(y) << ',' << (s.is_spine() ? "true" : "false") << '\n';
  }
}

}  // namespace toralab
