#pragma once

#include "toralab/measures.hpp"

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace toralab {

/// How a torus lift x of a blown sphere orbit closes: f^{n_k}(x) = x or = -x.
enum class LiftType { periodic, antipodal };

inline const char* to_string(LiftType t) { return t == LiftType::periodic ? "periodic" : "antipodal"; }

struct BlownOrbit {
  SpherePoint base;
  unsigned long period = 1;         // least period under g_A
  LiftType lift = LiftType::periodic;
  std::vector<SpherePoint> points;  // base, g(base), ..., g^{period-1}(base)
};

/// Finite truncation of the family of g_A-orbits that are blown up into circles.
struct BlowupRegistry {
  IntMatrix2 matrix;
  std::vector<BlownOrbit> orbits;

  /// (orbit index, position) of a point lying on a registered orbit.
  std::optional<std::pair<std::size_t, std::size_t>> locate(const SpherePoint& s) const {
    for (std::size_t k = 0; k < orbits.size(); ++k)
      for (std::size_t i = 0; i < orbits[k].points.size(); ++i)
        if (orbits[k].points[i] == s) return std::pair{k, i};
    return std::nullopt;
  }
};

/// Computes each base point's orbit, least period and lift type.
inline BlowupRegistry make_registry(const IntMatrix2& m, const std::vector<TorusPoint>& bases,
                                    unsigned long period_bound = 100000) {
  require_positive_hyperbolic(m);
  BlowupRegistry reg;
  reg.matrix = m;
  for (const auto& b : bases) {
    BlownOrbit o;
    o.base = project(b);
    auto p = sphere_least_period(m, o.base, period_bound);
    if (!p) throw domain_error("make_registry: " + to_string(b) + " has no period <= " + std::to_string(period_bound));
    o.period = *p;
    TorusPoint lifted = apply_n(m, o.base.rep(), o.period);
    o.lift = lifted == o.base.rep() ? LiftType::periodic : LiftType::antipodal;
    SpherePoint cur = o.base;
    for (unsigned long i = 0; i < o.period; ++i) {
      o.points.push_back(cur);
      cur = sphere_apply(m, cur);
    }
    reg.orbits.push_back(std::move(o));
  }
  return reg;
}

/// The first non-spine point of exact period `period` in P_period(g_A), in
/// sorted order, whose orbit avoids `avoid` and (optionally) has the given lift.
inline TorusPoint find_blowup_base(const IntMatrix2& m, unsigned long period, const BlowupRegistry* avoid = nullptr,
                                   std::optional<LiftType> lift = std::nullopt) {
  for (const auto& s : sphere_periodic_points(m, period).points) {
    if (s.is_spine() || sphere_least_period(m, s, period) != period) continue;
    if (avoid && avoid->locate(s)) continue;
    if (lift) {
      bool periodic = apply_n(m, s.rep(), period) == s.rep();
      if (periodic != (*lift == LiftType::periodic)) continue;
    }
    return s.rep();
  }
  throw domain_error("find_blowup_base: no suitable orbit of period " + std::to_string(period));
}

/// One base point per line as "x_num/x_den y_num/y_den"; '#' comments and blank lines skipped.
inline std::vector<TorusPoint> read_registry_points(std::istream& in) {
  std::vector<TorusPoint> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_torus_point(line));
    } catch (const domain_error& e) {
      throw domain_error("registry line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline void write_registry_points(std::ostream& os, const BlowupRegistry& reg) {
  for (const auto& o : reg.orbits) os << to_string(o.base.rep()) << '\n';
}

struct RegistryValidation {
  bool spine_free = true;
  bool distinct_periods = true;
  bool disjoint = true;
  bool genuine_orbits = true;
  std::vector<std::string> violations;
  Rational sampled_mesh = 0;  // max over the sample grid of the distance to the nearest blown point
  long sample_grid = 0;
  bool ok() const { return spine_free && distinct_periods && disjoint && genuine_orbits; }
};

/// Exact checks of the finitely verifiable registry conditions. Density of the
/// registry is not finitely checkable; a sampled mesh is reported instead.
inline RegistryValidation validate_registry(const BlowupRegistry& reg, long sample_grid = 16) {
  RegistryValidation v;
  v.sample_grid = sample_grid;
  std::map<unsigned long, std::size_t> period_owner;
  std::map<SpherePoint, std::size_t> owner;
  for (std::size_t k = 0; k < reg.orbits.size(); ++k) {
    const BlownOrbit& o = reg.orbits[k];
    std::string tag = "orbit " + std::to_string(k) + " (" + to_string(o.base.rep()) + ")";
    for (const auto& s : o.points)
      if (s.is_spine()) {
        v.spine_free = false;
        v.violations.push_back(tag + " contains the spine " + to_string(s.rep()));
        break;
      }
    if (auto [it, fresh] = period_owner.emplace(o.period, k); !fresh) {
      v.distinct_periods = false;
      v.violations.push_back(tag + " repeats period " + std::to_string(o.period) + " of orbit " + std::to_string(it->second));
    }
    // genuine: consecutive points follow g_A, the orbit closes, and the period is least
    bool genuine = !o.points.empty() && o.points.size() == o.period && o.points.front() == o.base;
    for (std::size_t i = 0; genuine && i < o.points.size(); ++i)
      genuine = sphere_apply(reg.matrix, o.points[i]) == o.points[(i + 1) % o.points.size()];
    if (genuine) {
      std::set<SpherePoint> distinct(o.points.begin(), o.points.end());
      genuine = distinct.size() == o.points.size();
    }
    if (!genuine) {
      v.genuine_orbits = false;
      v.violations.push_back(tag + " is not a g_A-orbit of least period " + std::to_string(o.period));
    }
    for (const auto& s : o.points) {
      if (auto [it, fresh] = owner.emplace(s, k); !fresh && it->second != k) {
        v.disjoint = false;
        v.violations.push_back(tag + " meets orbit " + std::to_string(it->second) + " at " + to_string(s.rep()));
      }
    }
  }
  if (!owner.empty() && sample_grid > 0) {
    for (long i = 0; i < sample_grid; ++i)
      for (long j = 0; j < sample_grid; ++j) {
        SpherePoint q = project(TorusPoint(Rational(i, sample_grid), Rational(j, sample_grid)));
        Rational best = 1;
        for (const auto& [s, k] : owner) best = std::min(best, sphere_metric(q, s));
        v.sampled_mesh = std::max(v.sampled_mesh, best);
      }
  }
  return v;
}

/// Oriented tangent direction at a point, scaled so that its first nonzero
/// coordinate is +1 or -1 (positive rescaling keeps the orientation).
using Direction = QuadVec2;

inline Direction normalize_direction(const QuadVec2& v) {
  QuadNumber lead = v[0].sign() != 0 ? v[0] : v[1];
  if (lead.sign() == 0) throw domain_error("normalize_direction: zero vector has no direction");
  QuadNumber scale = abs(lead).inverse();
  return {v[0] * scale, v[1] * scale};
}

/// The four direction classes fixed by the return map: +v_u, -v_u, +v_s, -v_s.
inline std::array<Direction, 4> circle_periodic_directions(const EigenData& eig) {
  return {normalize_direction(eig.v_u), normalize_direction(QuadNumber(-1) * eig.v_u), normalize_direction(eig.v_s),
          normalize_direction(QuadNumber(-1) * eig.v_s)};
}

struct CarpetBase {
  SpherePoint point;
  friend bool operator==(const CarpetBase&, const CarpetBase&) = default;
};

struct CarpetCircle {
  std::size_t orbit = 0;     // registry index k
  std::size_t position = 0;  // i in [0, n_k)
  Direction direction;
  friend bool operator==(const CarpetCircle&, const CarpetCircle&) = default;
};

/// A point of the carpet by its determining coordinate: an unblown sphere point
/// or a radial direction on one of the blown-up circles.
using CarpetPoint = std::variant<CarpetBase, CarpetCircle>;

/// G_A on the determining coordinate. Circle directions move by the linear
/// action of A; on an antipodal-lift orbit the identification at the wrap
/// contributes -I, so the step from position n_k - 1 back to 0 uses -A.
inline CarpetPoint carpet_apply(const BlowupRegistry& reg, const CarpetPoint& p) {
  if (const auto* b = std::get_if<CarpetBase>(&p)) {
    if (reg.locate(b->point)) throw domain_error("carpet_apply: base point " + to_string(b->point.rep()) + " lies on a blown orbit");
    return CarpetBase{sphere_apply(reg.matrix, b->point)};
  }
  const auto& c = std::get<CarpetCircle>(p);
  if (c.orbit >= reg.orbits.size()) throw domain_error("carpet_apply: orbit index out of range");
  const BlownOrbit& o = reg.orbits[c.orbit];
  if (c.position >= o.period) throw domain_error("carpet_apply: circle position out of range");
  std::size_t next = (c.position + 1) % o.period;
  QuadVec2 image = reg.matrix * c.direction;
  if (next == 0 && o.lift == LiftType::antipodal) image = QuadNumber(-1) * image;
  return CarpetCircle{c.orbit, next, normalize_direction(image)};
}

inline CarpetPoint carpet_apply_n(const BlowupRegistry& reg, CarpetPoint p, unsigned long n) {
  for (unsigned long i = 0; i < n; ++i) p = carpet_apply(reg, p);
  return p;
}

/// Which period the four circle points of a blown orbit are counted with.
/// single: n_k for every orbit. doubled: 2 n_k for antipodal-lift orbits.
enum class CarpetMode { single, doubled };

inline const char* to_string(CarpetMode m) { return m == CarpetMode::single ? "single" : "doubled"; }

struct OrbitContribution {
  std::size_t orbit = 0;
  unsigned long period = 0;         // n_k
  LiftType lift = LiftType::periodic;
  unsigned long circle_period = 0;  // period assigned by the mode
  bool removed = false;             // n_k | n: base orbit leaves Per_n
  bool contributes = false;         // circle_period | n: 4 n_k circle points enter Per_n
  bool dynamics_agree = true;       // carpet_apply^n fixes every counted circle point
};

struct CarpetCount {
  unsigned long n = 0;
  CarpetMode mode = CarpetMode::single;
  Integer per_sphere;  // Per_n(g_A) = trace(A^n)
  Integer per_carpet;  // Per_n(G_A)
  Integer removed = 0;
  Integer added = 0;
  std::vector<OrbitContribution> contributions;
  bool within_square_bound = false;  // |Per_n(G_A) - Per_n(g_A)| <= 4 n^2
  bool above_sphere = false;         // Per_n(G_A) >= Per_n(g_A)
  bool above_growth = false;         // Per_n(g_A) >= lambda^n, exact
  Integer difference() const { return per_carpet - per_sphere; }
};

/// Per_n(G_A) = Per_n(g_A) - sum_{n_k | n} n_k + sum_{contributing} 4 n_k, with a per-orbit certificate.
inline CarpetCount carpet_periodic_count(const BlowupRegistry& reg, unsigned long n, CarpetMode mode = CarpetMode::single) {
  if (n < 1) throw domain_error("carpet_periodic_count: n must be >= 1");
  EigenData eig = quad_eigen(reg.matrix);
  auto dirs = circle_periodic_directions(eig);
  CarpetCount out;
  out.n = n;
  out.mode = mode;
  out.per_sphere = mat_pow(reg.matrix, n).trace();
  for (std::size_t k = 0; k < reg.orbits.size(); ++k) {
    const BlownOrbit& o = reg.orbits[k];
    OrbitContribution c;
    c.orbit = k;
    c.period = o.period;
    c.lift = o.lift;
    c.circle_period = (mode == CarpetMode::doubled && o.lift == LiftType::antipodal) ? 2 * o.period : o.period;
    c.removed = n % o.period == 0;
    c.contributes = n % c.circle_period == 0;
    if (c.removed) out.removed += o.period;
    if (c.contributes) {
      out.added += 4 * o.period;
      for (std::size_t i = 0; i < o.period && c.dynamics_agree; ++i)
        for (const auto& d : dirs) {
          CarpetPoint start = CarpetCircle{k, i, d};
          if (carpet_apply_n(reg, start, n) != start) {
            c.dynamics_agree = false;
            break;
          }
        }
    }
    out.contributions.push_back(c);
  }
  out.per_carpet = out.per_sphere - out.removed + out.added;
  out.within_square_bound = abs(out.difference()) <= Integer(4) * n * n;
  out.above_sphere = out.per_carpet >= out.per_sphere;
  out.above_growth = pow(eig.lambda, static_cast<long>(n)) <= QuadNumber(Rational(out.per_sphere));
  return out;
}

struct CarpetMeasure {
  EmpiricalMeasure measure;  // on S^2: the projection of nu_n
  CarpetCount count;
  Rational circle_fraction = 0;  // mass carried by circle points
};

/// nu_n projected to S^2: unblown periodic points carry 1/Per_n(G_A); each
/// position of a contributing blown orbit carries its 4 collapsed circle points.
inline CarpetMeasure carpet_periodic_measure(const BlowupRegistry& reg, unsigned long n,
                                             CarpetMode mode = CarpetMode::single) {
  CarpetMeasure out;
  out.count = carpet_periodic_count(reg, n, mode);
  if (out.count.per_carpet <= 0) throw domain_error("carpet_periodic_measure: no periodic points");
  Rational unit(Integer(1), out.count.per_carpet);
  std::map<TorusPoint, Rational> acc;
  for (const auto& s : sphere_periodic_points(reg.matrix, n).points) {
    auto where = reg.locate(s);
    if (!where) {
      acc[s.rep()] += unit;
      continue;
    }
    const OrbitContribution& c = out.count.contributions[where->first];
    if (c.contributes) {
      acc[s.rep()] += 4 * unit;
      out.circle_fraction += 4 * unit;
    }
  }
  out.measure.space = Space::sphere;
  for (auto& [p, w] : acc) out.measure.atoms.push_back({p, w});
  return out;
}

/// CSV with columns n,mode,per_sphere,per_carpet,removed,added,bound_4n2,within_bound.
inline void write_csv(std::ostream& os, const std::vector<CarpetCount>& counts, bool header = true) {
  if (header) os << "n,mode,per_sphere,per_carpet,removed,added,bound_4n2,within_bound\n";
  for (const auto& c : counts)
    os << c.n << ',' << to_string(c.mode) << ',' << c.per_sphere << ',' << c.per_carpet << ',' << c.removed << ','
       << c.added << ',' << 4 * c.n * c.n << ',' << (c.within_square_bound ? "true" : "false") << '\n';
}

}  // namespace toralab
