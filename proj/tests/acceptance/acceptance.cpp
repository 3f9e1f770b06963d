// Acceptance checks for the cat map A = [[2,1],[1,1]]: one PASS/FAIL line per
// criterion. Usage: acceptance [criterion...]; no arguments runs all nine.
// Exit status is nonzero when any selected criterion fails.

#include "../oracles.hpp"

#include "toralab/carpet.hpp"
#include "toralab/entropy.hpp"
#include "toralab/measures.hpp"
#include "toralab/shadowing.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace toralab;
using oracle::cat;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

const long double log_lambda = std::log((3 + std::sqrt(5.0L)) / 2);

// 1. |P_n| = t_n - 2, |P_n^-| = t_n + 2, |P_n(g_A)| = t_n with every fiber of
// size 2, for n = 1..12, exact; n = 12 within a minute.
Verdict counting() {
  Verdict v;
  double slowest = 0;
  for (unsigned long n = 1; n <= 12; ++n) {
    auto t0 = Clock::now();
    Integer t = oracle::trace_by_recurrence(cat, n);
    PeriodicSet per = periodic_points(cat, n), anti = antipodal_periodic_points(cat, n);
    bool ok = Integer(per.size()) == t - 2 && Integer(anti.size()) == t + 2;
    try {
      SpherePeriodicSet s = sphere_periodic_points(cat, per, anti);
      ok = ok && Integer(s.points.size()) == t &&
           std::all_of(s.fibers.begin(), s.fibers.end(), [](unsigned f) { return f == 2; });
    } catch (const enumeration_error& e) {
      ok = false;
      v.detail += std::string(" ") + e.what();
    }
    double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    if (!ok) {
      v.pass = false;
      v.detail += " count mismatch at n=" + std::to_string(n);
    }
    if (n == 12 && dt >= 60) {
      v.pass = false;
      v.detail += " n=12 took " + fmt(dt) + " s";
    }
  }
  v.detail = "n=1..12 exact counts and 2-point fibers; slowest level " + fmt(slowest, 3) + " s (limit 60 s)" + v.detail;
  return v;
}

// 2. Separated-set slope on the 1/60 grid, delta = 0.1, n = 4..10, within 10%
// of log lambda on T^2 and S^2; log(Per_10(g_A))/10 within 2e-4 of log lambda.
Verdict entropy_value() {
  Verdict v;
  std::ostringstream d;
  for (Space sp : {Space::torus, Space::sphere}) {
    auto t0 = Clock::now();
    EntropyEstimate e = entropy_estimate(System{cat, sp}, CandidateScheme::grid(60), Rational(1, 10), 4, 10);
    long double rel = std::fabs(e.slope() - log_lambda) / log_lambda;
    bool ok = rel <= 0.10L;
    v.pass = v.pass && ok;
    d << to_string(sp) << " grid slope " << fmt(static_cast<double>(e.slope()), 4) << " (rel err "
      << fmt(static_cast<double>(rel), 3) << ", counts";
    for (const auto& l : e.levels) d << ' ' << l.count();
    d << ", " << fmt(seconds_since(t0), 3) << " s) " << (ok ? "ok" : "MISS") << "; ";
  }
  // informational: periodic points as candidates do not saturate
  EntropyEstimate per = entropy_estimate(System{cat, Space::torus}, CandidateScheme::periodic(), Rational(1, 10), 4, 8);
  d << "(info: periodic-candidate slope n=4..8 " << fmt(static_cast<double>(per.slope()), 4) << ") ";
  GrowthReport g = periodic_growth(cat, 10, 10);
  long double err = std::fabs(g.rows[0].log_rate - log_lambda);
  bool growth_ok = g.rows[0].count == oracle::trace_by_recurrence(cat, 10) && err <= 2e-4L;
  v.pass = v.pass && growth_ok;
  d << "log(Per_10)/10 = " << fmt(static_cast<double>(g.rows[0].log_rate), 8) << ", error "
    << fmt(static_cast<double>(err), 3) << " (limit 2e-4) " << (growth_ok ? "ok" : "MISS");
  v.detail = d.str();
  return v;
}

// 3. lambda^n <= Per_n(g_A) <= 2 lambda^n exactly for n = 1..20.
Verdict growth_sandwich() {
  GrowthReport g = periodic_growth(cat, 1, 20);
  Verdict v;
  v.pass = g.all_hold();
  for (const auto& row : g.rows) v.pass = v.pass && row.count == oracle::trace_by_recurrence(cat, row.n);
  v.detail = "exact comparisons in Q(sqrt 5) for n=1..20";
  for (const auto& row : g.rows)
    if (!row.lower_holds || !row.upper_holds) v.detail += "; fails at n=" + std::to_string(row.n);
  return v;
}

// 4. P_n and P_n^- are (n, 1/5)-separated for n <= 8: zero failing pairs.
Verdict separation() {
  System sys{cat, Space::torus};
  std::size_t failures = 0, pairs = 0;
  for (unsigned long n = 1; n <= 8; ++n) {
    for (const auto& set : {periodic_points(cat, n), antipodal_periodic_points(cat, n)}) {
      failures += separation_failures(sys, set.points, n, Rational(1, 5));
      pairs += set.size() * (set.size() - 1) / 2;
    }
  }
  return {failures == 0, std::to_string(pairs) + " pairs checked exactly, " + std::to_string(failures) + " failures"};
}

// 5. 200 seeded periodic pseudo-orbits with delta in {1e-2, 1e-3, 1e-4} and
// N in {10, 50, 200}: exact shadowing point with epsilon <= C*delta and
// f^N(z) = z; the same pseudo-orbits projected to S^2 through the lift protocol.
Verdict periodic_shadowing() {
  EigenData eig = quad_eigen(cat);
  const std::array<Rational, 3> deltas = {Rational(1, 100), Rational(1, 1000), Rational(1, 10000)};
  const std::array<std::size_t, 3> lengths = {10, 50, 200};
  std::size_t torus_ok = 0, sphere_ok = 0, built = 0, doubled = 0;
  long double worst_ratio = 0, worst_time = 0;
  std::string first_failure;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Rational& noise = deltas[i % 3];
    std::size_t n = lengths[(i / 3) % 3];
    std::uint64_t seed = 1000 + i;
    auto t0 = Clock::now();
    TorusPoint x0 = seeded_periodic_point(cat, n, seed);
    TorusPseudoOrbit po = make_pseudo_orbit(cat, x0, n, noise, seed);
    if (!po.periodic) {
      if (first_failure.empty()) first_failure = "orbit " + std::to_string(i) + ": " + po.diagnostic;
      continue;
    }
    ++built;
    ShadowResult r = shadow_periodic(cat, po);
    bool ok = r.exactly_periodic && r.bound_holds && r.period == n && apply_n(cat, *r.z0, n) == *r.z0 &&
              QuadNumber(*r.epsilon) <= eig.shadowing_constant() * QuadNumber(r.delta);
    if (ok) ++torus_ok;
    else if (first_failure.empty()) first_failure = "torus orbit " + std::to_string(i);
    if (r.delta > 0)
      worst_ratio = std::max(worst_ratio, to_long_double(*r.epsilon) / to_long_double(r.delta));

    SpherePseudoOrbit sp;
    sp.periodic = true;
    for (const auto& p : po.points) sp.points.push_back(project(p));
    ShadowResult s = shadow_periodic_sphere(cat, sp);
    bool sok = s.exactly_periodic && s.bound_holds && sphere_apply_n(cat, *s.z0_sphere, n) == *s.z0_sphere;
    if (sok) ++sphere_ok;
    else if (first_failure.empty()) first_failure = "sphere orbit " + std::to_string(i);
    if (s.lift_doubled) ++doubled;
    worst_time = std::max<long double>(worst_time, seconds_since(t0));
  }
  Verdict v;
  v.pass = built == 200 && torus_ok == 200 && sphere_ok == 200;
  v.detail = "C = " + fmt(static_cast<double>(eig.shadowing_constant().to_long_double()), 5) + " = " +
             fmt(static_cast<double>((eig.shadowing_constant() / eig.distortion()).to_long_double()), 5) +
             " * kappa_B; torus " + std::to_string(torus_ok) + "/200, sphere " + std::to_string(sphere_ok) +
             "/200 (" + std::to_string(doubled) + " antipodal lifts); max epsilon/delta " +
             fmt(static_cast<double>(worst_ratio), 4) + "; slowest orbit " + fmt(static_cast<double>(worst_time), 3) + " s";
  if (!first_failure.empty()) v.detail += "; first failure: " + first_failure;
  return v;
}

// 6. Two-segment specifications with gap L >= 12: periodic shadow within 0.05
// of both segments; log endpoint error against L has slope within 10% of
// -(log lambda)/2.
Verdict specification() {
  const std::size_t pairs = 16, length = 4;
  std::vector<long double> xs, ys;
  long double worst_segment = 0;
  bool all_ok = true;
  std::size_t l0 = min_specification_gap(quad_eigen(cat));
  std::size_t lo = std::max<std::size_t>(12, l0), hi = lo + 12;
  for (std::size_t gap = lo; gap <= hi; ++gap) {
    long double log_sum = 0;
    for (std::size_t p = 0; p < pairs; ++p) {
      auto starts = seeded_centers(2, 7000 + p);
      SpecificationRequest req{{{starts[0], length}, {starts[1], length}}, gap};
      SpecificationResult r = periodic_specification(cat, req);
      long double seg = to_long_double(r.segment_epsilon);
      worst_segment = std::max(worst_segment, seg);
      all_ok = all_ok && r.shadow.exactly_periodic && seg <= 0.05L &&
               apply_n(cat, *r.shadow.z0, r.period) == *r.shadow.z0;
      long double endpoint = 0;
      for (const auto& c : r.connections)
        endpoint = std::max(endpoint, max(c.start_error, c.end_error).to_long_double());
      log_sum += std::log(endpoint);
    }
    xs.push_back(static_cast<long double>(gap));
    ys.push_back(log_sum / pairs);
  }
  LinearFit fit = least_squares(xs, ys);
  long double target = -log_lambda / 2;
  long double rel = std::fabs(fit.slope - target) / std::fabs(target);
  Verdict v;
  v.pass = all_ok && rel <= 0.10L;
  v.detail = "L=" + std::to_string(lo) + ".." + std::to_string(hi) + " (documented minimum " + std::to_string(l0) +
             "), " + std::to_string(pairs) + " pairs per L; worst segment distance " +
             fmt(static_cast<double>(worst_segment), 3) + " (limit 0.05); decay slope " +
             fmt(static_cast<double>(fit.slope), 4) + " vs " + fmt(static_cast<double>(target), 4) + " (rel err " +
             fmt(static_cast<double>(rel), 3) + ", limit 0.1)";
  return v;
}

// 7. Torus D_3(mu_n) = 0 exactly for n >= 5 (enumerated for n <= 12, dual-lattice
// criterion for n <= 40); sphere D_3 nonincreasing in n and <= 0.02 at n = 10;
// pi_*(nu_n^*) equals hat mu_n^* exactly for n <= 8.
Verdict weak_convergence() {
  Verdict v;
  std::ostringstream d;
  bool torus_ok = true;
  for (unsigned long n = 5; n <= 12; ++n) {
    DiscrepancyReport r = discrepancy(periodic_measure(cat, n, Space::torus), 3);
    torus_ok = torus_ok && r.exact && *r.exact == 0;
  }
  for (unsigned long n = 5; n <= 40; ++n) {
    IntMatrix2 kernel = mat_pow(cat, n) - IntMatrix2::identity();
    for (const auto& k : frequency_family(Space::torus, 3))
      torus_ok = torus_ok && !oracle::in_dual_lattice(kernel, k[0], k[1]);
  }
  d << "torus D_3 = 0 for n=5..40 " << (torus_ok ? "ok" : "MISS") << "; sphere D_3:";
  bool sphere_ok = true;
  long double prev = 0;
  for (unsigned long n = 1; n <= 10; ++n) {
    DiscrepancyReport r = discrepancy(periodic_measure(cat, n, Space::sphere), 3);
    if (n > 1 && r.value > prev) sphere_ok = false;
    prev = r.value;
    d << ' ' << fmt(static_cast<double>(r.value), 3);
  }
  sphere_ok = sphere_ok && prev <= 0.02L;
  d << ' ' << (sphere_ok ? "ok" : "MISS");
  bool push_ok = true;
  for (unsigned long n = 1; n <= 8; ++n)
    push_ok = push_ok && pushforward(periodic_measure(cat, n, Space::torus, true)).atoms ==
                             periodic_measure(cat, n, Space::sphere, true).atoms;
  d << "; pushforward identity n<=8 " << (push_ok ? "ok" : "MISS");
  v.pass = torus_ok && sphere_ok && push_ok;
  v.detail = d.str();
  return v;
}

// 8. r = 10, n = 2..5, radius 0.1, 50 centers: per-level max/min of the
// normalized masses reported; the ratio stable within a factor 2 across n.
Verdict homogeneity() {
  auto centers = seeded_centers(50, 2024);
  Verdict v;
  std::ostringstream d;
  for (Space sp : {Space::torus, Space::sphere}) {
    HomogeneityReport rep = homogeneity_probe(cat, 10, 2, 5, Rational(1, 10), centers, sp);
    bool ok = rep.stability <= 2.0L;
    v.pass = v.pass && ok;
    d << to_string(sp) << " ratios";
    for (const auto& l : rep.levels) d << ' ' << fmt(static_cast<double>(l.ratio), 4);
    d << ", stability " << fmt(static_cast<double>(rep.stability), 4) << (rep.any_empty ? " (empty balls present)" : "")
      << ' ' << (ok ? "ok" : "MISS") << "; ";
  }
  v.detail = d.str() + "limit 2";
  return v;
}

BlowupRegistry registry_with_periods(const std::vector<unsigned long>& periods) {
  BlowupRegistry reg = make_registry(cat, {});
  std::vector<TorusPoint> bases;
  for (unsigned long p : periods) {
    bases.push_back(find_blowup_base(cat, p, &reg));
    reg = make_registry(cat, bases);
  }
  return reg;
}

// 9. Registries with periods {3,4} and {1,2}: Per_n(G_A) = t_n + 3 sum_{n_k | n} n_k
// for n <= 20, |Per_n(G_A) - t_n| <= 4n^2, Per_n(G_A) >= lambda^n exactly; circle
// mass of nu_n <= 4n^2/t_n and |D_3(pi nu_n) - D_3(mu_n)| <= 4n^2/t_n.
Verdict carpet() {
  EigenData eig = quad_eigen(cat);
  Verdict v;
  std::ostringstream d;
  for (const auto& periods : {std::vector<unsigned long>{3, 4}, std::vector<unsigned long>{1, 2}}) {
    BlowupRegistry reg = registry_with_periods(periods);
    bool valid = validate_registry(reg).ok();
    bool counts_ok = true, measure_ok = true, dynamics_agree = true;
    long double worst_gap = 0;
    for (unsigned long n = 1; n <= 20; ++n) {
      CarpetCount c = carpet_periodic_count(reg, n, CarpetMode::single);
      Integer t = oracle::trace_by_recurrence(cat, n);
      Integer closed = t;
      for (unsigned long p : periods)
        if (n % p == 0) closed += 3 * p;
      counts_ok = counts_ok && c.per_carpet == closed && abs(c.per_carpet - t) <= Integer(4) * n * n &&
                  pow(eig.lambda, static_cast<long>(n)) <= QuadNumber(Rational(c.per_carpet));
      for (const auto& o : c.contributions) dynamics_agree = dynamics_agree && o.dynamics_agree;
      if (n <= 12) {
        CarpetMeasure nu = carpet_periodic_measure(reg, n, CarpetMode::single);
        Rational bound(Integer(4) * n * n, t);
        long double gap = std::fabs(discrepancy(nu.measure, 3).value -
                                    discrepancy(periodic_measure(cat, n, Space::sphere), 3).value);
        worst_gap = std::max(worst_gap, gap / to_long_double(bound));
        measure_ok = measure_ok && nu.measure.total_mass() == 1 && nu.circle_fraction <= bound &&
                     gap <= to_long_double(bound);
      }
    }
    bool ok = valid && counts_ok && measure_ok;
    v.pass = v.pass && ok;
    d << "periods {" << periods[0] << ',' << periods[1] << "} lifts";
    for (const auto& o : reg.orbits) d << ' ' << to_string(o.lift);
    d << ": counts n<=20 " << (counts_ok ? "ok" : "MISS") << ", measures n<=12 " << (measure_ok ? "ok" : "MISS")
      << " (max discrepancy gap / bound " << fmt(static_cast<double>(worst_gap), 3) << ")"
      << (dynamics_agree ? "" : ", antipodal-lift circles return after 2n_k under the map") << "; ";
  }
  v.detail = d.str();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"counting exactness", counting},        {"entropy value", entropy_value},
      {"growth sandwich", growth_sandwich},    {"separation", separation},
      {"periodic shadowing", periodic_shadowing}, {"periodic specification", specification},
      {"weak* convergence", weak_convergence}, {"homogeneity probe", homogeneity},
      {"carpet ledger", carpet}};
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "usage: acceptance [criterion 1-9 ...]\n";
      return 2;
    }
    selected.insert(static_cast<std::size_t>(k));
  }
  if (selected.empty())
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.insert(k);

  int failures = 0;
  for (std::size_t k : selected) {
    const auto& [name, check] = criteria[k - 1];
    auto t0 = Clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << name << ", " << fmt(seconds_since(t0), 3)
              << " s): " << v.detail << std::endl;
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
