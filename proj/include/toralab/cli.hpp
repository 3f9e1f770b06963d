#pragma once

// Batch experiment runner behind tools/toralab_cli. Every command is a pure
// function of its ExperimentConfig; randomness comes only from the seed.

#include "toralab/io.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <ostream>
#include <set>
#include <string>

namespace toralab {

/// Invalid or incomplete configuration (exit status 2), as opposed to a
/// failure while running a valid one (exit status 1).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

inline const std::array<const char*, 8> commands = {"count",   "enumerate", "shadow", "spec",
                                                    "measure", "entropy",   "carpet", "homogeneity"};

inline std::string usage_text() {
  return "usage: toralab_cli <command> [options]\n"
         "commands:\n"
         "  count        Per_n, Per_n^-, Per_n(g_A) over --n-range, verified by enumeration where feasible (CSV)\n"
         "  enumerate    periodic set at --n on --space, --kind periodic|antipodal (CSV)\n"
         "  shadow       shadow a pseudo-orbit from --input, or a seeded one (--n, --delta, --seed) (JSON)\n"
         "  spec         periodic point for a seeded two-segment specification (--gap, --length, --seed) (JSON)\n"
         "  measure      periodic measure at --n and its discrepancy up to --K (JSON, atoms CSV via --atoms)\n"
         "  entropy      separated-set counts over --n-range at --delta, --scheme grid:D|periodic|growth (CSV)\n"
         "  carpet       registry validation and carpet counts over --n-range (JSON)\n"
         "  homogeneity  normalized Bowen-ball masses, --r, --n-range, --epsilon, --count, --seed (CSV)\n"
         "common options: --matrix \"a b c d\" --space torus|sphere --mode exact|highprec --out FILE\n"
         "                --config FILE --save-config FILE\n";
}

struct ExperimentConfig {
  std::string command;
  std::string matrix = "2 1 1 1";
  std::string space = "torus";
  std::string mode = "exact";  // exact | highprec
  std::optional<unsigned long> n;
  std::optional<std::array<unsigned long, 2>> n_range;
  std::optional<Rational> delta;
  std::optional<Rational> epsilon;
  long K = 3;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> registry;
  std::optional<std::string> input;
  std::optional<std::string> out;
  std::optional<std::string> atoms;
  std::string kind = "periodic";  // enumerate: periodic | antipodal
  bool starred = false;
  std::optional<unsigned long> gap;
  std::optional<unsigned long> length;
  std::optional<unsigned long> count;
  std::optional<unsigned long> r;
  std::string scheme = "grid:60";
  std::string carpet_mode = "single";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// "a..b", "a:b" or a single "a".
inline std::array<unsigned long, 2> parse_n_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw config_error("bad n-range \"" + text + "\": expected a..b");
    return std::stoul(s);
  };
  std::size_t sep = text.find("..");
  std::size_t width = 2;
  if (sep == std::string::npos) {
    sep = text.find(':');
    width = 1;
  }
  std::array<unsigned long, 2> out{};
  if (sep == std::string::npos) out = {number(text), number(text)};
  else out = {number(text.substr(0, sep)), number(text.substr(sep + width))};
  if (out[0] < 1 || out[1] < out[0]) throw config_error("bad n-range \"" + text + "\": need 1 <= a <= b");
  return out;
}

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["matrix"] = c.matrix;
  j["space"] = c.space;
  j["mode"] = c.mode;
  if (c.n) j["n"] = *c.n;
  if (c.n_range) j["n_range"] = {(*c.n_range)[0], (*c.n_range)[1]};
  if (c.delta) j["delta"] = to_string(*c.delta);
  if (c.epsilon) j["epsilon"] = to_string(*c.epsilon);
  j["K"] = c.K;
  if (c.seed) j["seed"] = *c.seed;
  if (c.registry) j["registry"] = *c.registry;
  if (c.input) j["input"] = *c.input;
  if (c.out) j["out"] = *c.out;
  if (c.atoms) j["atoms"] = *c.atoms;
  j["kind"] = c.kind;
  j["starred"] = c.starred;
  if (c.gap) j["gap"] = *c.gap;
  if (c.length) j["length"] = *c.length;
  if (c.count) j["count"] = *c.count;
  if (c.r) j["r"] = *c.r;
  j["scheme"] = c.scheme;
  j["carpet_mode"] = c.carpet_mode;
  return j;
}

inline ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  static const std::set<std::string> known = {"command", "matrix", "space", "mode",   "n",     "n_range",
                                              "delta",   "epsilon", "K",    "seed",   "registry", "input",
                                              "out",     "atoms",   "kind", "starred", "gap",  "length",
                                              "count",   "r",       "scheme", "carpet_mode"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw config_error("unknown config key \"" + key + "\"");
  ExperimentConfig c;
  try {
    if (j.contains("command")) c.command = j.at("command").get<std::string>();
    if (j.contains("matrix")) c.matrix = j.at("matrix").get<std::string>();
    if (j.contains("space")) c.space = j.at("space").get<std::string>();
    if (j.contains("mode")) c.mode = j.at("mode").get<std::string>();
    if (j.contains("n")) c.n = j.at("n").get<unsigned long>();
    if (j.contains("n_range")) c.n_range = j.at("n_range").get<std::array<unsigned long, 2>>();
    if (j.contains("delta")) c.delta = parse_rational(j.at("delta").get<std::string>());
    if (j.contains("epsilon")) c.epsilon = parse_rational(j.at("epsilon").get<std::string>());
    if (j.contains("K")) c.K = j.at("K").get<long>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("registry")) c.registry = j.at("registry").get<std::string>();
    if (j.contains("input")) c.input = j.at("input").get<std::string>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("atoms")) c.atoms = j.at("atoms").get<std::string>();
    if (j.contains("kind")) c.kind = j.at("kind").get<std::string>();
    if (j.contains("starred")) c.starred = j.at("starred").get<bool>();
    if (j.contains("gap")) c.gap = j.at("gap").get<unsigned long>();
    if (j.contains("length")) c.length = j.at("length").get<unsigned long>();
    if (j.contains("count")) c.count = j.at("count").get<unsigned long>();
    if (j.contains("r")) c.r = j.at("r").get<unsigned long>();
    if (j.contains("scheme")) c.scheme = j.at("scheme").get<std::string>();
    if (j.contains("carpet_mode")) c.carpet_mode = j.at("carpet_mode").get<std::string>();
  } catch (const json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  } catch (const domain_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return c;
}

inline std::string config_text(const ExperimentConfig& c) { return to_json(c).dump(2) + "\n"; }

inline ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

/// Hash of the experiment-defining fields (output locations excluded).
inline std::string config_hash(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("out");
  j.erase("atoms");
  return fnv1a_hex(j.dump());
}

inline std::string provenance_line(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("out");
  j.erase("atoms");
  return "# " + library_versions() + "; command " + c.command + "; config_hash " + config_hash(c) + "; config " +
         j.dump() + "\n";
}

inline json provenance_json(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("out");
  j.erase("atoms");
  return {{"versions", library_versions()}, {"command", c.command}, {"config_hash", config_hash(c)}, {"config", j}};
}

namespace detail {

struct CommandOutput {
  std::string body;     // file content
  std::string summary;  // one line for the terminal
  std::optional<std::string> atoms_body;
};

inline std::string num(long double v) {
  std::ostringstream os;
  os << std::setprecision(6) << static_cast<double>(v);
  return os.str();
}

inline IntMatrix2 config_matrix(const ExperimentConfig& c) {
  try {
    return parse_matrix(c.matrix);
  } catch (const domain_error& e) {
    throw config_error(std::string("--matrix: ") + e.what());
  }
}

inline Space config_space(const ExperimentConfig& c) {
  if (c.space == "torus") return Space::torus;
  if (c.space == "sphere") return Space::sphere;
  throw config_error("--space must be torus or sphere, got \"" + c.space + "\"");
}

inline ArithmeticMode config_mode(const ExperimentConfig& c) {
  if (c.mode == "exact") return ArithmeticMode::exact;
  if (c.mode == "highprec") return ArithmeticMode::highprec;
  throw config_error("--mode must be exact or highprec, got \"" + c.mode + "\"");
}

inline std::array<unsigned long, 2> config_range(const ExperimentConfig& c, std::optional<std::array<unsigned long, 2>> fallback = {}) {
  if (c.n_range) {
    if ((*c.n_range)[0] < 1 || (*c.n_range)[1] < (*c.n_range)[0]) throw config_error("--n-range needs 1 <= a <= b");
    return *c.n_range;
  }
  if (c.n) return {1, *c.n};
  if (fallback) return *fallback;
  throw config_error(c.command + " needs --n-range or --n");
}

inline unsigned long config_n(const ExperimentConfig& c) {
  if (!c.n || *c.n < 1) throw config_error(c.command + " needs --n >= 1");
  return *c.n;
}

inline std::uint64_t config_seed(const ExperimentConfig& c) {
  if (!c.seed) throw config_error(c.command + " is randomized and needs --seed");
  return *c.seed;
}

inline bool bool_text(std::ostream& os, bool b) { return static_cast<bool>(os << (b ? "true" : "false")); }

inline CommandOutput run_count(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  require_positive_hyperbolic(m);
  auto [lo, hi] = config_range(c);
  std::ostringstream os;
  os << "n,per,per_minus,per_sphere,enumerated\n";
  for (unsigned long n = lo; n <= hi; ++n) {
    PerCounts pc = per_counts(m, n);
    Integer t = mat_pow(m, n).trace();
    std::string enumerated = "skipped";
    if (t <= 200000) {
      PeriodicSet per = periodic_points(m, n), anti = antipodal_periodic_points(m, n);
      if (Integer(per.size()) != pc.per || Integer(anti.size()) != pc.per_minus)
        throw enumeration_error("enumeration disagrees with trace(A^n) -+ 2 at n=" + std::to_string(n));
      sphere_periodic_points(m, per, anti);  // throws unless |P_n(g_A)| = trace and every fiber has 2 points
      enumerated = "true";
    }
    os << n << ',' << pc.per << ',' << pc.per_minus << ',' << t << ',' << enumerated << '\n';
  }
  return {os.str(), "count: n=" + std::to_string(lo) + ".." + std::to_string(hi), {}};
}

inline CommandOutput run_enumerate(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  unsigned long n = config_n(c);
  std::ostringstream os;
  std::size_t size = 0;
  if (config_space(c) == Space::torus) {
    if (c.kind != "periodic" && c.kind != "antipodal") throw config_error("--kind must be periodic or antipodal");
    PeriodicSet set = c.kind == "periodic" ? periodic_points(m, n) : antipodal_periodic_points(m, n);
    write_csv(os, set);
    size = set.size();
  } else {
    SpherePeriodicSet set = sphere_periodic_points(m, n);
    write_csv(os, set);
    size = set.points.size();
  }
  return {os.str(), "enumerate: " + std::to_string(size) + " points", {}};
}

inline CommandOutput run_shadow(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  ArithmeticMode mode = config_mode(c);
  ShadowResult res;
  if (c.input) {
    std::istringstream in(read_file(*c.input));
    PseudoOrbitFile f = read_pseudo_orbit(in);
    if (f.space == Space::torus) res = shadow_periodic(m, f.torus, mode);
    else {
      if (mode != ArithmeticMode::exact) throw config_error("sphere shadowing runs in exact mode only");
      res = shadow_periodic_sphere(m, f.sphere);
    }
  } else {
    if (!c.n || !c.delta) throw config_error("shadow needs --input, or --n (orbit length), --delta (noise) and --seed");
    std::uint64_t seed = config_seed(c);
    TorusPoint x0 = seeded_periodic_point(m, *c.n, seed);
    TorusPseudoOrbit po = make_pseudo_orbit(m, x0, *c.n, *c.delta, seed);
    if (!po.periodic) throw domain_error(po.diagnostic);
    if (config_space(c) == Space::torus) res = shadow_periodic(m, po, mode);
    else {
      if (mode != ArithmeticMode::exact) throw config_error("sphere shadowing runs in exact mode only");
      SpherePseudoOrbit sp;
      sp.periodic = true;
      for (const auto& p : po.points) sp.points.push_back(project(p));
      res = shadow_periodic_sphere(m, sp);
    }
  }
  json j;
  j["provenance"] = provenance_json(c);
  json body = to_json(res);
  for (auto& [k, v] : body.items()) j[k] = v;
  return {j.dump(2) + "\n", "shadow: period " + std::to_string(res.period) + ", epsilon " + num(res.epsilon_approx) +
                                (res.bound_holds ? " <= C*delta" : " EXCEEDS C*delta"),
          {}};
}

inline CommandOutput run_spec(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  require_positive_hyperbolic(m);
  std::uint64_t seed = config_seed(c);
  EigenData eig = quad_eigen(m);
  std::size_t gap = c.gap ? *c.gap : min_specification_gap(eig);
  std::size_t length = c.length ? *c.length : 5;
  if (length < 1) throw config_error("--length must be >= 1");
  auto starts = seeded_centers(2, seed);
  SpecificationRequest req;
  req.gap = gap;
  for (const auto& s : starts) req.segments.push_back({s, length});
  SpecificationResult res = periodic_specification(m, req);
  json j;
  j["provenance"] = provenance_json(c);
  j["gap"] = gap;
  j["min_gap"] = min_specification_gap(eig);
  j["segments"] = json::array();
  for (std::size_t i = 0; i < req.segments.size(); ++i)
    j["segments"].push_back({{"start", to_string(req.segments[i].start)}, {"length", length}, {"time", res.segment_starts[i]}});
  j["period"] = res.period;
  j["z0"] = res.shadow.z0 ? to_string(*res.shadow.z0) : "";
  j["exactly_periodic"] = res.shadow.exactly_periodic;
  j["segment_epsilon"] = to_string(res.segment_epsilon);
  j["segment_epsilon_approx"] = static_cast<double>(to_long_double(res.segment_epsilon));
  j["epsilon"] = res.shadow.epsilon ? to_string(*res.shadow.epsilon) : "";
  j["connections"] = json::array();
  for (const auto& conn : res.connections)
    j["connections"].push_back({{"start_error", static_cast<double>(conn.start_error.to_long_double())},
                                {"end_error", static_cast<double>(conn.end_error.to_long_double())},
                                {"diagnostic", conn.diagnostic}});
  return {j.dump(2) + "\n",
          "spec: period " + std::to_string(res.period) + ", segment epsilon " +
              num(to_long_double(res.segment_epsilon)),
          {}};
}

inline CommandOutput run_measure(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  unsigned long n = config_n(c);
  Space space = config_space(c);
  if (c.K < 1) throw config_error("--K must be >= 1");
  EmpiricalMeasure mu = periodic_measure(m, n, space, c.starred);
  DiscrepancyReport d = discrepancy(mu, c.K);
  json j;
  j["provenance"] = provenance_json(c);
  j["n"] = n;
  j["space"] = to_string(space);
  j["starred"] = c.starred;
  j["atoms"] = mu.size();
  j["total_mass"] = to_string(mu.total_mass());
  j["discrepancy"] = to_json(d);
  CommandOutput out{j.dump(2) + "\n", "measure: D_" + std::to_string(c.K) + " = " + num(d.value), {}};
  if (c.atoms) {
    std::ostringstream os;
    os << provenance_line(c);
    write_csv(os, mu);
    out.atoms_body = os.str();
  }
  return out;
}

inline CommandOutput run_entropy(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  auto [lo, hi] = config_range(c);
  std::ostringstream os;
  if (c.scheme == "growth") {
    GrowthReport g = periodic_growth(m, lo, hi);
    os << "n,count,log_rate,lower_holds,upper_holds\n";
    for (const auto& row : g.rows) {
      os << row.n << ',' << row.count << ',' << std::setprecision(17) << static_cast<double>(row.log_rate) << ',';
      bool_text(os, row.lower_holds);
      os << ',';
      bool_text(os, row.upper_holds);
      os << '\n';
    }
    return {os.str(), std::string("entropy: growth sandwich ") + (g.all_hold() ? "holds" : "FAILS") +
                          ", log lambda = " + num(g.log_lambda),
            {}};
  }
  if (!c.delta) throw config_error("entropy needs --delta");
  CandidateScheme scheme;
  if (c.scheme == "periodic") scheme = CandidateScheme::periodic();
  else if (c.scheme.rfind("grid:", 0) == 0) {
    try {
      scheme = CandidateScheme::grid(std::stol(c.scheme.substr(5)));
    } catch (const std::exception&) {
      throw config_error("bad --scheme \"" + c.scheme + "\"");
    }
  } else {
    throw config_error("--scheme must be grid:D, periodic or growth");
  }
  EntropyEstimate est = entropy_estimate(System{m, config_space(c)}, scheme, *c.delta, lo, hi);
  write_csv(os, est);
  return {os.str(), "entropy: slope " + num(est.slope()), {}};
}

inline CarpetMode config_carpet_mode(const ExperimentConfig& c) {
  if (c.carpet_mode == "single") return CarpetMode::single;
  if (c.carpet_mode == "doubled") return CarpetMode::doubled;
  throw config_error("--carpet-mode must be single or doubled");
}

inline CommandOutput run_carpet(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  if (!c.registry) throw config_error("carpet needs --registry FILE");
  CarpetMode mode = config_carpet_mode(c);
  auto [lo, hi] = config_range(c);
  std::istringstream in(read_file(*c.registry));
  BlowupRegistry reg = make_registry(m, read_registry_points(in));
  RegistryValidation v = validate_registry(reg);
  if (!v.ok()) {
    std::string msg = "registry rejected:";
    for (const auto& s : v.violations) msg += "\n  " + s;
    throw domain_error(msg);
  }
  json j;
  j["provenance"] = provenance_json(c);
  j["registry"] = to_json(reg);
  j["validation"] = to_json(v);
  j["counts"] = json::array();
  bool all_bounds = true;
  for (unsigned long n = lo; n <= hi; ++n) {
    CarpetCount count = carpet_periodic_count(reg, n, mode);
    all_bounds = all_bounds && count.within_square_bound && count.above_growth;
    json row = to_json(count);
    if (count.per_sphere <= 200000) {
      CarpetMeasure nu = carpet_periodic_measure(reg, n, mode);
      DiscrepancyReport dn = discrepancy(nu.measure, c.K);
      DiscrepancyReport dmu = discrepancy(periodic_measure(m, n, Space::sphere), c.K);
      row["circle_fraction"] = to_string(nu.circle_fraction);
      row["circle_fraction_bound"] = to_string(Rational(Integer(4) * n * n, count.per_sphere));
      row["discrepancy"] = static_cast<double>(dn.value);
      row["sphere_discrepancy"] = static_cast<double>(dmu.value);
    }
    j["counts"].push_back(std::move(row));
  }
  return {j.dump(2) + "\n",
          "carpet: " + std::to_string(reg.orbits.size()) + " blown orbits, bounds " + (all_bounds ? "hold" : "FAIL"), {}};
}

inline CommandOutput run_homogeneity(const ExperimentConfig& c) {
  IntMatrix2 m = config_matrix(c);
  std::uint64_t seed = config_seed(c);
  auto [lo, hi] = config_range(c, std::array<unsigned long, 2>{2, 5});
  unsigned long r = c.r ? *c.r : 10;
  Rational radius = c.epsilon ? *c.epsilon : Rational(1, 10);
  std::size_t count = c.count ? *c.count : 50;
  HomogeneityReport rep =
      homogeneity_probe(m, r, lo, hi, radius, seeded_centers(count, seed), config_space(c), c.starred);
  std::ostringstream os;
  write_csv(os, rep);
  return {os.str(),
          "homogeneity: max/min ratio " + num(rep.ratio) + ", stability across n " +
              num(rep.stability),
          {}};
}

}  // namespace detail

/// Runs one command. Output goes to config.out (atomically) or to `out`;
/// diagnostics go to `err`. Returns exit_ok, exit_failure or exit_usage.
inline int run(const std::string& command, ExperimentConfig config, std::ostream& out, std::ostream& err) {
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    err << "unknown command \"" << command << "\"\n" << usage_text();
    return exit_usage;
  }
  config.command = command;
  try {
    detail::CommandOutput result;
    if (command == "count") result = detail::run_count(config);
    else if (command == "enumerate") result = detail::run_enumerate(config);
    else if (command == "shadow") result = detail::run_shadow(config);
    else if (command == "spec") result = detail::run_spec(config);
    else if (command == "measure") result = detail::run_measure(config);
    else if (command == "entropy") result = detail::run_entropy(config);
    else if (command == "carpet") result = detail::run_carpet(config);
    else result = detail::run_homogeneity(config);

    bool is_json = !result.body.empty() && result.body.front() == '{';
    std::string content = is_json ? result.body : provenance_line(config) + result.body;
    if (config.out) {
      write_file_atomic(*config.out, content);
      if (result.atoms_body) write_file_atomic(*config.atoms, *result.atoms_body);
      out << result.summary << '\n';
    } else {
      out << content;
      if (result.atoms_body) write_file_atomic(*config.atoms, *result.atoms_body);
    }
    return exit_ok;
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace toralab
