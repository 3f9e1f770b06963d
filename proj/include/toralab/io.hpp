#pragma once

// Serialization of experiment artifacts: pseudo-orbit files, JSON reports and
// the provenance header. Needs nlohmann/json (vendor/json.hpp).

#include "toralab/carpet.hpp"
#include "toralab/entropy.hpp"
#include "toralab/shadowing.hpp"

#include <json.hpp>

#include <boost/version.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>

namespace toralab {

#ifndef TORALAB_VERSION
#define TORALAB_VERSION "0.1.0"
#endif

inline constexpr const char* version = TORALAB_VERSION;

using json = nlohmann::ordered_json;

// ---- pseudo-orbit files: "space N periodic|open", then one point per line

template <class Point>
void write_pseudo_orbit(std::ostream& os, const PseudoOrbit<Point>& po) {
  os << to_string(po.space()) << ' ' << po.size() << ' ' << (po.periodic ? "periodic" : "open") << '\n';
  for (const auto& p : po.points) {
    if constexpr (std::is_same_v<Point, SpherePoint>) os << to_string(p.rep()) << '\n';
    else os << to_string(p) << '\n';
  }
}

struct PseudoOrbitFile {
  Space space = Space::torus;
  TorusPseudoOrbit torus;
  SpherePseudoOrbit sphere;
};

inline PseudoOrbitFile read_pseudo_orbit(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw domain_error("pseudo-orbit file: missing header");
  std::istringstream hs(line);
  std::string space, closing;
  long long count = -1;
  if (!(hs >> space >> count >> closing) || count < 1)
    throw domain_error("pseudo-orbit file: header must be \"space N periodic|open\", got \"" + line + "\"");
  PseudoOrbitFile f;
  if (space == "torus") f.space = Space::torus;
  else if (space == "sphere") f.space = Space::sphere;
  else throw domain_error("pseudo-orbit file: unknown space \"" + space + "\"");
  if (closing != "periodic" && closing != "open") throw domain_error("pseudo-orbit file: expected periodic or open");
  bool periodic = closing == "periodic";
  f.torus.periodic = f.sphere.periodic = periodic;
  for (long long i = 0; i < count; ++i) {
    if (!next_line()) throw domain_error("pseudo-orbit file: expected " + std::to_string(count) + " points");
    TorusPoint p = parse_torus_point(line);
    if (f.space == Space::torus) f.torus.points.push_back(p);
    else f.sphere.points.push_back(project(p));
  }
  if (next_line()) throw domain_error("pseudo-orbit file: more points than the header declares");
  return f;
}

// ---- JSON reports; exact values are strings

inline json to_json(const ShadowResult& r) {
  json j;
  j["space"] = to_string(r.space);
  j["mode"] = to_string(r.mode);
  if (r.z0) j["z0"] = to_string(*r.z0);
  else j["z0"] = r.z0_decimal[0] + " " + r.z0_decimal[1];
  j["z0_decimal"] = {r.z0_decimal[0], r.z0_decimal[1]};
  j["epsilon"] = r.epsilon ? to_string(*r.epsilon) : std::to_string(static_cast<double>(r.epsilon_approx));
  j["epsilon_approx"] = static_cast<double>(r.epsilon_approx);
  j["period"] = r.period;
  json cert = json::array();
  if (!r.certificate.empty())
    for (const auto& c : r.certificate) cert.push_back(to_string(c));
  else
    for (auto c : r.certificate_approx) cert.push_back(static_cast<double>(c));
  j["certificate"] = std::move(cert);
  j["delta"] = to_string(r.delta);
  j["bound"] = static_cast<double>(r.bound.to_long_double());
  j["bound_holds"] = r.bound_holds;
  j["exactly_periodic"] = r.exactly_periodic;
  if (r.mode == ArithmeticMode::highprec) j["residual"] = static_cast<double>(r.residual);
  j["warning"] = r.warning;
  if (r.space == Space::sphere) j["lift_doubled"] = r.lift_doubled;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

inline json to_json(const DiscrepancyReport& d) {
  json j;
  j["space"] = to_string(d.space);
  j["cutoff"] = d.cutoff;
  j["value"] = static_cast<double>(d.value);
  if (d.exact) j["exact"] = to_string(*d.exact);
  j["argmax"] = std::to_string(d.argmax[0]) + "," + std::to_string(d.argmax[1]);
  json values = json::object();
  for (const auto& v : d.values) {
    std::string key = std::to_string(v.k[0]) + "," + std::to_string(v.k[1]);
    if (v.exact) values[key] = to_string(*v.exact);
    else values[key] = {{"re", static_cast<double>(v.re)}, {"im", static_cast<double>(v.im)}};
  }
  j["values"] = std::move(values);
  return j;
}

inline json to_json(const RegistryValidation& v) {
  json j;
  j["ok"] = v.ok();
  j["spine_free"] = v.spine_free;
  j["distinct_periods"] = v.distinct_periods;
  j["disjoint"] = v.disjoint;
  j["genuine_orbits"] = v.genuine_orbits;
  j["density"] = {{"status", "not finitely verifiable"},
                  {"sample_grid", v.sample_grid},
                  {"sampled_mesh", to_string(v.sampled_mesh)}};
  j["violations"] = v.violations;
  return j;
}

inline json to_json(const BlowupRegistry& reg) {
  json orbits = json::array();
  for (const auto& o : reg.orbits)
    orbits.push_back({{"base", to_string(o.base.rep())}, {"period", o.period}, {"lift", to_string(o.lift)}});
  return orbits;
}

inline json to_json(const CarpetCount& c) {
  json j;
  j["n"] = c.n;
  j["mode"] = to_string(c.mode);
  j["per_sphere"] = to_string(c.per_sphere);
  j["per_carpet"] = to_string(c.per_carpet);
  j["removed"] = to_string(c.removed);
  j["added"] = to_string(c.added);
  j["within_square_bound"] = c.within_square_bound;
  j["above_sphere"] = c.above_sphere;
  j["above_growth"] = c.above_growth;
  json orbits = json::array();
  for (const auto& o : c.contributions)
    orbits.push_back({{"orbit", o.orbit},
                      {"period", o.period},
                      {"lift", to_string(o.lift)},
                      {"circle_period", o.circle_period},
                      {"removed", o.removed},
                      {"contributes", o.contributes},
                      {"dynamics_agree", o.dynamics_agree}});
  j["certificate"] = std::move(orbits);
  return j;
}

// ---- provenance and atomic output

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string library_versions() {
  return std::string("toralab ") + version + "; boost " + std::to_string(BOOST_VERSION / 100000) + "." +
         std::to_string(BOOST_VERSION / 100 % 1000) + "." + std::to_string(BOOST_VERSION % 100) + "; nlohmann_json " +
         std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
         std::to_string(NLOHMANN_JSON_VERSION_PATCH);
}

/// Writes content to path through a temporary file and a rename, so readers
/// never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace toralab
