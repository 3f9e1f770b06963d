#include "oracles.hpp"

#include "toralab/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace toralab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out, err;
};

Outcome run_cli(const std::string& command, ExperimentConfig cfg) {
  std::ostringstream out, err;
  int status = run(command, std::move(cfg), out, err);
  return {status, out.str(), err.str()};
}

// Drops the provenance line of a CSV.
std::string csv_body(const std::string& text) {
  EXPECT_EQ(text.rfind("# ", 0), 0u);
  return text.substr(text.find('\n') + 1);
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "toralab_cli_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  fs::remove(p);
  return p;
}

}  // namespace

TEST(CliCount, ExampleTable) {
  ExperimentConfig cfg;
  cfg.n_range = std::array<unsigned long, 2>{1, 5};
  Outcome o = run_cli("count", cfg);
  ASSERT_EQ(o.status, exit_ok) << o.err;
  EXPECT_EQ(csv_body(o.out),
            "n,per,per_minus,per_sphere,enumerated\n1,1,5,3,true\n2,5,9,7,true\n3,16,20,18,true\n4,45,49,47,true\n"
            "5,121,125,123,true\n");
}

TEST(CliCount, AgreesWithTraceRecurrence) {
  ExperimentConfig cfg;
  cfg.matrix = "3 2 1 1";
  cfg.n_range = std::array<unsigned long, 2>{1, 15};
  Outcome o = run_cli("count", cfg);
  ASSERT_EQ(o.status, exit_ok) << o.err;
  std::istringstream rows(csv_body(o.out));
  std::string line;
  std::getline(rows, line);
  for (unsigned long n = 1; std::getline(rows, line); ++n) {
    Integer t = oracle::trace_by_recurrence(parse_matrix("3 2 1 1"), n);
    EXPECT_EQ(line.substr(0, line.rfind(',')),
              std::to_string(n) + "," + Integer(t - 2).str() + "," + Integer(t + 2).str() + "," + t.str());
  }
}

TEST(CliUsage, UnknownCommandAndMissingSeed) {
  Outcome o = run_cli("bogus", {});
  EXPECT_EQ(o.status, exit_usage);
  EXPECT_NE(o.err.find("usage:"), std::string::npos);
  EXPECT_TRUE(o.out.empty());

  ExperimentConfig cfg;
  Outcome h = run_cli("homogeneity", cfg);
  EXPECT_EQ(h.status, exit_usage);
  EXPECT_NE(h.err.find("--seed"), std::string::npos);
  EXPECT_NE(exit_usage, exit_failure);
}

TEST(CliShadow, ZeroNoiseGivesZeroEpsilon) {
  ExperimentConfig cfg;
  cfg.n = 7;
  cfg.delta = Rational(0);
  cfg.seed = 11;
  Outcome o = run_cli("shadow", cfg);
  ASSERT_EQ(o.status, exit_ok) << o.err;
  json j = json::parse(o.out);
  EXPECT_EQ(j["epsilon"], "0");
  EXPECT_EQ(j["period"], 7);
  EXPECT_TRUE(j["exactly_periodic"].get<bool>());
  EXPECT_EQ(j["certificate"].size(), 7u);
  EXPECT_TRUE(j.contains("z0"));
  EXPECT_EQ(j["provenance"]["config_hash"], config_hash([&] {
              ExperimentConfig c = cfg;
              c.command = "shadow";
              return c;
            }()));
}

TEST(CliShadow, FromPseudoOrbitFile) {
  TorusPoint x0 = seeded_periodic_point(oracle::cat, 9, 4);
  TorusPseudoOrbit po = make_pseudo_orbit(oracle::cat, x0, 9, Rational(1, 1000), 4);
  ASSERT_TRUE(po.periodic);
  fs::path file = scratch("orbit.txt");
  {
    std::ostringstream os;
    write_pseudo_orbit(os, po);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "torus 9 periodic");
    write_file_atomic(file, os.str());
    std::istringstream back(os.str());
    EXPECT_EQ(read_pseudo_orbit(back).torus.points, po.points);
  }
  ExperimentConfig cfg;
  cfg.input = file.string();
  Outcome o = run_cli("shadow", cfg);
  ASSERT_EQ(o.status, exit_ok) << o.err;
  json j = json::parse(o.out);
  ShadowResult direct = shadow_periodic(oracle::cat, po);
  EXPECT_EQ(j["z0"], to_string(*direct.z0));
  EXPECT_EQ(j["epsilon"], to_string(*direct.epsilon));
  EXPECT_TRUE(j["bound_holds"].get<bool>());

  std::istringstream bad("torus 3 periodic\n0 0\n1/2 0\n");
  EXPECT_THROW(read_pseudo_orbit(bad), domain_error);
}

TEST(CliConfig, RoundTripsLosslessly) {
  ExperimentConfig cfg;
  cfg.command = "carpet";
  cfg.matrix = "3 2 1 1";
  cfg.space = "sphere";
  cfg.mode = "highprec";
  cfg.n = 4;
  cfg.n_range = std::array<unsigned long, 2>{2, 9};
  cfg.delta = Rational(1, 3);
  cfg.epsilon = parse_rational("1e-3");
  cfg.K = 5;
  cfg.seed = 18446744073709551615ULL;
  cfg.registry = "reg.txt";
  cfg.input = "in.txt";
  cfg.out = "out.json";
  cfg.atoms = "atoms.csv";
  cfg.kind = "antipodal";
  cfg.starred = true;
  cfg.gap = 14;
  cfg.length = 3;
  cfg.count = 50;
  cfg.r = 10;
  cfg.scheme = "periodic";
  cfg.carpet_mode = "doubled";
  ExperimentConfig back = parse_config_text(config_text(cfg));
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(config_text(back), config_text(cfg));
  EXPECT_EQ(parse_config_text(config_text(ExperimentConfig{})), ExperimentConfig{});
  EXPECT_THROW(parse_config_text("{\"colour\": 1}"), config_error);
  EXPECT_THROW(parse_config_text("not json"), config_error);
}

TEST(CliConfig, HashIgnoresOutputLocation) {
  ExperimentConfig a;
  a.command = "count";
  ExperimentConfig b = a;
  b.out = "elsewhere.csv";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.n = 3;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(CliConfig, NRangeParsing) {
  EXPECT_EQ(parse_n_range("4..10"), (std::array<unsigned long, 2>{4, 10}));
  EXPECT_EQ(parse_n_range("2:5"), (std::array<unsigned long, 2>{2, 5}));
  EXPECT_EQ(parse_n_range("7"), (std::array<unsigned long, 2>{7, 7}));
  EXPECT_THROW(parse_n_range("5..2"), config_error);
  EXPECT_THROW(parse_n_range("0..2"), config_error);
  EXPECT_THROW(parse_n_range("a..b"), config_error);
}

TEST(CliOutput, FilesAreAtomicAndDeterministic) {
  fs::path first = scratch("h1.csv"), second = scratch("h2.csv");
  ExperimentConfig cfg;
  cfg.seed = 9;
  cfg.count = 6;
  cfg.out = first.string();
  ASSERT_EQ(run_cli("homogeneity", cfg).status, exit_ok);
  cfg.out = second.string();
  ASSERT_EQ(run_cli("homogeneity", cfg).status, exit_ok);
  EXPECT_EQ(read_file(first), read_file(second));
  EXPECT_FALSE(fs::exists(fs::path(first.string() + ".tmp")));
  EXPECT_EQ(csv_body(read_file(first)).substr(0, 32), "center,x,y,n,mass,normalized,emp");
}

TEST(CliOutput, FailuresLeaveNoFile) {
  fs::path target = scratch("never.json");
  ExperimentConfig cfg;
  cfg.out = target.string();
  cfg.registry = "/nonexistent/registry.txt";
  cfg.n = 3;
  Outcome o = run_cli("carpet", cfg);
  EXPECT_EQ(o.status, exit_failure);
  EXPECT_FALSE(o.err.empty());
  EXPECT_FALSE(fs::exists(target));

  ExperimentConfig bad;
  bad.out = target.string();
  bad.matrix = "1 1 1";
  bad.n_range = std::array<unsigned long, 2>{1, 2};
  EXPECT_EQ(run_cli("count", bad).status, exit_usage);
  EXPECT_FALSE(fs::exists(target));
}

TEST(CliCarpet, ReportsCountsAndRejectsSpines) {
  fs::path reg = scratch("reg.txt");
  write_file_atomic(reg, "# one blown orbit\n2/5 4/5\n");
  ExperimentConfig cfg;
  cfg.registry = reg.string();
  cfg.n_range = std::array<unsigned long, 2>{1, 3};
  Outcome o = run_cli("carpet", cfg);
  ASSERT_EQ(o.status, exit_ok) << o.err;
  json j = json::parse(o.out);
  EXPECT_TRUE(j["validation"]["ok"].get<bool>());
  EXPECT_EQ(j["validation"]["density"]["status"], "not finitely verifiable");
  EXPECT_EQ(j["registry"][0]["lift"], "antipodal");
  ASSERT_EQ(j["counts"].size(), 3u);
  EXPECT_EQ(j["counts"][0]["per_carpet"], "6");  // 3 - 1 + 4
  EXPECT_TRUE(j["counts"][2]["within_square_bound"].get<bool>());

  write_file_atomic(reg, "0 0\n");
  Outcome rejected = run_cli("carpet", cfg);
  EXPECT_EQ(rejected.status, exit_failure);
  EXPECT_NE(rejected.err.find("spine"), std::string::npos);
}

TEST(CliMeasure, DiscrepancyKeyedByFrequency) {
  ExperimentConfig cfg;
  cfg.n = 5;
  Outcome o = run_cli("measure", cfg);
  ASSERT_EQ(o.status, exit_ok) << o.err;
  json j = json::parse(o.out);
  EXPECT_EQ(j["discrepancy"]["exact"], "0");
  EXPECT_EQ(j["discrepancy"]["values"].size(), 48u);
  EXPECT_EQ(j["discrepancy"]["values"]["1,0"], "0");
  EXPECT_EQ(j["total_mass"], "1");
}

TEST(CliEntropy, GrowthTable) {
  ExperimentConfig cfg;
  cfg.scheme = "growth";
  cfg.n_range = std::array<unsigned long, 2>{1, 20};
  Outcome o = run_cli("entropy", cfg);
  ASSERT_EQ(o.status, exit_ok) << o.err;
  std::string body = csv_body(o.out);
  EXPECT_EQ(body.substr(0, body.find('\n')), "n,count,log_rate,lower_holds,upper_holds");
  EXPECT_EQ(body.find("false"), std::string::npos);
  cfg.scheme = "grid:x";
  cfg.delta = Rational(1, 10);
  EXPECT_EQ(run_cli("entropy", cfg).status, exit_usage);
}
