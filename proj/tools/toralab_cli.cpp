#include "toralab/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace toralab;

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments with hyperbolic toral automorphisms and their sphere quotients"};
  app.set_help_flag("-h,--help", "print this help and exit");
  app.footer(usage_text());

  std::string command;
  std::string config_path, save_config;
  std::string matrix, space, mode, kind, scheme, carpet_mode, n_range, delta, epsilon;
  std::optional<unsigned long> n, gap, length, count, r;
  std::optional<long> K;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> registry, input, out, atoms;
  bool starred = false;

  app.add_option("command", command, "one of count, enumerate, shadow, spec, measure, entropy, carpet, homogeneity");
  app.add_option("--config", config_path, "JSON config file; flags given on the command line override it");
  app.add_option("--save-config", save_config, "write the effective config to this file and exit");
  app.add_option("--matrix", matrix, "matrix as \"a b c d\" (row-major), default the cat map \"2 1 1 1\"");
  app.add_option("--space", space, "torus or sphere");
  app.add_option("--mode", mode, "exact or highprec (shadowing arithmetic)");
  app.add_option("--n", n, "level / orbit length");
  app.add_option("--n-range", n_range, "level range a..b");
  app.add_option("--delta", delta, "pseudo-orbit noise or separation scale (rational or decimal)");
  app.add_option("--epsilon", epsilon, "Bowen-ball radius");
  app.add_option("--K", K, "frequency cutoff for discrepancies");
  app.add_option("--seed", seed, "seed for randomized experiments");
  app.add_option("--registry", registry, "blow-up registry file");
  app.add_option("--input", input, "pseudo-orbit file for shadow");
  app.add_option("--out", out, "output file (written atomically); stdout if absent");
  app.add_option("--atoms", atoms, "measure: also write the atoms CSV here");
  app.add_option("--kind", kind, "enumerate: periodic or antipodal");
  app.add_flag("--starred", starred, "drop the spines from periodic measures");
  app.add_option("--gap", gap, "spec: transition gap L");
  app.add_option("--length", length, "spec: segment length");
  app.add_option("--count", count, "homogeneity: number of centers");
  app.add_option("--r", r, "homogeneity: level of the reference measure");
  app.add_option("--scheme", scheme, "entropy: grid:D, periodic or growth");
  app.add_option("--carpet-mode", carpet_mode, "carpet: single (n_k) or doubled (2 n_k on antipodal lifts) circle periods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config_text(read_file(config_path));
    if (!command.empty()) cfg.command = command;
    if (!matrix.empty()) cfg.matrix = matrix;
    if (!space.empty()) cfg.space = space;
    if (!mode.empty()) cfg.mode = mode;
    if (!kind.empty()) cfg.kind = kind;
    if (!scheme.empty()) cfg.scheme = scheme;
    if (!carpet_mode.empty()) cfg.carpet_mode = carpet_mode;
    if (n) cfg.n = n;
    if (!n_range.empty()) cfg.n_range = parse_n_range(n_range);
    if (!delta.empty()) cfg.delta = parse_rational(delta);
    if (!epsilon.empty()) cfg.epsilon = parse_rational(epsilon);
    if (K) cfg.K = *K;
    if (seed) cfg.seed = seed;
    if (registry) cfg.registry = registry;
    if (input) cfg.input = input;
    if (out) cfg.out = out;
    if (atoms) cfg.atoms = atoms;
    if (starred) cfg.starred = true;
    if (gap) cfg.gap = gap;
    if (length) cfg.length = length;
    if (count) cfg.count = count;
    if (r) cfg.r = r;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }

  if (!save_config.empty()) {
    try {
      write_file_atomic(save_config, config_text(cfg));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return exit_failure;
    }
    return exit_ok;
  }
  if (cfg.command.empty()) {
    std::cerr << usage_text();
    return exit_usage;
  }
  return run(cfg.command, cfg, std::cout, std::cerr);
}
