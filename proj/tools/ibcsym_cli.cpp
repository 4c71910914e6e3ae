#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ibcsym/io/commands.hpp"
#include "ibcsym/io/output.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Particle-creation models: symmetry checks, ground-state fields, jump processes"};
  app.set_version_flag("--version", std::string(ibcsym::io::version));
  std::string command;
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  app.add_option("command", command, "symmetry | field | streamlines | simulate | lattice | potential | boundary")
      ->required()
      ->check(CLI::IsMember(ibcsym::io::commands));
  app.add_option("--config", config, "configuration file")->required();
  app.add_option("--out", out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides [run] seed)");
  app.add_option("--check", checks, "lattice checks to run (hermitian, gauge, T, ground, reversal, bell)")
      ->delimiter(',');
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ibcsym::io::exit_config;
  }
  ibcsym::io::DispatchOptions opts;
  opts.out_dir = out;
  if (seed_opt->count() > 0) opts.seed = seed;
  opts.lattice_checks = checks;
  return ibcsym::io::run_command(command, config, opts, std::cerr);
}
