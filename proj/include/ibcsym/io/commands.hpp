#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ibcsym/io/config.hpp"

namespace ibcsym::io {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,
  exit_numerical = 2,
  exit_verification = 3,
};

struct DispatchOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;       // overrides [run] seed
  std::vector<std::string> lattice_checks;  // overrides [lattice] checks
};

// Runs the configured command, writing artifacts into out_dir and
// diagnostics to err. Returns one of ExitCode.
int dispatch(const RunConfig& config, const DispatchOptions& options, std::ostream& err);

// Reads the file, parses and dispatches.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const DispatchOptions& options, std::ostream& err);

}  // namespace ibcsym::io
