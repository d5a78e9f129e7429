#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "optokerr/cli/config.hpp"

namespace optokerr::cli {

struct Options {
  int threads = 1;
  std::string out;  // empty: use config [output] path, else stdout
  std::optional<double> nu_min;  // printed units
  std::optional<double> nu_max;
  std::optional<int> nu_count;
};

const std::vector<std::string>& command_names();

// Runs one subcommand and returns the process exit code: 0 success, 2 config,
// 3 no physical / stable state, 4 I/O. Diagnostics go to err.
int run_command(const std::string& name, const std::string& config_path, const Options& opt,
                std::ostream& out, std::ostream& err);

// Same, with an already-parsed config; writes CSV to the destinations chosen
// by opt/config, or to `out`.
int run_command(const std::string& name, RunConfig cfg, const Options& opt, std::ostream& out,
                std::ostream& err);

}  // namespace optokerr::cli
