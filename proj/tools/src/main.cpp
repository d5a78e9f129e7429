#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "optokerr/cli/commands.hpp"
#include "optokerr/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Steady states, cooling and noise spectra of optomechanical systems with linear "
               "and position-modulated Kerr coupling"};
  app.set_version_flag("--version", optokerr::kVersion);
  app.require_subcommand(1);

  std::string config;
  optokerr::cli::Options opt;
  opt.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  double nu_min = 0.0, nu_max = 0.0;
  int nu_count = 0;

  const std::map<std::string, std::string> about = {
      {"steady", "all steady states with stability and phonon number"},
      {"cooling-map", "phonon number over a 1D or 2D parameter grid"},
      {"hysteresis", "up and down drive ramps with jump points"},
      {"spectrum", "position noise spectrum of the first stable state"},
      {"spectrum-map", "spectra over a swept parameter"},
      {"optimal-cooling", "drive that minimises the phonon number, per grid point"},
      {"circuit", "Kerr coefficient and couplings of the two-box circuit"}};

  for (const auto& name : optokerr::cli::command_names()) {
    const auto it = about.find(name);
    CLI::App* sub = app.add_subcommand(name, it == about.end() ? "" : it->second);
    sub->add_option("--config", config, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output CSV path (default: [output] path or stdout)");
    sub->add_option("--threads", opt.threads, "maximum worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--nu-min", nu_min, "spectrum grid start, config frequency units");
    sub->add_option("--nu-max", nu_max, "spectrum grid end, config frequency units");
    sub->add_option("--nu-count", nu_count, "spectrum grid points")->check(CLI::Range(3, 10000000));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--nu-min")) opt.nu_min = nu_min;
  if (chosen->count("--nu-max")) opt.nu_max = nu_max;
  if (chosen->count("--nu-count")) opt.nu_count = nu_count;
  return optokerr::cli::run_command(chosen->get_name(), config, opt, std::cout, std::cerr);
}
