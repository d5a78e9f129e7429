#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optokerr/circuit.hpp"
#include "optokerr/model.hpp"
#include "optokerr/sweep.hpp"

namespace optokerr::cli {

enum class Units { kRatio, kAbsolute };

struct CircuitConfig {
  CircuitParams base;  // omega_x overwritten per row
  std::vector<double> omega_x_hz;
  BareFrequency bare = BareFrequency::kAngular;
};

// Everything is resolved to absolute units on load; `units` only controls
// how values are echoed and printed.
struct RunConfig {
  Units units = Units::kRatio;
  bool has_system = false;
  SystemParams system;
  std::optional<Axis> axis1;
  std::optional<Axis> axis2;
  double E_min = 0.0;
  double E_max = 0.0;
  bool has_E_range = false;
  int coarse = 64;
  double nu_min = 0.0;
  double nu_max = 0.0;
  int nu_count = 2001;
  std::optional<CircuitConfig> circuit;
  std::string output_path;
};

// INI text. Throws Error(kConfig) with the offending key.
RunConfig parse_config(const std::string& text);
// Throws kIo if the file can't be read.
RunConfig load_config(const std::string& path);

// Factor turning an absolute value of `p` into the printed unit.
double display_unit(const RunConfig& c, SweepParam p);
std::string display_name(const RunConfig& c, SweepParam p);
// Frequency axis unit (omega_m in ratio mode, rad/s otherwise).
double nu_unit(const RunConfig& c);

}  // namespace optokerr::cli
