#pragma once

#include <string>
#include <vector>

namespace optokerr {

namespace constants {
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kEpsilon0 = 8.8541878128e-12;    // F/m
}  // namespace constants

// All rates are angular frequencies (rad/s). Position q is dimensionless,
// q = x / x0.
struct SystemParams {
  double omega_m = 1.0;
  double kappa0 = 1.0;
  double kappa_L = 0.0;  // kappa_1(q) = kappa_L * q
  double gamma_m = 0.0;
  double g_L = 0.0;
  double g_NL = 0.0;
  double delta = 0.0;
  double E = 0.0;
  double n0 = 0.0;
};

struct UnitScale {
  double x0 = 1.0;  // m
};

struct Violation {
  std::string field;
  std::string message;
};

std::vector<Violation> validate(const SystemParams& p);
// Throws Error(kInvalidParams) listing every violation.
void require_valid(const SystemParams& p);

// x0 * G_dim. G_dim in rad/s per metre.
double dimensionless_coupling(double G_dim, const UnitScale& scale);

// T0 such that 1/(exp(hbar omega_m / kB T0) - 1) = n0. n0 = 0 throws
// kZeroTemperatureBath.
double bath_temperature(double n0, double omega_m);
double bath_occupation(double T0, double omega_m);

// Figure-style inputs: E and delta in units of omega_m; couplings, gamma_m
// and kappa_L in units of kappa0.
struct RatioParams {
  double omega_m = 1.0;  // rad/s
  double kappa0 = 1.0;   // rad/s
  double kappa_L = 0.0;
  double gamma_m = 0.0;
  double g_L = 0.0;
  double g_NL = 0.0;
  double delta = 0.0;
  double E = 0.0;
  double n0 = 0.0;
};

SystemParams from_ratios(const RatioParams& r);

// Membrane set used throughout the cooling figures: omega_m/2pi = 356.6 kHz,
// kappa/2pi = 77 kHz, gamma_m = 0.01 kappa, n0 = 1, delta = omega_m. Drive
// and couplings are left at zero.
SystemParams membrane_baseline();

}  // namespace optokerr
