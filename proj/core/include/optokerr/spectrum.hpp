#pragma once

#include <span>
#include <vector>

#include "optokerr/model.hpp"
#include "optokerr/steady_state.hpp"

namespace optokerr {

struct Susceptibility {
  double chi_eff_sq = 0.0;
  double omega_eff_sq = 0.0;  // may be negative far from resonance
  double omega_eff = 0.0;     // sqrt(max(omega_eff_sq, 0))
  double gamma_eff = 0.0;     // gamma_m/omega_m plus coupling corrections
};

struct SpectrumPoint {
  double nu = 0.0;
  double s_total = 0.0;
  double s_thermal = 0.0;
  double s_rp = 0.0;
  double s_abs = 0.0;
  double chi_eff_sq = 0.0;
  double omega_eff = 0.0;
  double gamma_eff = 0.0;
};

struct Peak {
  double nu = 0.0;
  double s = 0.0;
};

// Thermal part for a bath of temperature T0 (K). T0 = 0 uses coth -> sign(nu).
double thermal_spectrum(double nu, const SystemParams& p, double T0);
// Same, with the bath set by p.n0.
double thermal_spectrum(double nu, const SystemParams& p);

double radiation_pressure_spectrum(double nu, const SteadyState& s);
double absorption_spectrum(double nu, const SteadyState& s);
Susceptibility effective_susceptibility(double nu, const SteadyState& s, const SystemParams& p);

SpectrumPoint spectrum_point(double nu, const SteadyState& s, const SystemParams& p);
std::vector<SpectrumPoint> spectrum_series(std::span<const double> nu, const SteadyState& s,
                                           const SystemParams& p);

// count points evenly spaced on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int count);
// Default peak-study grid: [0.2, 1.8] omega_m with 2001 points.
std::vector<double> default_nu_grid(double omega_m);

// Strict 3-point local maxima with parabolic refinement, ascending in nu.
std::vector<Peak> find_peaks(std::span<const double> nu, std::span<const double> s);
std::vector<Peak> find_peaks(const std::vector<SpectrumPoint>& series);

}  // namespace optokerr
