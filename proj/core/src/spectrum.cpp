#include "optokerr/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "optokerr/error.hpp"

namespace optokerr {

namespace {

struct Shared {
  double k2;   // kappa^2
  double dp2;  // delta'^2
  double den;
};

Shared shared(double nu, const SteadyState& s) {
  Shared out;
  out.k2 = s.kappa_qs * s.kappa_qs;
  out.dp2 = s.delta_prime_sq;
  const double a = out.k2 - nu * nu + out.dp2;
  out.den = a * a + 4.0 * nu * nu * out.k2;
  return out;
}

// nu (1 + coth(a nu)), with the removable singularity at nu = 0 handled.
double nu_one_plus_coth(double nu, double a) {
  const double x = a * nu;
  if (std::abs(x) < 1e-6) return nu + 1.0 / a + a * nu * nu / 3.0;
  return nu * (1.0 + 1.0 / std::tanh(x));
}

}  // namespace

double thermal_spectrum(double nu, const SystemParams& p, double T0) {
  if (T0 < 0.0) throw Error(ErrorCode::kInvalidParams, "T0 must be >= 0");
  const double pref = p.gamma_m / p.omega_m;
  if (T0 == 0.0) {
    const double sgn = (nu > 0) - (nu < 0);
    return pref * nu * (1.0 + sgn);
  }
  const double a = constants::kHbar / (2.0 * constants::kBoltzmann * T0);
  return pref * nu_one_plus_coth(nu, a);
}

double thermal_spectrum(double nu, const SystemParams& p) {
  const double pref = p.gamma_m / p.omega_m;
  if (p.n0 == 0.0) {
    const double sgn = (nu > 0) - (nu < 0);
    return pref * nu * (1.0 + sgn);
  }
  // hbar nu / 2 kB T0 = nu ln(1 + 1/n0) / (2 omega_m)
  const double a = std::log1p(1.0 / p.n0) / (2.0 * p.omega_m);
  return pref * nu_one_plus_coth(nu, a);
}

double radiation_pressure_spectrum(double nu, const SteadyState& s) {
  const Shared sh = shared(nu, s);
  const double d = s.delta_small;
  return 2.0 * s.G * s.G * s.kappa_qs * (sh.k2 + nu * nu + d * d) / sh.den;
}

double absorption_spectrum(double nu, const SteadyState& s) {
  if (s.kappa1_qs == 0.0) {
    if (s.Gamma != 0.0 && s.n_s > 0.0 && s.q_s != 0.0) {
      throw Error(ErrorCode::kUnphysicalAbsorption, "Gamma != 0 with kappa_1 = 0");
    }
    return 0.0;
  }
  if (s.kappa1_qs < 0.0) throw Error(ErrorCode::kUnphysicalAbsorption, "kappa_1(q_s) < 0");
  const Shared sh = shared(nu, s);
  return s.Gamma * s.Gamma / (2.0 * s.kappa1_qs) +
         2.0 * s.G * s.Gamma * s.delta_small * (sh.k2 - nu * nu + sh.dp2) / sh.den;
}

Susceptibility effective_susceptibility(double nu, const SteadyState& s, const SystemParams& p) {
  const Shared sh = shared(nu, s);
  const double W = p.omega_m;
  const double G = s.G;
  const double Gm = s.Gamma;
  const double k = s.kappa_qs;
  const double d = s.delta_small;
  Susceptibility out;
  out.omega_eff_sq = W * W - W * d * G * G * (sh.k2 - nu * nu + sh.dp2) / sh.den +
                     W * G * k * Gm * (sh.k2 + nu * nu + sh.dp2) / sh.den;
  out.gamma_eff = p.gamma_m / W + (2.0 * d * G * G * k - G * Gm * (sh.k2 + nu * nu - sh.dp2)) / sh.den;
  const double re = (out.omega_eff_sq - nu * nu) / W;
  const double im = -nu * out.gamma_eff;
  out.chi_eff_sq = 1.0 / (re * re + im * im);
  out.omega_eff = std::sqrt(std::max(out.omega_eff_sq, 0.0));
  return out;
}

SpectrumPoint spectrum_point(double nu, const SteadyState& s, const SystemParams& p) {
  SpectrumPoint pt;
  pt.nu = nu;
  pt.s_thermal = thermal_spectrum(nu, p);
  pt.s_rp = radiation_pressure_spectrum(nu, s);
  pt.s_abs = absorption_spectrum(nu, s);
  const Susceptibility chi = effective_susceptibility(nu, s, p);
  pt.chi_eff_sq = chi.chi_eff_sq;
  pt.omega_eff = chi.omega_eff;
  pt.gamma_eff = chi.gamma_eff;
  pt.s_total = pt.chi_eff_sq * (pt.s_thermal + pt.s_rp + pt.s_abs);
  return pt;
}

std::vector<SpectrumPoint> spectrum_series(std::span<const double> nu, const SteadyState& s,
                                           const SystemParams& p) {
  std::vector<SpectrumPoint> out;
  out.reserve(nu.size());
  for (double v : nu) out.push_back(spectrum_point(v, s, p));
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw Error(ErrorCode::kInvalidParams, "grid needs at least one point");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return g;
}

std::vector<double> default_nu_grid(double omega_m) {
  return linear_grid(0.2 * omega_m, 1.8 * omega_m, 2001);
}

std::vector<Peak> find_peaks(std::span<const double> nu, std::span<const double> s) {
  std::vector<Peak> out;
  if (nu.size() < 3 || s.size() != nu.size()) return out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!(s[i] > s[i - 1] && s[i] > s[i + 1])) continue;
    // Parabola through the three samples (uniform or not).
    const double x0 = nu[i - 1], x1 = nu[i], x2 = nu[i + 1];
    const double y0 = s[i - 1], y1 = s[i], y2 = s[i + 1];
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double a = (d1 - d0) / (x2 - x0);
    Peak pk{x1, y1};
    if (a < 0.0) {
      const double b = d0 - a * (x0 + x1);
      const double xv = -b / (2.0 * a);
      if (xv > x0 && xv < x2) {
        pk.nu = xv;
        pk.s = y1 + (xv - x1) * (d0 + a * (xv - x0));  // Newton form
        pk.s = std::max(pk.s, y1);
      }
    }
    out.push_back(pk);
  }
  return out;
}

std::vector<Peak> find_peaks(const std::vector<SpectrumPoint>& series) {
  std::vector<double> nu, s;
  nu.reserve(series.size());
  s.reserve(series.size());
  for (const auto& p : series) {
    nu.push_back(p.nu);
    s.push_back(p.s_total);
  }
  return find_peaks(nu, s);
}

}  // namespace optokerr
