#include "optokerr/circuit.hpp"

#include <cmath>

#include "optokerr/error.hpp"
#include "optokerr/model.hpp"

namespace optokerr {

namespace {

using namespace constants;

double exchange_prefactor(const CircuitParams& p) {
  const double h = p.exchange == ExchangeConvention::kHbar ? kHbar : kTwoPi * kHbar;
  return kElementaryCharge * kElementaryCharge / (2.0 * h);
}

void check_gap(double x, const CircuitParams& p) {
  if (!(x < p.d0)) throw Error(ErrorCode::kPlateCollision, "x >= d0");
}

}  // namespace

void require_valid(const CircuitParams& p) {
  const bool ok = p.g > 0 && p.gamma > 0 && p.omega_C > 0 && p.omega_c0 > 0 && p.omega_x > 0 &&
                  p.C0 > 0 && p.d0 > 0 && p.C_sigma1 > 0 && p.C_sigma2 > 0 && p.x_zp > 0 &&
                  std::isfinite(p.G_L_dim);
  if (!ok) throw Error(ErrorCode::kInvalidParams, "circuit parameters must be positive");
}

bool kerr_validity_warning(const GeneralKerrInputs& in) {
  const double r = in.g1 / in.omega_C;
  return r * r > 0.01;
}

double mutual_capacitance(double x, const CircuitParams& p) {
  check_gap(x, p);
  return p.C0 * p.d0 / (p.d0 - x);
}

double mutual_capacitance_slope(double x, const CircuitParams& p) {
  check_gap(x, p);
  const double gap = p.d0 - x;
  return p.C0 * p.d0 / (gap * gap);
}

double exchange_coupling(double x, const CircuitParams& p) {
  const double c = mutual_capacitance(x, p);
  const double k1 = p.C_sigma1 + p.C_sigma2;
  const double k2 = p.C_sigma1 * p.C_sigma2;
  return exchange_prefactor(p) * c / (k1 * c + k2);
}

double exchange_coupling_slope(double x, const CircuitParams& p) {
  const double c = mutual_capacitance(x, p);
  const double k1 = p.C_sigma1 + p.C_sigma2;
  const double k2 = p.C_sigma1 * p.C_sigma2;
  const double den = k1 * c + k2;
  return exchange_prefactor(p) * k2 / (den * den) * mutual_capacitance_slope(x, p);
}

double cavity_frequency(double x, const CircuitParams& p) {
  return p.cavity_moves ? p.omega_c0 - p.G_L_dim * x : p.omega_c0;
}

double coresonant_detuning(double x, const CircuitParams& p) {
  const double j = exchange_coupling(x, p);
  return std::hypot(j, 2.0 * p.omega_x) + j - cavity_frequency(x, p);
}

double coresonant_detuning_slope(double x, const CircuitParams& p) {
  const double j = exchange_coupling(x, p);
  const double dj = exchange_coupling_slope(x, p);
  const double dwc = p.cavity_moves ? -p.G_L_dim : 0.0;
  return dj * (j / std::hypot(j, 2.0 * p.omega_x) + 1.0) - dwc;
}

double kerr_general(const GeneralKerrInputs& in) {
  const double r = in.g1 / in.omega_C;
  const double s = in.gamma_21 + in.gamma_23;
  return r * r *
         (in.g2 * in.g2 * in.Delta / (in.gamma_43 * in.gamma_43 + in.Delta) -
          in.g1 * in.g1 * in.delta / (s * s + in.delta * in.delta));
}

// The bracket equals 3 gamma^2 / ((gamma^2+D^2)(4 gamma^2+D^2)); the product
// form avoids cancellation when |D| >> gamma.
double kerr_of_detuning(double Delta, double g, double gamma, double omega_C) {
  const double k = g * g * g * g / (omega_C * omega_C);
  const double g2 = gamma * gamma;
  const double d2 = Delta * Delta;
  return k * 3.0 * g2 * Delta / ((g2 + d2) * (4.0 * g2 + d2));
}

double kerr_of_detuning_slope(double Delta, double g, double gamma, double omega_C) {
  const double k = g * g * g * g / (omega_C * omega_C);
  const double g2 = gamma * gamma;
  const double d2 = Delta * Delta;
  const double a = g2 + d2;
  const double b = 4.0 * g2 + d2;
  return k * 3.0 * g2 * (a * b - 2.0 * d2 * (a + b)) / (a * a * b * b);
}

double kerr_simplified(double x, const CircuitParams& p) {
  return kerr_of_detuning(coresonant_detuning(x, p), p.g, p.gamma, p.omega_C);
}

double nonlinear_coupling_dim(const CircuitParams& p) {
  require_valid(p);
  const double d = coresonant_detuning(0.0, p);
  return -kerr_of_detuning_slope(d, p.g, p.gamma, p.omega_C) * coresonant_detuning_slope(0.0, p);
}

double cancellation_detuning(const CircuitParams& p) { return -coresonant_detuning(0.0, p); }

double optical_kerr(double x, double chi3_real, double omega0, double V_c0, double L0) {
  const double w = omega0 - (omega0 / L0) * x;
  const double v = (L0 + x) * V_c0 / L0;
  return 3.0 * kHbar * w * w * chi3_real / (2.0 * kEpsilon0 * v);
}

OpticalKerrEstimate optical_cavity_estimate(double chi3_real, double omega0, double V_c0, double L0) {
  if (!(L0 > 0.0) || !(V_c0 > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "L0 and V_c0 must be > 0");
  }
  OpticalKerrEstimate out;
  out.eta0 = optical_kerr(0.0, chi3_real, omega0, V_c0, L0);
  out.deta_dx = -3.0 * out.eta0 / L0;
  out.G_NL_dim = -out.deta_dx;
  return out;
}

SystemCouplings to_system_couplings(const CircuitParams& p, double G_L_dim, double G_NL_dim) {
  if (!(p.x_zp > 0.0)) throw Error(ErrorCode::kInvalidParams, "x_zp must be > 0");
  return {p.x_zp * G_L_dim, p.x_zp * G_NL_dim};
}

CircuitParams reference_circuit(double omega_x_hz, BareFrequency bare, ExchangeConvention exchange) {
  const double bare_scale = bare == BareFrequency::kAngular ? 1.0 : kTwoPi;
  const double kappa = 1e6 * bare_scale;
  CircuitParams p;
  p.g = kTwoPi * 300.0 * kappa;
  p.gamma = 10e6 * bare_scale;
  p.omega_C = kTwoPi * 0.9478e9;
  p.omega_c0 = kTwoPi * 7.54e9;
  p.G_L_dim = kTwoPi * 49e6 / 1e-9;
  p.omega_x = kTwoPi * omega_x_hz;
  p.C0 = 940e-15;
  p.d0 = 50e-9;
  p.C_sigma1 = 4e-15;
  p.C_sigma2 = 4e-15;
  p.x_zp = 4.1e-15;
  p.exchange = exchange;
  return p;
}

CircuitSummary summarize(const CircuitParams& p) {
  require_valid(p);
  CircuitSummary s;
  s.omega_x = p.omega_x;
  s.J0 = exchange_coupling(0.0, p);
  s.Delta0 = coresonant_detuning(0.0, p);
  s.eta0 = kerr_simplified(0.0, p);
  s.G_NL_dim = nonlinear_coupling_dim(p);
  const SystemCouplings c = to_system_couplings(p, p.G_L_dim, s.G_NL_dim);
  s.g_L = c.g_L;
  s.g_NL = c.g_NL;
  s.cancellation = cancellation_detuning(p);
  return s;
}

}  // namespace optokerr
