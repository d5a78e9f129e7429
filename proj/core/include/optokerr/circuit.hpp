#pragma once

namespace optokerr {

// How the exchange energy converts to a rate: J = E_J / hbar (rad/s) or the
// alternative reading E_J / h taken as rad/s.
enum class ExchangeConvention { kHbar, kPlanck };

struct CircuitParams {
  double g = 0.0;         // rad/s
  double gamma = 0.0;     // rad/s
  double omega_C = 0.0;   // rad/s
  double omega_c0 = 0.0;  // rad/s
  double G_L_dim = 0.0;   // rad/s per metre, omega_c(x) = omega_c0 - G_L x
  double omega_x = 0.0;   // rad/s
  double C0 = 0.0;        // F
  double d0 = 0.0;        // m
  double C_sigma1 = 0.0;  // F
  double C_sigma2 = 0.0;  // F
  double x_zp = 0.0;      // m
  bool cavity_moves = true;  // false freezes omega_c at omega_c0
  ExchangeConvention exchange = ExchangeConvention::kHbar;
};

// Throws kInvalidParams on non-positive entries (G_L_dim may have any sign).
void require_valid(const CircuitParams& p);

struct GeneralKerrInputs {
  double g1 = 0.0;
  double g2 = 0.0;
  double gamma_43 = 0.0;
  double gamma_21 = 0.0;
  double gamma_23 = 0.0;
  double Delta = 0.0;
  double delta = 0.0;
  double omega_C = 0.0;
};

// (g1/omega_C)^2 > 0.01: the weak-coupling expansion behind the formula is
// doubtful.
bool kerr_validity_warning(const GeneralKerrInputs& in);

// C_m(x) = C0 d0 / (d0 - x). x >= d0 throws kPlateCollision.
double mutual_capacitance(double x, const CircuitParams& p);
double mutual_capacitance_slope(double x, const CircuitParams& p);

double exchange_coupling(double x, const CircuitParams& p);
double exchange_coupling_slope(double x, const CircuitParams& p);

double cavity_frequency(double x, const CircuitParams& p);

// Delta(x) = sqrt(J^2 + 4 omega_x^2) + J - omega_c(x)
double coresonant_detuning(double x, const CircuitParams& p);
double coresonant_detuning_slope(double x, const CircuitParams& p);

// Four-level expression with unequal rates, transcribed term by term; note
// its first denominator is gamma_43^2 + Delta.
double kerr_general(const GeneralKerrInputs& in);

// eta(Delta) = Delta g^4/omega_C^2 [1/(gamma^2+Delta^2) - 1/(4 gamma^2+Delta^2)]
double kerr_of_detuning(double Delta, double g, double gamma, double omega_C);
double kerr_of_detuning_slope(double Delta, double g, double gamma, double omega_C);

double kerr_simplified(double x, const CircuitParams& p);
// G_NL = -d eta/dx at x = 0, by the chain rule through Delta, J and C_m.
double nonlinear_coupling_dim(const CircuitParams& p);
// Detuning a stationary molecule needs to cancel eta0: -Delta(0).
double cancellation_detuning(const CircuitParams& p);

struct OpticalKerrEstimate {
  double eta0 = 0.0;      // rad/s
  double G_NL_dim = 0.0;  // -d eta/dx = 3 eta0 / L0, rad/s per metre
  double deta_dx = 0.0;   // d eta/dx = -3 eta0 / L0
};

// eta(x) = 3 hbar omega(x)^2 Re chi3 / (2 eps0 V_c(x)) with
// omega(x) = omega0 (1 - x/L0) and V_c(x) = V_c0 (1 + x/L0).
double optical_kerr(double x, double chi3_real, double omega0, double V_c0, double L0);
OpticalKerrEstimate optical_cavity_estimate(double chi3_real, double omega0, double V_c0, double L0);

struct SystemCouplings {
  double g_L = 0.0;
  double g_NL = 0.0;
};

SystemCouplings to_system_couplings(const CircuitParams& p, double G_L_dim, double G_NL_dim);

// How bare (non-"/2pi") rates in the published example are read.
enum class BareFrequency { kAngular, kOrdinary };

// Published electromechanical example: g/2pi = 300 kappa with kappa = 1 MHz,
// gamma = 10 MHz, omega_C/2pi = 0.9478 GHz, omega_c/2pi = 7.54 GHz,
// G_L/2pi = 49 MHz/nm, C0 = 940 fF, d0 = 50 nm, C_sigma = 4 fF, x_zp = 4.1 fm.
CircuitParams reference_circuit(double omega_x_hz, BareFrequency bare = BareFrequency::kAngular,
                               ExchangeConvention exchange = ExchangeConvention::kHbar);

struct CircuitSummary {
  double omega_x = 0.0;
  double J0 = 0.0;
  double Delta0 = 0.0;
  double eta0 = 0.0;
  double G_NL_dim = 0.0;
  double g_L = 0.0;
  double g_NL = 0.0;
  double cancellation = 0.0;
};

CircuitSummary summarize(const CircuitParams& p);

}  // namespace optokerr
