#include "optokerr/model.hpp"

#include <cmath>

#include "optokerr/error.hpp"

namespace optokerr {

std::vector<Violation> validate(const SystemParams& p) {
  std::vector<Violation> out;
  auto check = [&out](bool ok, const char* field, const char* msg) {
    if (!ok) out.push_back({field, msg});
  };
  auto finite = [](double v) { return std::isfinite(v); };
  check(finite(p.omega_m) && p.omega_m > 0.0, "omega_m", "must be finite and > 0");
  check(finite(p.kappa0) && p.kappa0 > 0.0, "kappa0", "must be finite and > 0");
  check(finite(p.kappa_L), "kappa_L", "must be finite");
  check(finite(p.gamma_m) && p.gamma_m >= 0.0, "gamma_m", "must be finite and >= 0");
  check(finite(p.g_L), "g_L", "must be finite");
  check(finite(p.g_NL), "g_NL", "must be finite");
  check(finite(p.delta), "delta", "must be finite");
  check(finite(p.E) && p.E >= 0.0, "E", "must be finite and >= 0");
  check(finite(p.n0) && p.n0 >= 0.0, "n0", "must be finite and >= 0");
  return out;
}

void require_valid(const SystemParams& p) {
  const auto v = validate(p);
  if (v.empty()) return;
  std::string msg;
  for (const auto& x : v) {
    if (!msg.empty()) msg += "; ";
    msg += x.field + " " + x.message;
  }
  throw Error(ErrorCode::kInvalidParams, msg);
}

double dimensionless_coupling(double G_dim, const UnitScale& scale) {
  if (!(scale.x0 > 0.0)) throw Error(ErrorCode::kInvalidParams, "x0 must be > 0");
  return scale.x0 * G_dim;
}

double bath_temperature(double n0, double omega_m) {
  if (n0 == 0.0) throw Error(ErrorCode::kZeroTemperatureBath, "n0 = 0");
  if (!(n0 > 0.0) || !(omega_m > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "bath_temperature needs n0 > 0, omega_m > 0");
  }
  return constants::kHbar * omega_m / (constants::kBoltzmann * std::log1p(1.0 / n0));
}

double bath_occupation(double T0, double omega_m) {
  if (T0 == 0.0) return 0.0;
  return 1.0 / std::expm1(constants::kHbar * omega_m / (constants::kBoltzmann * T0));
}

SystemParams from_ratios(const RatioParams& r) {
  SystemParams p;
  p.omega_m = r.omega_m;
  p.kappa0 = r.kappa0;
  p.kappa_L = r.kappa_L * r.kappa0;
  p.gamma_m = r.gamma_m * r.kappa0;
  p.g_L = r.g_L * r.kappa0;
  p.g_NL = r.g_NL * r.kappa0;
  p.delta = r.delta * r.omega_m;
  p.E = r.E * r.omega_m;
  p.n0 = r.n0;
  return p;
}

SystemParams membrane_baseline() {
  SystemParams p;
  p.omega_m = constants::kTwoPi * 356.6e3;
  p.kappa0 = constants::kTwoPi * 77e3;
  p.gamma_m = 0.01 * p.kappa0;
  p.n0 = 1.0;
  p.delta = p.omega_m;
  return p;
}

}  // namespace optokerr
