#include "optokerr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "optokerr/error.hpp"
#include "optokerr/numerics.hpp"

namespace optokerr {

const char* to_string(Stability s) {
  switch (s) {
    case Stability::kStable: return "stable";
    case Stability::kMarginal: return "marginal";
    case Stability::kUnstable: return "unstable";
  }
  return "unknown";
}

DriftMatrix drift_matrix(const SteadyState& s, const SystemParams& p) {
  DriftMatrix m;
  auto& a = m.a;
  a(0, 1) = p.omega_m;
  a(1, 0) = -p.omega_m;
  a(1, 1) = -p.gamma_m;
  a(1, 2) = s.G;
  a(2, 0) = -s.Gamma;
  a(2, 2) = -s.kappa_qs;
  a(2, 3) = s.delta_small;
  a(3, 0) = s.G;
  a(3, 2) = -s.delta_second;
  a(3, 3) = -s.kappa_qs;
  return m;
}

double stability_epsilon(const DriftMatrix& a) {
  return 1e-9 * std::max(std::abs(a.a(0, 1)), std::abs(a.a(2, 2)));
}

StabilityVerdict classify(const DriftMatrix& a) {
  StabilityVerdict v;
  v.eigenvalues = numerics::dense_eigen(a.a);
  v.epsilon = stability_epsilon(a);
  v.max_real = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    v.max_real = std::max(v.max_real, v.eigenvalues[i].real());
    v.decay_rates[i] = -v.eigenvalues[i].real();
  }
  if (v.max_real < -v.epsilon) {
    v.kind = Stability::kStable;
  } else if (v.max_real <= v.epsilon) {
    v.kind = Stability::kMarginal;
  } else {
    v.kind = Stability::kUnstable;
  }
  v.is_stable = v.kind == Stability::kStable;

  std::vector<double> f;
  for (const auto& e : v.eigenvalues) {
    const double w = std::abs(e.imag());
    if (w > v.epsilon) f.push_back(w);
  }
  std::sort(f.begin(), f.end());
  for (double w : f) {
    if (v.dressed_frequencies.empty() ||
        w - v.dressed_frequencies.back() > 1e-9 * std::max(w, v.epsilon * 1e9)) {
      v.dressed_frequencies.push_back(w);
    }
  }
  return v;
}

bool verify_by_integration(const DriftMatrix& a, double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::kInvalidParams, "horizon must be > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  numerics::ToleranceSet tol;
  tol.ode_rel = 1e-8;
  tol.ode_abs = 1e-14;
  const Eigen::MatrixXd am = a.a;
  for (int trial = 0; trial < 6; ++trial) {
    Eigen::VectorXd u(4);
    for (int i = 0; i < 4; ++i) u[i] = normal(rng);
    u.normalize();
    const Eigen::VectorXd out = numerics::integrate_linear_ode(am, u, horizon, tol);
    if (!(out.norm() < 1.0)) return false;
  }
  return true;
}

}  // namespace optokerr
