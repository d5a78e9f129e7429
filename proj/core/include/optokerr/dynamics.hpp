#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "optokerr/model.hpp"
#include "optokerr/stability.hpp"
#include "optokerr/steady_state.hpp"

namespace optokerr {

// Basis order (dq, dp, dX, dY).
struct DriftMatrix {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
};

// A = [[0, W, 0, 0], [-W, -gamma_m, G, 0], [-Gamma, 0, -kappa, d1],
//      [G, 0, -d2, -kappa]] with d1, d2 the Kerr-shifted detunings.
DriftMatrix drift_matrix(const SteadyState& s, const SystemParams& p);

// eps = 1e-9 max(|a01|, |a22|), i.e. relative to max(omega_m, kappa).
double stability_epsilon(const DriftMatrix& a);

StabilityVerdict classify(const DriftMatrix& a);

// Integrates u' = A u from a handful of random unit vectors over `horizon`
// seconds and reports whether every trajectory ended shorter than it began.
bool verify_by_integration(const DriftMatrix& a, double horizon, std::uint64_t seed = 7);

}  // namespace optokerr
