#pragma once

#include <Eigen/Dense>

#include "optokerr/dynamics.hpp"
#include "optokerr/model.hpp"
#include "optokerr/steady_state.hpp"

namespace optokerr {

struct DiffusionMatrix {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
};

enum class CovarianceSource { kDirect, kIntegrated };

struct CovarianceMatrix {
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  CovarianceSource source = CovarianceSource::kDirect;
  // ||A V + V A^T + D||_F / ||D||_F
  double residual = 0.0;
};

// d = diag(0, gamma_m (2 n0 + 1) + Gamma^2 / (4 kappa_1), kappa, kappa) with
// d[1][3] = d[3][1] = Gamma / 2. Throws kUnphysicalAbsorption if kappa_1 < 0.
DiffusionMatrix diffusion_matrix(const SteadyState& s, const SystemParams& p);

// Solves A V + V A^T = -D through the vectorised 16x16 system. Throws
// kNoStationaryState unless A is strictly stable.
CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d);

// Integrates V' = A V + V A^T + D from V = 0. A non-positive horizon picks
// 25 slowest decay times.
CovarianceMatrix integrate_covariance(const DriftMatrix& a, const DiffusionMatrix& d,
                                      double horizon = 0.0,
                                      const numerics::ToleranceSet& tol = {});

struct PhononNumber {
  double n = 0.0;
  bool clipped = false;  // tiny negative value raised to zero
};

// n = (V11 + V22)/2 - 1/2.
PhononNumber phonon_number(const CovarianceMatrix& v);

// enumerate -> drift -> diffusion -> Lyapunov -> n for one stable state.
double phonon_number_of(const SteadyState& s, const SystemParams& p);

}  // namespace optokerr
