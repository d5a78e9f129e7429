#include "optokerr/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optokerr/error.hpp"
#include "optokerr/numerics.hpp"

namespace optokerr {

namespace {

double residual_of(const Eigen::Matrix4d& a, const Eigen::Matrix4d& v, const Eigen::Matrix4d& d) {
  const double dn = d.norm();
  const Eigen::Matrix4d r = a * v + v * a.transpose() + d;
  return dn > 0 ? r.norm() / dn : r.norm();
}

}  // namespace

DiffusionMatrix diffusion_matrix(const SteadyState& s, const SystemParams& p) {
  if (s.kappa1_qs < 0.0) {
    throw Error(ErrorCode::kUnphysicalAbsorption, "kappa_1(q_s) < 0");
  }
  DiffusionMatrix m;
  auto& d = m.d;
  d(1, 1) = p.gamma_m * (2.0 * p.n0 + 1.0);
  d(2, 2) = s.kappa_qs;
  d(3, 3) = s.kappa_qs;
  if (s.kappa1_qs > 0.0) {
    d(1, 1) += s.Gamma * s.Gamma / (4.0 * s.kappa1_qs);
    d(1, 3) = s.Gamma / 2.0;
    d(3, 1) = s.Gamma / 2.0;
  }
  return m;
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d) {
  const StabilityVerdict v = classify(a);
  if (!v.is_stable) {
    throw Error(ErrorCode::kNoStationaryState, "drift matrix is not strictly stable");
  }
  // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V), column-major vec.
  Eigen::Matrix<double, 16, 16> k = Eigen::Matrix<double, 16, 16>::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int r = 0; r < 4; ++r) {
        k(4 * j + i, 4 * j + r) += a.a(i, r);  // (A V)_{ij}
        k(4 * j + i, 4 * r + i) += a.a(j, r);  // (V A^T)_{ij}
      }
    }
  }
  const Eigen::MatrixXd km = k;
  Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(d.d.data(), 16);
  Eigen::VectorXd x = numerics::linear_solve(km, rhs);
  CovarianceMatrix out;
  out.v = Eigen::Map<const Eigen::Matrix4d>(x.data());
  out.v = 0.5 * (out.v + out.v.transpose()).eval();
  out.residual = residual_of(a.a, out.v, d.d);
  if (out.residual > 1e-10) {
    // One step of iterative refinement.
    const Eigen::Matrix4d r = a.a * out.v + out.v * a.a.transpose() + d.d;
    Eigen::VectorXd rr = -Eigen::Map<const Eigen::VectorXd>(r.data(), 16);
    Eigen::VectorXd dx = numerics::linear_solve(km, rr);
    Eigen::Matrix4d dv = Eigen::Map<const Eigen::Matrix4d>(dx.data());
    Eigen::Matrix4d v2 = out.v + 0.5 * (dv + dv.transpose());
    const double res2 = residual_of(a.a, v2, d.d);
    if (res2 < out.residual) {
      out.v = v2;
      out.residual = res2;
    }
  }
  out.source = CovarianceSource::kDirect;
  return out;
}

CovarianceMatrix integrate_covariance(const DriftMatrix& a, const DiffusionMatrix& d,
                                      double horizon, const numerics::ToleranceSet& tol) {
  if (!(horizon > 0.0)) {
    const StabilityVerdict v = classify(a);
    if (!v.is_stable) {
      throw Error(ErrorCode::kNoStationaryState, "drift matrix is not strictly stable");
    }
    double slowest = std::numeric_limits<double>::infinity();
    for (double r : v.decay_rates) slowest = std::min(slowest, r);
    horizon = 25.0 / slowest;
  }
  const Eigen::MatrixXd am = a.a;
  const Eigen::MatrixXd dm = d.d;
  const Eigen::MatrixXd v0 = Eigen::MatrixXd::Zero(4, 4);
  CovarianceMatrix out;
  out.v = numerics::integrate_lyapunov_ode(am, dm, v0, horizon, tol);
  out.source = CovarianceSource::kIntegrated;
  out.residual = residual_of(a.a, out.v, d.d);
  return out;
}

PhononNumber phonon_number(const CovarianceMatrix& v) {
  PhononNumber out;
  out.n = 0.5 * (v.v(0, 0) + v.v(1, 1)) - 0.5;
  if (out.n < 0.0 && out.n >= -1e-9) {
    out.n = 0.0;
    out.clipped = true;
  }
  return out;
}

double phonon_number_of(const SteadyState& s, const SystemParams& p) {
  const DriftMatrix a = drift_matrix(s, p);
  const DiffusionMatrix d = diffusion_matrix(s, p);
  return phonon_number(solve_lyapunov(a, d)).n;
}

}  // namespace optokerr
