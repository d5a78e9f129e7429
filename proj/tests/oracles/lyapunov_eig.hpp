#pragma once

// A V + V A^T = -D through the eigenbasis of A: with A = U L U^-1,
// X = U^-1 D U^-H solves L X + X L^H = -X_D elementwise.

#include <Eigen/Dense>

namespace oracle {

inline Eigen::MatrixXd lyapunov_eig(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::MatrixXcd u = es.eigenvectors();
  const Eigen::VectorXcd l = es.eigenvalues();
  const Eigen::MatrixXcd ui = u.inverse();
  Eigen::MatrixXcd dt = ui * d.cast<std::complex<double>>() * ui.adjoint();
  const auto n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) dt(i, j) = -dt(i, j) / (l(i) + std::conj(l(j)));
  const Eigen::MatrixXd v = (u * dt * u.adjoint()).real();
  return 0.5 * (v + v.transpose());
}

}  // namespace oracle
