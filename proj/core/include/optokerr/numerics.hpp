#pragma once

// Small dense kernels shared by the physics modules. Physics code goes
// through these instead of touching Eigen decompositions directly.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace optokerr::numerics {

struct ToleranceSet {
  double root_polish_rel = 1e-10;
  double eig_rel = 1e-9;
  double lyap_residual_rel = 1e-8;
  double ode_rel = 1e-10;
  double ode_abs = 1e-12;

  // Throws Error(kInvalidParams) unless every field lies in (0, 1e-2).
  void validate() const;
};

// c[k] multiplies x^k throughout.
struct PolyRoots {
  std::vector<std::complex<double>> roots;
  // |P(z)| / sum_k |c_k||z|^k after polishing.
  std::vector<double> residuals;
};

// All roots of the trimmed polynomial. Throws kUnderdetermined for the zero
// polynomial. Roots are returned sorted by (real, imag).
PolyRoots poly_roots(std::span<const double> c, const ToleranceSet& tol = {});

long double poly_eval(std::span<const double> c, long double x);
// P'(x).
long double poly_deriv(std::span<const double> c, long double x);
// sum_k |c_k x^k|, the natural scale for residuals.
long double poly_abs_sum(std::span<const double> c, long double x);
std::complex<long double> poly_eval(std::span<const double> c, std::complex<long double> z);

std::array<std::complex<double>, 4> dense_eigen(const Eigen::Matrix4d& a);
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a);

// Solves m x = rhs with full pivoting; throws kNoStationaryState when m is
// numerically singular.
Eigen::VectorXd linear_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs);

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;

struct OdeStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
};

// Dormand-Prince 5(4) with standard step control.
Eigen::VectorXd integrate_adaptive(const OdeRhs& f, Eigen::VectorXd y, double t0, double t1,
                                   const ToleranceSet& tol = {}, OdeStats* stats = nullptr);
// Classic fixed-step RK4.
Eigen::VectorXd integrate_rk4(const OdeRhs& f, Eigen::VectorXd y, double t0, double t1,
                              std::int64_t steps);

// u' = A u from u0 over [0, t].
Eigen::VectorXd integrate_linear_ode(const Eigen::MatrixXd& a, const Eigen::VectorXd& u0,
                                     double t, const ToleranceSet& tol = {});
// V' = A V + V A^T + D from v0 over [0, t].
Eigen::MatrixXd integrate_lyapunov_ode(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                       const Eigen::MatrixXd& v0, double t,
                                       const ToleranceSet& tol = {});

}  // namespace optokerr::numerics
