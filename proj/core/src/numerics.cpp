#include "optokerr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optokerr/error.hpp"

namespace optokerr::numerics {

namespace {

using cld = std::complex<long double>;

// Parlett-Reinsch balancing with radix 2 (as in EISPACK balanc). Similarity
// transform, so eigenvalues are unchanged but conditioning improves.
void balance(Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / 2.0;
      while (c < g) {
        f *= 2.0;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c > g) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

std::complex<long double> poly_deriv_c(std::span<const double> c, cld z) {
  cld acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + static_cast<long double>(k) * c[k];
  return acc;
}

long double abs_sum_c(std::span<const double> c, long double r) {
  long double acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * r + std::fabs(static_cast<long double>(c[k]));
  return acc;
}

bool less_complex(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

void ToleranceSet::validate() const {
  for (double v : {root_polish_rel, eig_rel, lyap_residual_rel, ode_rel, ode_abs}) {
    if (!(v > 0.0 && v < 1e-2)) {
      throw Error(ErrorCode::kInvalidParams, "tolerances must lie in (0, 1e-2)");
    }
  }
}

long double poly_eval(std::span<const double> c, long double x) {
  long double acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

long double poly_deriv(std::span<const double> c, long double x) {
  long double acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<long double>(k) * c[k];
  return acc;
}

long double poly_abs_sum(std::span<const double> c, long double x) {
  return abs_sum_c(c, std::fabs(x));
}

std::complex<long double> poly_eval(std::span<const double> c, std::complex<long double> z) {
  cld acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + static_cast<long double>(c[k]);
  return acc;
}

PolyRoots poly_roots(std::span<const double> c_in, const ToleranceSet& tol) {
  tol.validate();
  std::size_t hi = c_in.size();
  while (hi > 0 && c_in[hi - 1] == 0.0) --hi;
  if (hi == 0) throw Error(ErrorCode::kUnderdetermined, "zero polynomial");
  std::size_t lo = 0;
  while (c_in[lo] == 0.0) ++lo;

  PolyRoots out;
  for (std::size_t k = 0; k < lo; ++k) {
    out.roots.emplace_back(0.0, 0.0);
    out.residuals.push_back(0.0);
  }
  const std::span<const double> c = c_in.subspan(0, hi);
  const std::span<const double> reduced = c.subspan(lo);
  const int d = static_cast<int>(reduced.size()) - 1;
  if (d <= 0) return out;

  // Substitute x = s u so that the end coefficients have equal magnitude.
  const double s = std::pow(std::abs(reduced[0]) / std::abs(reduced[d]), 1.0 / d);
  std::vector<double> b(d + 1);
  double bmax = 0.0;
  for (int k = 0; k <= d; ++k) {
    b[k] = reduced[k] * std::pow(s, k);
    bmax = std::max(bmax, std::abs(b[k]));
  }
  for (double& v : b) v /= bmax;

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -b[i] / b[d];
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kUnderdetermined, "companion eigen-solver failed");
  }

  std::vector<cld> z(d);
  for (int i = 0; i < d; ++i) {
    const std::complex<double> e = es.eigenvalues()[i];
    z[i] = cld(static_cast<long double>(e.real()) * s, static_cast<long double>(e.imag()) * s);
    if (e.imag() == 0.0) z[i].imag(0.0L);
  }

  // Newton polishing in extended precision on the original coefficients.
  // A step is refused if it would carry a root halfway toward a neighbour,
  // which keeps tight pairs from collapsing onto one root.
  for (int i = 0; i < d; ++i) {
    long double gap = std::numeric_limits<long double>::infinity();
    for (int j = 0; j < d; ++j) {
      if (j != i) gap = std::min(gap, std::abs(z[i] - z[j]));
    }
    cld zi = z[i];
    long double res = std::abs(poly_eval(c, zi));
    for (int it = 0; it < 60; ++it) {
      const cld dp = poly_deriv_c(c, zi);
      if (dp == cld(0.0L)) break;
      const cld step = poly_eval(c, zi) / dp;
      if (std::abs(step) > 0.5L * gap) break;
      const cld trial = zi - step;
      const long double r = std::abs(poly_eval(c, trial));
      if (!(r <= res)) break;
      zi = trial;
      res = r;
      if (std::abs(step) <= 1e-19L * std::abs(zi)) break;
    }
    z[i] = zi;
  }

  for (int i = 0; i < d; ++i) {
    std::complex<double> r(static_cast<double>(z[i].real()), static_cast<double>(z[i].imag()));
    const long double scale = abs_sum_c(c, std::abs(z[i]));
    const long double res = std::abs(poly_eval(c, z[i]));
    out.roots.push_back(r);
    out.residuals.push_back(scale > 0 ? static_cast<double>(res / scale) : 0.0);
  }

  std::vector<std::size_t> idx(out.roots.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return less_complex(out.roots[a], out.roots[b]);
  });
  PolyRoots sorted;
  for (std::size_t i : idx) {
    sorted.roots.push_back(out.roots[i]);
    sorted.residuals.push_back(out.residuals[i]);
  }
  return sorted;
}

std::array<std::complex<double>, 4> dense_eigen(const Eigen::Matrix4d& a) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(a, false);
  std::array<std::complex<double>, 4> ev;
  for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(), less_complex);
  return ev;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end(), less_complex);
  return ev;
}

Eigen::VectorXd linear_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kNoStationaryState, "singular linear system");
  }
  return lu.solve(rhs);
}

Eigen::VectorXd integrate_adaptive(const OdeRhs& f, Eigen::VectorXd y, double t0, double t1,
                                   const ToleranceSet& tol, OdeStats* stats) {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  tol.validate();
  if (t1 == t0) return y;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const Eigen::Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n), err(n);

  auto norm = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& y0, const Eigen::VectorXd& y1) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = tol.ode_abs + tol.ode_rel * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const double e = v[i] / sc;
      acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(n));
  };

  double t = t0;
  f(t, y, k1);
  // Initial step guess.
  double h;
  {
    const double d0 = norm(y, y, y);
    const double d1 = norm(k1, y, y);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(t1 - t0));
    yt = y + dir * h0 * k1;
    f(t + dir * h0, yt, k2);
    const double d2 = norm(k2 - k1, y, y) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                : std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min(100.0 * h0, h1);
  }

  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  bool last = false;
  while (!last) {
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;
    yt = y + hs * (a21 * k1);
    f(t + hs / 5.0, yt, k2);
    yt = y + hs * (a31 * k1 + a32 * k2);
    f(t + 0.3 * hs, yt, k3);
    yt = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + 0.8 * hs, yt, k4);
    yt = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + 8.0 * hs / 9.0, yt, k5);
    yt = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + hs, yt, k6);
    ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + hs, ynew, k7);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = norm(err, y, ynew);
    if (!std::isfinite(en)) {
      throw Error(ErrorCode::kInvalidParams, "ODE integration produced non-finite state");
    }
    if (en <= 1.0) {
      t = last ? t1 : t + hs;
      y = ynew;
      k1 = k7;
      ++accepted;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      last = false;
      ++rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      if (h <= 1e-15 * std::max(std::abs(t), std::abs(t1 - t0))) {
        throw Error(ErrorCode::kInvalidParams, "ODE step size underflow");
      }
    }
  }
  if (stats) {
    stats->accepted = accepted;
    stats->rejected = rejected;
  }
  return y;
}

Eigen::VectorXd integrate_rk4(const OdeRhs& f, Eigen::VectorXd y, double t0, double t1,
                              std::int64_t steps) {
  if (steps <= 0) throw Error(ErrorCode::kInvalidParams, "rk4 needs a positive step count");
  const double h = (t1 - t0) / static_cast<double>(steps);
  const Eigen::Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), yt(n);
  for (std::int64_t i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    f(t, y, k1);
    yt = y + 0.5 * h * k1;
    f(t + 0.5 * h, yt, k2);
    yt = y + 0.5 * h * k2;
    f(t + 0.5 * h, yt, k3);
    yt = y + h * k3;
    f(t + h, yt, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

Eigen::VectorXd integrate_linear_ode(const Eigen::MatrixXd& a, const Eigen::VectorXd& u0,
                                     double t, const ToleranceSet& tol) {
  auto rhs = [&a](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy.noalias() = a * y; };
  return integrate_adaptive(rhs, u0, 0.0, t, tol);
}

Eigen::MatrixXd integrate_lyapunov_ode(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                       const Eigen::MatrixXd& v0, double t,
                                       const ToleranceSet& tol) {
  // Long horizons: integrate W' = A W + W A^T + D from 0 and P' = A P from I
  // over a short base interval s, then double with the flow identities
  // W(2s) = W(s) + P(s) W(s) P(s)^T and P(2s) = P(s)^2.
  const Eigen::Index n = a.rows();
  const double rate = std::max(a.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  int doublings = 0;
  while (doublings < 60 && t / std::ldexp(1.0, doublings) * rate > 64.0) ++doublings;
  const double s = t / std::ldexp(1.0, doublings);

  auto rhs = [&a, &d, n](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const Eigen::Map<const Eigen::MatrixXd> w(y.data(), n, n);
    const Eigen::Map<const Eigen::MatrixXd> pm(y.data() + n * n, n, n);
    Eigen::Map<Eigen::MatrixXd> dw(dy.data(), n, n);
    Eigen::Map<Eigen::MatrixXd> dp(dy.data() + n * n, n, n);
    dw.noalias() = a * w;
    dw += dw.transpose().eval();
    dw += d;
    dp.noalias() = a * pm;
  };
  Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * n * n);
  Eigen::Map<Eigen::MatrixXd>(y.data() + n * n, n, n).setIdentity();
  // Doubling turns a step error in P into a decay-rate error scaled by the
  // ratio of fast to slow rates, so the short base run is done much tighter.
  ToleranceSet base = tol;
  if (doublings > 0) {
    base.ode_rel = std::min(tol.ode_rel, 1e-14);
    base.ode_abs = std::min(tol.ode_abs, 1e-16);
  }
  y = integrate_adaptive(rhs, y, 0.0, s, base);
  Eigen::MatrixXd w = Eigen::Map<Eigen::MatrixXd>(y.data(), n, n);
  Eigen::MatrixXd pm = Eigen::Map<Eigen::MatrixXd>(y.data() + n * n, n, n);
  w = 0.5 * (w + w.transpose());
  for (int k = 0; k < doublings; ++k) {
    w += pm * w * pm.transpose();
    w = 0.5 * (w + w.transpose());
    pm = pm * pm;
  }
  Eigen::MatrixXd v = w + pm * v0 * pm.transpose();
  return 0.5 * (v + v.transpose());
}

}  // namespace optokerr::numerics
