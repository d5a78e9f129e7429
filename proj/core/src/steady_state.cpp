#include "optokerr/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "optokerr/dynamics.hpp"
#include "optokerr/error.hpp"

namespace optokerr {

namespace {

using ld = long double;

constexpr ld kLdEps = std::numeric_limits<ld>::epsilon();

ld second_deriv(std::span<const double> c, ld x) {
  ld acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 2;) {
    acc = acc * x + static_cast<ld>(k) * static_cast<ld>(k - 1) * c[k];
  }
  return acc;
}

int sign_of(ld v) { return (v > 0) - (v < 0); }

// Bisection in extended precision on a sign-changing bracket.
ld bisect(std::span<const double> c, ld a, ld b) {
  ld fa = numerics::poly_eval(c, a);
  for (int it = 0; it < 200; ++it) {
    const ld m = 0.5L * (a + b);
    if (m <= a || m >= b) break;
    const ld fm = numerics::poly_eval(c, m);
    if (fm == 0.0L) return m;
    if (sign_of(fm) == sign_of(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (b - a <= 4.0L * kLdEps * std::fabs(m)) break;
  }
  return 0.5L * (a + b);
}

// A complex pair x +- iy close to the real axis may be a pair of real roots
// that the eigen-solver pushed off the axis. Decide by looking at the sign of
// P at its local extremum near x.
std::vector<PhotonRoot> rescue_pair(std::span<const double> c, ld x, ld y) {
  ld m = x;
  for (int it = 0; it < 50; ++it) {
    const ld d2 = second_deriv(c, m);
    if (d2 == 0.0L) break;
    const ld step = numerics::poly_deriv(c, m) / d2;
    const ld next = std::clamp(m - step, x - 2.0L * y, x + 2.0L * y);
    if (next == m) break;
    m = next;
  }
  const ld w = 4.0L * y + 16.0L * kLdEps * std::fabs(m);
  const ld pm = numerics::poly_eval(c, m);
  const ld noise = 64.0L * kLdEps * numerics::poly_abs_sum(c, m);
  const ld pl = numerics::poly_eval(c, m - w);
  const ld pr = numerics::poly_eval(c, m + w);
  std::vector<PhotonRoot> out;
  if (std::fabs(pm) <= noise) {
    const double r = static_cast<double>(m);
    out.push_back({r, true, 0.0});
    out.push_back({r, true, 0.0});
    return out;
  }
  if (sign_of(pm) != sign_of(pl) && sign_of(pm) != sign_of(pr)) {
    out.push_back({static_cast<double>(bisect(c, m - w, m)), false, 0.0});
    out.push_back({static_cast<double>(bisect(c, m, m + w)), false, 0.0});
  }
  return out;
}

}  // namespace

long double PolynomialCoefficients::evaluate(long double n) const {
  return numerics::poly_eval(std::span<const double>(c), n);
}

long double PolynomialCoefficients::magnitude(long double n) const {
  return numerics::poly_abs_sum(std::span<const double>(c), n);
}

PolynomialCoefficients build_polynomial(const SystemParams& p) {
  require_valid(p);
  const double W = p.omega_m;
  const double W2 = W * W;
  const double gL = p.g_L;
  const double gN = p.g_NL;
  const double kL = p.kappa_L;
  const double k0 = p.kappa0;
  const double D = p.delta;
  PolynomialCoefficients pc;
  auto& c = pc.c;
  c[7] = 4.0 * gN * gN * gN * gN / W2;
  c[6] = 12.0 * gN * gN * gN * gL / W2;
  c[5] = gN * gN * (13.0 * gL * gL + kL * kL) / W2;
  c[4] = gN * (6.0 * gL * gL * gL + 2.0 * gL * kL * kL - 4.0 * gN * D * W) / W2;
  c[3] = gL * gL * (gL * gL + kL * kL) / W2 - 6.0 * gN * gL * D / W + 2.0 * gN * k0 * kL / W;
  c[2] = 2.0 * gL * (k0 * kL - D * gL) / W;
  c[1] = D * D + k0 * k0;
  c[0] = -p.E * p.E;
  return pc;
}

std::vector<PhotonRoot> photon_number_roots(const PolynomialCoefficients& coeffs,
                                            const numerics::ToleranceSet& tol) {
  const auto& c = coeffs.c;
  if (std::all_of(c.begin() + 1, c.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::kUnderdetermined, "photon-number polynomial has no n-dependence");
  }
  if (c[0] == 0.0) return {PhotonRoot{0.0, false, 0.0}};

  const std::span<const double> cs(c);
  const numerics::PolyRoots pr = numerics::poly_roots(cs, tol);

  std::vector<PhotonRoot> roots;
  for (const auto& z : pr.roots) {
    const double x = z.real();
    const double y = z.imag();
    if (!(x > 0.0)) continue;
    if (y == 0.0) {
      roots.push_back({x, false, 0.0});
    } else if (y > 0.0 && y <= 1e-3 * x) {
      for (const auto& r : rescue_pair(cs, x, y)) roots.push_back(r);
    }
  }

  // Final polish: safeguarded Newton inside a bracket that excludes
  // neighbouring roots.
  std::sort(roots.begin(), roots.end(), [](const PhotonRoot& a, const PhotonRoot& b) { return a.n < b.n; });
  for (std::size_t i = 0; i < roots.size(); ++i) {
    ld x = roots[i].n;
    ld scale = numerics::poly_abs_sum(cs, x);
    ld res = std::fabs(numerics::poly_eval(cs, x));
    for (int it = 0; it < 20 && res > tol.root_polish_rel * 1e-3L * scale; ++it) {
      const ld d = numerics::poly_deriv(cs, x);
      if (d == 0.0L) break;
      const ld next = x - numerics::poly_eval(cs, x) / d;
      const ld lo = i > 0 ? 0.5L * (static_cast<ld>(roots[i - 1].n) + x) : 0.5L * x;
      const ld hi = i + 1 < roots.size() ? 0.5L * (static_cast<ld>(roots[i + 1].n) + x) : 2.0L * x;
      if (!(next > lo && next < hi)) break;
      const ld r = std::fabs(numerics::poly_eval(cs, next));
      if (!(r < res)) break;
      x = next;
      res = r;
    }
    scale = numerics::poly_abs_sum(cs, x);
    roots[i].n = static_cast<double>(x);
    roots[i].residual = scale > 0 ? static_cast<double>(res / scale) : 0.0;
  }
  std::sort(roots.begin(), roots.end(), [](const PhotonRoot& a, const PhotonRoot& b) { return a.n < b.n; });
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    if (roots[i + 1].n - roots[i].n < 1e-6 * roots[i + 1].n) {
      roots[i].marginal = true;
      roots[i + 1].marginal = true;
    }
  }
  return roots;
}

SteadyState assemble_state(double n_s, const SystemParams& p) {
  if (!(n_s >= 0.0)) throw Error(ErrorCode::kInvalidParams, "n_s must be >= 0");
  const ld n = n_s;
  const ld q = (static_cast<ld>(p.g_L) + static_cast<ld>(p.g_NL) * n) * n / p.omega_m;
  const ld kappa = static_cast<ld>(p.kappa0) + static_cast<ld>(p.kappa_L) * q;
  if (!(kappa > 0.0L)) {
    throw Error(ErrorCode::kUnphysicalLoss, "kappa0 + kappa_L q_s <= 0");
  }
  const ld dq = static_cast<ld>(p.delta) - static_cast<ld>(p.g_L) * q;
  const ld kerr = static_cast<ld>(p.g_NL) * q * n;
  const ld d1 = dq - 2.0L * kerr;
  const ld d2 = dq - 6.0L * kerr;
  const ld denom = kappa * kappa + d1 * d1;
  const ld E = p.E;

  SteadyState s;
  s.n_s = n_s;
  s.q_s = static_cast<double>(q);
  s.p_s = 0.0;
  s.alpha_s = {static_cast<double>(E * kappa / denom), static_cast<double>(-E * d1 / denom)};
  s.kappa_qs = static_cast<double>(kappa);
  s.kappa1_qs = static_cast<double>(static_cast<ld>(p.kappa_L) * q);
  s.delta_qs = static_cast<double>(dq);
  const ld amp = std::sqrt(2.0L * n);
  s.G = static_cast<double>(amp * (static_cast<ld>(p.g_L) + 2.0L * static_cast<ld>(p.g_NL) * n));
  s.Gamma = static_cast<double>(amp * static_cast<ld>(p.kappa_L));
  s.delta_small = static_cast<double>(d1);
  s.delta_second = static_cast<double>(d2);
  s.delta_prime_sq = static_cast<double>(d1 * d2);
  const ld mod2 = E * E / denom;
  s.self_consistency_residual =
      n > 0 ? static_cast<double>(std::fabs(mod2 - n) / n) : static_cast<double>(mod2);
  return s;
}

namespace {

// n (kappa(q)^2 + delta_small^2) - E^2 and its n-derivative, unexpanded. Near
// g_L + g_NL n = 0 the expanded coefficients lose digits that this form keeps.
std::pair<ld, ld> fixed_point_map(ld n, const SystemParams& p) {
  const ld gl = p.g_L, gnl = p.g_NL, w = p.omega_m;
  const ld q = (gl + gnl * n) * n / w;
  const ld dq = (gl + 2.0L * gnl * n) / w;
  const ld kap = static_cast<ld>(p.kappa0) + static_cast<ld>(p.kappa_L) * q;
  const ld dkap = static_cast<ld>(p.kappa_L) * dq;
  const ld det = static_cast<ld>(p.delta) - gl * q - 2.0L * gnl * q * n;
  const ld ddet = -gl * dq - 2.0L * gnl * (dq * n + q);
  const ld den = kap * kap + det * det;
  const ld E = p.E;
  return {n * den - E * E, den + n * (2.0L * kap * dkap + 2.0L * det * ddet)};
}

// Newton on the unexpanded map, confined to the midpoints towards the
// neighbouring roots and accepted only while |F| shrinks.
double refine_root(double n0, double lo, double hi, const SystemParams& p) {
  ld x = n0;
  auto [f, d] = fixed_point_map(x, p);
  for (int it = 0; it < 8; ++it) {
    if (d == 0.0L || f == 0.0L) break;
    const ld next = x - f / d;
    if (!(next > lo && next < hi)) break;
    const auto [fn, dn] = fixed_point_map(next, p);
    if (!(std::fabs(fn) < std::fabs(f))) break;
    x = next;
    f = fn;
    d = dn;
  }
  return static_cast<double>(x);
}

}  // namespace

std::vector<SteadyState> enumerate_states(const SystemParams& p, const numerics::ToleranceSet& tol) {
  const PolynomialCoefficients pc = build_polynomial(p);
  std::vector<PhotonRoot> roots = photon_number_roots(pc, tol);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].n == 0.0) continue;
    const double lo = i > 0 ? 0.5 * (roots[i - 1].n + roots[i].n) : 0.5 * roots[i].n;
    const double hi = i + 1 < roots.size() ? 0.5 * (roots[i].n + roots[i + 1].n) : 2.0 * roots[i].n;
    roots[i].n = refine_root(roots[i].n, lo, hi, p);
  }
  std::vector<SteadyState> out;
  for (const PhotonRoot& r : roots) {
    SteadyState s = assemble_state(r.n, p);
    s.marginal = r.marginal;
    s.stability = classify(drift_matrix(s, p));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace optokerr
