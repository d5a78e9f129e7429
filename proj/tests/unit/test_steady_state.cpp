#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixed_point.hpp"
#include "linear_theory.hpp"
#include "optokerr/error.hpp"
#include "optokerr/steady_state.hpp"
#include "support/draws.hpp"

using namespace optokerr;

namespace {

SystemParams ratio(double gL, double gNL, double delta, double E) {
  SystemParams p = membrane_baseline();
  p.g_L = gL * p.kappa0;
  p.g_NL = gNL * p.kappa0;
  p.delta = delta * p.omega_m;
  p.E = E * p.omega_m;
  return p;
}

int count_roots(const SystemParams& p) {
  return static_cast<int>(photon_number_roots(build_polynomial(p)).size());
}

}  // namespace

TEST(Polynomial, DecoupledHasOnlyC1AndC0) {
  SystemParams p;
  p.omega_m = 2;
  p.kappa0 = 4;
  p.delta = 3;
  p.E = 5;
  const auto c = build_polynomial(p).c;
  EXPECT_EQ(c[0], -25.0);
  EXPECT_EQ(c[1], 25.0);
  for (int k = 2; k < 8; ++k) EXPECT_EQ(c[k], 0.0) << k;
}

TEST(Polynomial, LinearCaseIsTheCubic) {
  SystemParams p;
  p.omega_m = 2;
  p.kappa0 = 0.5;
  p.g_L = 0.7;
  p.delta = 1.5;
  p.E = 3;
  const auto c = build_polynomial(p).c;
  EXPECT_DOUBLE_EQ(c[3], std::pow(0.7, 4) / 4);
  EXPECT_DOUBLE_EQ(c[2], -2 * 0.49 * 1.5 / 2);
  EXPECT_DOUBLE_EQ(c[1], 1.5 * 1.5 + 0.25);
  EXPECT_DOUBLE_EQ(c[0], -9.0);
  for (int k = 4; k < 8; ++k) EXPECT_EQ(c[k], 0.0);
}

TEST(Polynomial, PrintedCoefficients) {
  SystemParams p;
  p.omega_m = 1.7;
  p.kappa0 = 0.9;
  p.kappa_L = 0.2;
  p.g_L = 0.4;
  p.g_NL = -0.03;
  p.delta = 2.5;
  p.E = 1.1;
  const double W = p.omega_m, k0 = p.kappa0, kL = p.kappa_L, gL = p.g_L, gN = p.g_NL,
               D = p.delta;
  const auto c = build_polynomial(p).c;
  EXPECT_DOUBLE_EQ(c[7], 4 * std::pow(gN, 4) / (W * W));
  EXPECT_DOUBLE_EQ(c[6], 12 * std::pow(gN, 3) * gL / (W * W));
  EXPECT_DOUBLE_EQ(c[5], gN * gN * (13 * gL * gL + kL * kL) / (W * W));
  EXPECT_DOUBLE_EQ(c[4], gN * (6 * gL * gL * gL + 2 * gL * kL * kL - 4 * gN * D * W) / (W * W));
  EXPECT_NEAR(c[3],
              gL * gL * (gL * gL + kL * kL) / (W * W) - 6 * gN * gL * D / W + 2 * gN * k0 * kL / W,
              1e-15);
  EXPECT_DOUBLE_EQ(c[2], 2 * gL * (k0 * kL - D * gL) / W);
  EXPECT_DOUBLE_EQ(c[1], D * D + k0 * k0);
  EXPECT_DOUBLE_EQ(c[0], -p.E * p.E);
}

TEST(Polynomial, DriveOnlyEntersC0) {
  SystemParams p = ratio(0.3, 0.02, 1.0, 2.0);
  const auto a = build_polynomial(p).c;
  p.E *= 3.0;
  const auto b = build_polynomial(p).c;
  EXPECT_DOUBLE_EQ(b[0], 9.0 * a[0]);
  for (int k = 1; k < 8; ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(Polynomial, VanishesAtFixedPointOfCoupledEquations) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int t = 0; t < 200 && checked < 50; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    const oracle::Coupled c{p.omega_m, p.kappa0, p.kappa_L, p.g_L, p.g_NL, p.delta, p.E};
    const auto fps = oracle::fixed_points(c, 5, rng, 1e-3, 1e7);
    const auto poly = build_polynomial(p);
    for (double n : fps) {
      const long double v = poly.evaluate(n);
      EXPECT_LE(std::abs(v), 1e-9L * poly.magnitude(n)) << "n = " << n;
      ++checked;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(Roots, DecoupledSingleRoot) {
  SystemParams p;
  p.omega_m = 1;
  p.kappa0 = 4;
  p.delta = 3;
  p.E = 5;
  const auto r = photon_number_roots(build_polynomial(p));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].n, 1.0, 1e-15);
  EXPECT_FALSE(r[0].marginal);
}

TEST(Roots, UndrivenAndUnderdetermined) {
  SystemParams p;
  p.omega_m = 1;
  p.kappa0 = 1;
  const auto r = photon_number_roots(build_polynomial(p));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].n, 0.0);
  PolynomialCoefficients zero;
  zero.c[0] = -1.0;
  try {
    photon_number_roots(zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnderdetermined);
  }
}

TEST(Roots, ResidualBound) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    const auto poly = build_polynomial(p);
    const auto roots = photon_number_roots(poly);
    EXPECT_EQ(roots.size() % 2, 1u);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      EXPECT_GT(roots[i].n, 0.0);
      EXPECT_LE(roots[i].residual, 1e-10);
      if (i) EXPECT_LT(roots[i - 1].n, roots[i].n);
    }
  }
}

TEST(Roots, MatchCubicOracleInLinearCase) {
  std::mt19937_64 rng(8);
  int compared = 0;
  for (int t = 0; t < 500; ++t) {
    const SystemParams p = testing_support::draw_linear(rng);
    const oracle::LinearParams lp{p.omega_m, p.kappa0, p.gamma_m, p.g_L, p.delta, p.E, p.n0};
    const auto want = oracle::photon_numbers(lp);
    const auto got = photon_number_roots(build_polynomial(p));
    // Skip draws sitting on a fold, where the root count itself is ill-posed.
    bool near_fold = false;
    for (const auto& r : got) near_fold |= r.marginal;
    if (near_fold) continue;
    ASSERT_EQ(got.size(), want.size()) << "draw " << t;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_LE(std::abs(got[i].n - want[i]) / want[i], 1e-10) << "draw " << t;
    }
    ++compared;
  }
  EXPECT_GT(compared, 480);
}

TEST(Roots, MultistableWindowHasFiveRoots) {
  // Scan E for the five-root window at (10 kappa, -1e-4 kappa), delta = 50 W.
  int five = 0;
  for (double e = 3.0; e <= 7.5; e += 0.05) {
    if (count_roots(ratio(10, -1e-4, 50, std::pow(10.0, e))) == 5) ++five;
  }
  EXPECT_GT(five, 10);
}

TEST(Roots, KerrTermOpensBistabilityBelowLinearOnset) {
  // Linear cubic: the lower fold of E^2(n) = n((delta - a n)^2 + kappa^2),
  // a = g^2/W, sits at n = delta/a, so three roots need E^2 > delta W kappa^2/g^2.
  const SystemParams lin = ratio(0.1, 0.0, 50, 1.0);
  const double onset = std::sqrt(lin.delta * lin.omega_m) * lin.kappa0 / lin.g_L / lin.omega_m;
  EXPECT_EQ(count_roots(ratio(0.1, 0.0, 50, onset * 0.999)), 1);
  EXPECT_EQ(count_roots(ratio(0.1, 0.0, 50, onset * 1.001)), 3);
  int three = 0;
  for (double e = 0.0; e <= 3.0; e += 0.02) {
    const double E = std::pow(10.0, e);
    if (count_roots(ratio(0.1, 0.01, 50, E)) != 3) continue;
    if (E < onset) {
      ++three;
      EXPECT_EQ(count_roots(ratio(0.1, 0.0, 50, E)), 1) << E;
    }
  }
  EXPECT_GT(three, 10);
}

TEST(Assemble, SmallPhotonNumberLimit) {
  SystemParams p = ratio(0.3, 0.02, 1.0, 2.0);
  const SteadyState s = assemble_state(1e-30, p);
  EXPECT_LE(std::abs(s.q_s), 1e-25);
  const std::complex<double> want = p.E / std::complex<double>(p.kappa0, p.delta);
  EXPECT_LE(std::abs(s.alpha_s - want) / std::abs(want), 1e-14);
}

TEST(Assemble, DisplacementArithmetic) {
  SystemParams p;
  p.omega_m = 4;
  p.kappa0 = 1;
  p.g_L = 1;
  p.g_NL = 0.5;
  p.delta = 0.3;
  p.E = 1;
  const SteadyState s = assemble_state(2.0, p);
  EXPECT_DOUBLE_EQ(s.q_s, 1.0);
  EXPECT_EQ(s.p_s, 0.0);
  EXPECT_DOUBLE_EQ(s.delta_qs, 0.3 - 1.0);
  EXPECT_DOUBLE_EQ(s.G, 2.0 * (1 + 2 * 0.5 * 2));
}

TEST(Assemble, DerivedQuantities) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    for (const auto& r : photon_number_roots(build_polynomial(p))) {
      SteadyState s;
      try {
        s = assemble_state(r.n, p);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kUnphysicalLoss);
        continue;
      }
      const double q = (p.g_L + p.g_NL * s.n_s) * s.n_s / p.omega_m;
      EXPECT_LE(std::abs(s.q_s - q), 1e-14 * (std::abs(p.g_L) + std::abs(p.g_NL) * s.n_s) * s.n_s / p.omega_m);
      EXPECT_LE(std::abs(s.kappa_qs - (p.kappa0 + p.kappa_L * s.q_s)),
                1e-14 * (p.kappa0 + std::abs(p.kappa_L * s.q_s)));
      EXPECT_NEAR(s.G, std::sqrt(2 * s.n_s) * (p.g_L + 2 * p.g_NL * s.n_s),
                  1e-12 * std::abs(s.G) + 1e-300);
      EXPECT_NEAR(s.Gamma, std::sqrt(2 * s.n_s) * p.kappa_L, 1e-12 * s.Gamma + 1e-300);
      const double prod = s.delta_small * s.delta_second;
      EXPECT_NEAR(s.delta_prime_sq, prod, 1e-12 * std::abs(prod) + 1e-300);
    }
  }
}

TEST(Enumerate, StatesAreSelfConsistent) {
  // Includes draws where g_L + g_NL n nearly cancels at a root.
  std::mt19937_64 rng(17);
  for (int t = 0; t < 2000; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    for (const auto& s : testing_support::states(p)) {
      EXPECT_LE(std::abs(std::norm(s.alpha_s) - s.n_s) / s.n_s, 1e-10) << t;
      EXPECT_LE(s.self_consistency_residual, 1e-10) << t;
    }
  }
}

TEST(Assemble, NegativeTotalLossRejected) {
  SystemParams p;
  p.omega_m = 1;
  p.kappa0 = 1;
  p.kappa_L = 1;
  p.g_L = -1;
  p.E = 1;
  try {
    assemble_state(5.0, p);  // q = -5, kappa = -4
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnphysicalLoss);
  }
}

TEST(Enumerate, VacuumWhenUndriven) {
  SystemParams p = ratio(0.1, 0.01, 1.0, 0.0);
  const auto st = enumerate_states(p);
  ASSERT_EQ(st.size(), 1u);
  EXPECT_EQ(st[0].n_s, 0.0);
  EXPECT_EQ(st[0].q_s, 0.0);
  ASSERT_TRUE(st[0].stability.has_value());
}

TEST(Enumerate, MultistablePointHasThreeStable) {
  const auto st = enumerate_states(ratio(10, -1e-4, 50, 1e6));
  ASSERT_EQ(st.size(), 5u);
  int stable = 0;
  for (const auto& s : st) stable += s.is_stable();
  EXPECT_EQ(stable, 3);
}

TEST(Enumerate, LinearCoolingRegionSingleState) {
  for (double E : {0.1, 1.0, 4.0}) {
    const auto st = enumerate_states(ratio(0.5, 0.0, 1.0, E));
    EXPECT_EQ(st.size(), 1u) << E;
  }
}
