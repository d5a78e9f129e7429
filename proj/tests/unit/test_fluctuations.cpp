#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "linear_theory.hpp"
#include "lyapunov_eig.hpp"
#include "optokerr/error.hpp"
#include "optokerr/fluctuations.hpp"
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

double rel_frob(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
  return (a - b).norm() / std::max(a.norm(), b.norm());
}

}  // namespace

TEST(Diffusion, ThermalBathEntries) {
  for (double n0 : {0.0, 1.0}) {
    SystemParams p = ratio(0.2, 0.01, 1.0, 2.0);
    p.n0 = n0;
    const auto st = enumerate_states(p);
    const auto d = diffusion_matrix(st[0], p).d;
    Eigen::Matrix4d want = Eigen::Vector4d(0, p.gamma_m * (2 * n0 + 1), p.kappa0, p.kappa0).asDiagonal();
    EXPECT_EQ(d, want) << n0;
  }
}

TEST(Diffusion, AbsorptionCrossTerm) {
  SystemParams p = ratio(0.2, 0.01, 1.0, 2.0);
  p.kappa_L = 0.013 * p.kappa0;
  const auto st = enumerate_states(p);
  const auto& s = st[0];
  const auto d = diffusion_matrix(s, p).d;
  EXPECT_DOUBLE_EQ(d(1, 3), s.Gamma / 2);
  EXPECT_DOUBLE_EQ(d(3, 1), s.Gamma / 2);
  EXPECT_DOUBLE_EQ(s.Gamma, std::sqrt(2 * s.n_s) * p.kappa_L);
  EXPECT_NEAR(d(1, 1), p.gamma_m * 3 + s.Gamma * s.Gamma / (4 * s.kappa1_qs), 1e-12 * d(1, 1));
  EXPECT_EQ(d.row(0).norm(), 0.0);
  EXPECT_EQ((d - d.transpose()).norm(), 0.0);
}

TEST(Diffusion, NegativeAbsorptionRejected) {
  SystemParams p = ratio(-0.2, 0.0, 1.0, 2.0);
  p.kappa_L = 0.013 * p.kappa0;
  const SteadyState s = assemble_state(10.0, p);  // q < 0
  ASSERT_LT(s.kappa1_qs, 0.0);
  try {
    diffusion_matrix(s, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnphysicalAbsorption);
  }
}

TEST(Lyapunov, DecoupledMechanicsIsThermal) {
  const double W = 2.0, g = 0.05, n0 = 3.0;
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(0, 1) = W;
  a(1, 0) = -W;
  a(1, 1) = -g;
  a(2, 2) = a(3, 3) = -1.0;
  a(2, 3) = 0.7;
  a(3, 2) = -0.7;
  DiffusionMatrix d;
  d.d.diagonal() << 0, g * (2 * n0 + 1), 1.0, 1.0;
  const auto v = solve_lyapunov({a}, d);
  Eigen::Matrix4d want = Eigen::Vector4d(n0 + 0.5, n0 + 0.5, 0.5, 0.5).asDiagonal();
  EXPECT_LE((v.v - want).norm(), 1e-12);
  EXPECT_LE(v.residual, 1e-12);
  EXPECT_EQ(v.source, CovarianceSource::kDirect);
  EXPECT_NEAR(phonon_number(v).n, n0, 1e-12);
}

TEST(Lyapunov, MatchesEigenbasisOracle) {
  std::mt19937_64 rng(31);
  int n = 0;
  for (int t = 0; t < 500; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    for (const auto& s : testing_support::states(p)) {
      if (!s.is_stable() || s.kappa1_qs < 0) continue;
      const auto a = drift_matrix(s, p);
      const auto d = diffusion_matrix(s, p);
      const auto v = solve_lyapunov(a, d);
      EXPECT_LE(v.residual, 1e-8);
      const Eigen::Matrix4d o = oracle::lyapunov_eig(a.a, d.d);
      EXPECT_LE(rel_frob(v.v, o), 1e-7) << "draw " << t;
      EXPECT_LE((v.v - v.v.transpose()).norm(), 1e-10 * v.v.norm());
      for (int i = 0; i < 4; ++i) EXPECT_GE(v.v(i, i), 0.0);
      ++n;
    }
  }
  EXPECT_GT(n, 150);
}

TEST(Lyapunov, MatchesIntegration) {
  std::mt19937_64 rng(32);
  int n = 0;
  for (int t = 0; t < 1000 && n < 40; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    for (const auto& s : testing_support::states(p)) {
      if (!s.is_stable() || s.kappa1_qs < 0) continue;
      const auto a = drift_matrix(s, p);
      // Keep the integration cheap: skip very stiff or very slow instances.
      const double slow = -s.stability->max_real;
      if (a.a.norm() / slow > 2e3) continue;
      const auto d = diffusion_matrix(s, p);
      const auto direct = solve_lyapunov(a, d);
      const auto integ = integrate_covariance(a, d);
      EXPECT_EQ(integ.source, CovarianceSource::kIntegrated);
      EXPECT_LE(rel_frob(direct.v, integ.v), 1e-6) << "draw " << t;
      ++n;
    }
  }
  EXPECT_GE(n, 40);
}

TEST(Lyapunov, RefusesUnstable) {
  Eigen::Matrix4d a = -Eigen::Matrix4d::Identity();
  a(1, 1) = 0.0;  // marginal
  DiffusionMatrix d;
  d.d = Eigen::Matrix4d::Identity();
  try {
    solve_lyapunov({a}, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoStationaryState);
  }
}

TEST(PhononNumber, GroundStateAndClipping) {
  CovarianceMatrix v;
  v.v = 0.5 * Eigen::Matrix4d::Identity();
  auto n = phonon_number(v);
  EXPECT_EQ(n.n, 0.0);
  EXPECT_FALSE(n.clipped);
  v.v(0, 0) = 0.5 - 1e-10;
  n = phonon_number(v);
  EXPECT_EQ(n.n, 0.0);
  EXPECT_TRUE(n.clipped);
}

TEST(PhononNumber, DecoupledBathOccupation) {
  for (double n0 : {0.0, 1.0, 10.0, 100.0}) {
    SystemParams p = ratio(0.0, 0.0, 1.0, 2.0);
    p.n0 = n0;
    const auto st = enumerate_states(p);
    ASSERT_EQ(st.size(), 1u);
    EXPECT_NEAR(phonon_number_of(st[0], p), n0, 1e-9 * std::max(1.0, n0)) << n0;
  }
}

TEST(PhononNumber, HeisenbergFloor) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 300; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    for (const auto& s : testing_support::states(p)) {
      if (!s.is_stable() || s.kappa1_qs < 0) continue;
      const auto v = solve_lyapunov(drift_matrix(s, p), diffusion_matrix(s, p)).v;
      EXPECT_GE(v(0, 0) * v(1, 1), 0.25 - 1e-9) << "draw " << t;
    }
  }
}

TEST(PhononNumber, LinearTheoryCooling) {
  // Resolved sideband, weak coupling: oracle Lyapunov on the textbook matrices.
  const SystemParams p = ratio(0.1, 0.0, 1.0, 3.0);
  const auto st = enumerate_states(p);
  ASSERT_EQ(st.size(), 1u);
  const oracle::LinearParams lp{p.omega_m, p.kappa0, p.gamma_m, p.g_L, p.delta, p.E, p.n0};
  const auto ls = oracle::linear_state(st[0].n_s, lp);
  const Eigen::MatrixXd v = oracle::lyapunov_eig(oracle::drift(ls, lp), oracle::diffusion(lp));
  const double want = 0.5 * (v(0, 0) + v(1, 1)) - 0.5;
  EXPECT_NEAR(phonon_number_of(st[0], p), want, 1e-9 * want);
  EXPECT_LT(want, p.n0);
}
