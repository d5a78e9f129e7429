#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "linear_theory.hpp"
#include "optokerr/fluctuations.hpp"
#include "optokerr/spectrum.hpp"
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

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0 : std::abs(a - b) / s;
}

// A hand-built state with the given effective quantities.
SteadyState synthetic(double G, double kappa, double delta_qs, double gnl_q) {
  SteadyState s;
  s.n_s = 1.0;
  s.G = G;
  s.kappa_qs = kappa;
  s.delta_qs = delta_qs;
  s.delta_small = delta_qs - 2 * gnl_q;
  s.delta_second = delta_qs - 6 * gnl_q;
  s.delta_prime_sq = s.delta_small * s.delta_second;
  return s;
}

}  // namespace

TEST(Thermal, AtMechanicalFrequency) {
  SystemParams p;
  p.omega_m = 3.0;
  p.gamma_m = 0.2;
  p.n0 = 1.0;
  EXPECT_NEAR(thermal_spectrum(p.omega_m, p), 4 * p.gamma_m, 1e-14);
  const double T0 = bath_temperature(1.0, p.omega_m);
  EXPECT_NEAR(thermal_spectrum(p.omega_m, p, T0), 4 * p.gamma_m, 1e-12);
  p.n0 = 0.0;
  EXPECT_EQ(thermal_spectrum(p.omega_m, p), 2 * p.gamma_m);
  EXPECT_EQ(thermal_spectrum(p.omega_m, p, 0.0), 2 * p.gamma_m);
  EXPECT_EQ(thermal_spectrum(-p.omega_m, p, 0.0), 0.0);
}

TEST(Thermal, ZeroFrequencyLimit) {
  SystemParams p = membrane_baseline();
  const double T0 = bath_temperature(p.n0, p.omega_m);
  const double want = 2 * p.gamma_m * constants::kBoltzmann * T0 / (constants::kHbar * p.omega_m);
  EXPECT_NEAR(thermal_spectrum(0.0, p, T0) / want, 1.0, 1e-12);
  EXPECT_NEAR(thermal_spectrum(1e-9 * p.omega_m, p, T0) / want, 1.0, 1e-6);
  EXPECT_NEAR(thermal_spectrum(1e-9 * p.omega_m, p) / want, 1.0, 1e-6);
}

TEST(Thermal, NonNegativeForPositiveFrequency) {
  SystemParams p = membrane_baseline();
  for (double nu : linear_grid(0.0, 3.0 * p.omega_m, 301)) EXPECT_GE(thermal_spectrum(nu, p), 0.0);
}

TEST(RadiationPressure, ZeroCouplingAndSubstitution) {
  const SteadyState s0 = synthetic(0.0, 1.0, 0.3, 0.1);
  EXPECT_EQ(radiation_pressure_spectrum(0.7, s0), 0.0);
  const SteadyState s1 = synthetic(1.0, 1.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(radiation_pressure_spectrum(0.0, s1), 2.0);
}

TEST(RadiationPressure, NonNegative) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    for (const auto& s : testing_support::states(p)) {
      for (double nu : linear_grid(0.0, 3 * p.omega_m, 31)) {
        EXPECT_GE(radiation_pressure_spectrum(nu, s), 0.0);
      }
    }
  }
}

TEST(Absorption, VanishesWithoutPositionDependentLoss) {
  const SystemParams p = ratio(0.2, 0.01, 1.0, 3.0);
  const auto st = enumerate_states(p);
  for (double nu : linear_grid(0.0, 2 * p.omega_m, 11)) EXPECT_EQ(absorption_spectrum(nu, st[0]), 0.0);
}

TEST(Absorption, ConstantWhenUncoupled) {
  SteadyState s = synthetic(0.0, 1.0, 0.3, 0.0);
  s.Gamma = 0.4;
  s.kappa1_qs = 0.1;
  for (double nu : {0.0, 0.5, 2.0}) EXPECT_DOUBLE_EQ(absorption_spectrum(nu, s), 0.16 / 0.2);
}

TEST(Absorption, FrequencyDependentWithPositionDependentLoss) {
  SystemParams p = ratio(0.5, 0.05, 1.0, 3.0);
  p.kappa_L = 0.013 * p.kappa0;
  const auto st = enumerate_states(p);
  ASSERT_FALSE(st.empty());
  const double a = absorption_spectrum(0.5 * p.omega_m, st[0]);
  const double b = absorption_spectrum(1.5 * p.omega_m, st[0]);
  EXPECT_NE(a, 0.0);
  EXPECT_GT(rel(a, b), 1e-6);
}

TEST(Susceptibility, DecoupledOscillator) {
  SystemParams p;
  p.omega_m = 1.0;
  p.gamma_m = 0.1;
  const SteadyState s = synthetic(0.0, 1.0, 0.5, 0.0);
  const auto at_res = effective_susceptibility(1.0, s, p);
  EXPECT_DOUBLE_EQ(at_res.omega_eff, 1.0);
  EXPECT_DOUBLE_EQ(at_res.gamma_eff, 0.1);
  EXPECT_NEAR(at_res.chi_eff_sq, 100.0, 1e-12);
  const auto dc = effective_susceptibility(0.0, s, p);
  EXPECT_DOUBLE_EQ(dc.chi_eff_sq, 1.0);
}

TEST(Susceptibility, InverseBuiltFromEffectiveParameters) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    const SystemParams p = testing_support::draw_general(rng);
    for (const auto& s : testing_support::states(p)) {
      for (double nu : linear_grid(0.1 * p.omega_m, 2 * p.omega_m, 7)) {
        const auto c = effective_susceptibility(nu, s, p);
        const std::complex<double> inv((c.omega_eff_sq - nu * nu) / p.omega_m, -nu * c.gamma_eff);
        EXPECT_LE(rel(std::abs(inv), 1.0 / std::sqrt(c.chi_eff_sq)), 1e-12);
      }
    }
  }
}

TEST(Spectrum, TotalIsProductOfParts) {
  SystemParams p = ratio(0.3, 0.02, 1.0, 2.0);
  p.kappa_L = 0.013 * p.kappa0;
  const auto st = enumerate_states(p);
  for (const auto& pt : spectrum_series(default_nu_grid(p.omega_m), st[0], p)) {
    EXPECT_DOUBLE_EQ(pt.s_total, pt.chi_eff_sq * (pt.s_thermal + pt.s_rp + pt.s_abs));
  }
}

TEST(Spectrum, LinearReductionAgainstTextbook) {
  std::mt19937_64 rng(43);
  int n = 0;
  for (int t = 0; t < 50; ++t) {
    const SystemParams p = testing_support::draw_linear(rng);
    if (p.n0 == 0.0) continue;
    const oracle::LinearParams lp{p.omega_m, p.kappa0, p.gamma_m, p.g_L, p.delta, p.E, p.n0};
    for (const auto& s : testing_support::states(p)) {
      const auto ls = oracle::linear_state(s.n_s, lp);
      for (double nu : linear_grid(0.01 * p.omega_m, 3 * p.omega_m, 1000)) {
        const auto got = spectrum_point(nu, s, p);
        const auto want = oracle::spectrum(nu, ls, lp);
        ASSERT_LE(rel(got.s_rp, want.s_rp), 1e-12) << t << " " << nu;
        ASSERT_LE(rel(got.s_thermal, want.s_th), 1e-12) << t << " " << nu;
        ASSERT_LE(rel(got.chi_eff_sq, want.chi_sq), 1e-9) << t << " " << nu;
        ASSERT_LE(rel(got.s_total, want.total), 1e-9) << t << " " << nu;
      }
      ++n;
    }
  }
  EXPECT_GT(n, 40);
}

TEST(Spectrum, AreaApproachesThermalVariance) {
  SystemParams p = membrane_baseline();
  p.E = p.omega_m;
  p.n0 = 3.0;
  const auto st = enumerate_states(p);
  ASSERT_EQ(st.size(), 1u);
  // Symmetric grid around +-W; the Lorentzians have width gamma_m.
  const double W = p.omega_m;
  double area = 0.0;
  const int N = 400001;
  const auto grid = linear_grid(-3 * W, 3 * W, N);
  const double h = grid[1] - grid[0];
  for (int i = 0; i < N; ++i) {
    const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;
    area += w * spectrum_point(grid[i], st[0], p).s_total;
  }
  area *= h / constants::kTwoPi;
  EXPECT_NEAR(area / (p.n0 + 0.5), 1.0, 0.02);
}

TEST(Spectrum, DecoupledSinglePeakAtMechanicalFrequency) {
  SystemParams p = membrane_baseline();
  p.E = p.omega_m;
  const auto st = enumerate_states(p);
  const auto grid = default_nu_grid(p.omega_m);
  const auto peaks = find_peaks(spectrum_series(grid, st[0], p));
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_NEAR(peaks[0].nu, p.omega_m, grid[1] - grid[0]);
}

TEST(Spectrum, SeriesKeepsGridOrder) {
  const SystemParams p = ratio(0.1, 0.0, 1.0, 1.0);
  const auto st = enumerate_states(p);
  const std::vector<double> nu{3.0, 1.0, 2.0};
  const auto s = spectrum_series(nu, st[0], p);
  ASSERT_EQ(s.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s[i].nu, nu[i]);
}

TEST(Peaks, SingleLorentzian) {
  const auto nu = linear_grid(0.0, 2.0, 201);
  std::vector<double> s;
  for (double x : nu) s.push_back(1.0 / ((x - 1.0037) * (x - 1.0037) + 0.01));
  const auto pk = find_peaks(nu, s);
  ASSERT_EQ(pk.size(), 1u);
  EXPECT_NEAR(pk[0].nu, 1.0037, 0.005);
}

TEST(Peaks, TwoLorentzians) {
  const auto nu = linear_grid(0.0, 2.0, 401);
  std::vector<double> s;
  for (double x : nu) {
    s.push_back(1.0 / ((x - 0.7) * (x - 0.7) + 0.001) + 0.5 / ((x - 1.3) * (x - 1.3) + 0.001));
  }
  const auto pk = find_peaks(nu, s);
  ASSERT_EQ(pk.size(), 2u);
  EXPECT_NEAR(pk[0].nu, 0.7, 0.0025);
  EXPECT_NEAR(pk[1].nu, 1.3, 0.0025);
}

TEST(Peaks, TooShortOrFlat) {
  const std::vector<double> a{1.0, 2.0}, b{1.0, 1.0};
  EXPECT_TRUE(find_peaks(a, b).empty());
  const std::vector<double> c{0, 1, 2, 3}, d{1, 1, 1, 1};
  EXPECT_TRUE(find_peaks(c, d).empty());
}
