#include <benchmark/benchmark.h>

#include <vector>

#include "optokerr/dynamics.hpp"
#include "optokerr/fluctuations.hpp"
#include "optokerr/model.hpp"
#include "optokerr/numerics.hpp"
#include "optokerr/spectrum.hpp"
#include "optokerr/steady_state.hpp"
#include "optokerr/sweep.hpp"

using namespace optokerr;

namespace {

// Five-root point: g_L = 10 kappa, g_NL = -1e-4 kappa, delta = 50 omega_m.
SystemParams multistable() {
  SystemParams p = membrane_baseline();
  p.g_L = 10 * p.kappa0;
  p.g_NL = -1e-4 * p.kappa0;
  p.delta = 50 * p.omega_m;
  p.E = 1e6 * p.omega_m;
  return p;
}

SystemParams cooling() {
  SystemParams p = membrane_baseline();
  p.g_L = 0.3 * p.kappa0;
  p.delta = p.omega_m;
  p.E = 2 * p.omega_m;
  return p;
}

const SteadyState& first_stable(const std::vector<SteadyState>& st) {
  for (const auto& s : st)
    if (s.is_stable()) return s;
  return st.front();
}

void BM_PolyRoots(benchmark::State& state) {
  const std::vector<double> c = {-5040, 13068, -13132, 6769, -1960, 322, -28, 1};  // roots 1..7
  for (auto _ : state) benchmark::DoNotOptimize(numerics::poly_roots(c));
}
BENCHMARK(BM_PolyRoots);

void BM_EnumerateStates(benchmark::State& state) {
  const SystemParams p = multistable();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_states(p));
}
BENCHMARK(BM_EnumerateStates);

void BM_Lyapunov(benchmark::State& state) {
  const SystemParams p = cooling();
  const auto st = enumerate_states(p);
  const auto& s = first_stable(st);
  const auto a = drift_matrix(s, p);
  const auto d = diffusion_matrix(s, p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(a, d));
}
BENCHMARK(BM_Lyapunov);

void BM_IntegratedCovariance(benchmark::State& state) {
  const SystemParams p = cooling();
  const auto st = enumerate_states(p);
  const auto& s = first_stable(st);
  const auto a = drift_matrix(s, p);
  const auto d = diffusion_matrix(s, p);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_covariance(a, d));
}
BENCHMARK(BM_IntegratedCovariance);

void BM_SpectrumSeries(benchmark::State& state) {
  const SystemParams p = cooling();
  const auto st = enumerate_states(p);
  const auto& s = first_stable(st);
  const auto nu = linear_grid(0.2 * p.omega_m, 1.8 * p.omega_m, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_series(nu, s, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpectrumSeries)->Arg(256)->Arg(2001);

void BM_GridSweep(benchmark::State& state) {
  const SystemParams p = cooling();
  const int n = static_cast<int>(state.range(0));
  const Axis g{SweepParam::kGL, 0.01 * p.kappa0, p.kappa0, n, AxisScale::kLog};
  const Axis e{SweepParam::kE, 0.1 * p.omega_m, 1e3 * p.omega_m, n, AxisScale::kLog};
  for (auto _ : state) benchmark::DoNotOptimize(grid_sweep(p, g, e, 1));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_GridSweep)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_HysteresisTrace(benchmark::State& state) {
  SystemParams p = membrane_baseline();
  p.g_L = 0.1 * p.kappa0;
  p.g_NL = 0.01 * p.kappa0;
  p.delta = 50 * p.omega_m;
  const auto E = Axis{SweepParam::kE, p.omega_m, 1e3 * p.omega_m, 400, AxisScale::kLog}.values();
  for (auto _ : state) benchmark::DoNotOptimize(hysteresis_trace(p, E));
}
BENCHMARK(BM_HysteresisTrace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
