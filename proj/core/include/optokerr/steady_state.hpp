#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "optokerr/model.hpp"
#include "optokerr/numerics.hpp"
#include "optokerr/stability.hpp"

namespace optokerr {

// P(n) = sum_k c[k] n^k, whose positive roots are the classical photon numbers.
struct PolynomialCoefficients {
  std::array<double, 8> c{};

  long double evaluate(long double n) const;
  // sum_k |c_k n^k|
  long double magnitude(long double n) const;
};

PolynomialCoefficients build_polynomial(const SystemParams& p);

struct PhotonRoot {
  double n = 0.0;
  bool marginal = false;  // member of a pair closer than 1e-6 relative
  double residual = 0.0;  // |P(n)| / sum_k |c_k n^k|
};

// Positive real roots, ascending. Throws kUnderdetermined when c[1..7] are
// all zero. c[0] = 0 (no drive) yields the single root n = 0.
std::vector<PhotonRoot> photon_number_roots(const PolynomialCoefficients& coeffs,
                                            const numerics::ToleranceSet& tol = {});

// The field phase is rotated so that alpha enters G and Gamma as the real
// amplitude sqrt(n_s); alpha_s keeps the physical phase for reporting.
struct SteadyState {
  double n_s = 0.0;
  double q_s = 0.0;
  double p_s = 0.0;
  std::complex<double> alpha_s{};
  double kappa_qs = 0.0;    // kappa0 + kappa_L q_s
  double kappa1_qs = 0.0;   // kappa_L q_s
  double delta_qs = 0.0;    // delta - g_L q_s
  double G = 0.0;           // sqrt(2 n_s) (g_L + 2 g_NL n_s)
  double Gamma = 0.0;       // sqrt(2 n_s) kappa_L
  double delta_small = 0.0;   // delta_qs - 2 g_NL q_s n_s
  double delta_second = 0.0;  // delta_qs - 6 g_NL q_s n_s
  double delta_prime_sq = 0.0;
  double self_consistency_residual = 0.0;
  bool marginal = false;
  std::optional<StabilityVerdict> stability;

  bool is_stable() const { return stability && stability->is_stable; }
};

// Throws kUnphysicalLoss if kappa0 + kappa_L q_s <= 0.
SteadyState assemble_state(double n_s, const SystemParams& p);

// Sorted by n_s; every state carries a stability verdict. E = 0 gives the
// vacuum state alone.
std::vector<SteadyState> enumerate_states(const SystemParams& p,
                                          const numerics::ToleranceSet& tol = {});

}  // namespace optokerr
