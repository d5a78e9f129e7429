#pragma once

#include <array>
#include <complex>
#include <vector>

namespace optokerr {

enum class Stability { kStable, kMarginal, kUnstable };

const char* to_string(Stability s);

struct StabilityVerdict {
  std::array<std::complex<double>, 4> eigenvalues{};
  double max_real = 0.0;
  double epsilon = 0.0;  // threshold used for the verdict, rad/s
  Stability kind = Stability::kUnstable;
  bool is_stable = false;
  // Distinct nonzero |Im(lambda)| values, ascending.
  std::vector<double> dressed_frequencies;
  std::array<double, 4> decay_rates{};
};

}  // namespace optokerr
