#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optokerr/model.hpp"
#include "optokerr/spectrum.hpp"
#include "optokerr/steady_state.hpp"

namespace optokerr {

enum class SweepParam { kE, kDelta, kGL, kGNL, kKappaL, kGammaM, kN0 };
enum class AxisScale { kLinear, kLog };

// Throws kConfig on an unknown name. Names: E, delta, g_L, g_NL, kappa_L,
// gamma_m, n0.
SweepParam parse_param(std::string_view name);
const char* to_string(SweepParam p);
void set_param(SystemParams& p, SweepParam which, double value);
double get_param(const SystemParams& p, SweepParam which);

// Values are absolute (rad/s for rates).
struct Axis {
  SweepParam param = SweepParam::kE;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  AxisScale scale = AxisScale::kLinear;

  std::vector<double> values() const;
};

struct SweepPoint {
  std::vector<double> coords;
  std::vector<SteadyState> states;
  // Present only for stable states whose covariance could be computed.
  std::vector<std::optional<double>> n_phonon;
  std::optional<std::size_t> selected;
  bool no_physical_solution = false;
  bool no_stable_state = false;
  std::string error;

  // Stable state with the lowest phonon number.
  std::optional<std::size_t> coolest() const;
};

// Full pipeline at one parameter set. Never throws for physics failures; the
// markers record them instead.
SweepPoint evaluate_point(const SystemParams& p, std::vector<double> coords = {});

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once; callers write into preallocated slots.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Row-major: axis1 outer, axis2 inner.
std::vector<SweepPoint> grid_sweep(const SystemParams& tmpl, const Axis& axis1, const Axis& axis2,
                                   int threads = 1);
std::vector<SweepPoint> line_sweep(const SystemParams& tmpl, const Axis& axis, int threads = 1);

struct Jump {
  double E_before = 0.0;   // last grid E on the old branch
  double E_after = 0.0;    // grid E where the new branch is selected
  double E_refined = 0.0;  // bisected edge of the old branch
  double n_before = 0.0;
  double n_after = 0.0;
};

struct HysteresisTrace {
  std::vector<SweepPoint> up;
  std::vector<SweepPoint> down;  // in descending E order
  std::vector<Jump> up_jumps;
  std::vector<Jump> down_jumps;
  bool up_terminated = false;
  bool down_terminated = false;
};

// Quasi-static drive ramp up then down along E_up (ascending, absolute).
HysteresisTrace hysteresis_trace(const SystemParams& tmpl, std::span<const double> E_up);

struct BranchPoint {
  double coord = 0.0;
  std::size_t sweep_index = 0;
  std::size_t state_index = 0;
  SteadyState state;
  bool stable = false;
  bool ambiguous = false;
};

struct Branch {
  int id = 0;
  std::vector<BranchPoint> points;
};

// Order-preserving nearest-neighbour matching in (n_s, q_s) between
// neighbouring sweep points; unmatched states open new branches.
std::vector<Branch> partition_branches(std::span<const SweepPoint> sweep, double threshold = 0.1);

struct OptimalDrive {
  bool found = false;
  double E_opt = 0.0;
  double n_min = 0.0;
  SteadyState state;
  bool below_unit_photon = false;
  bool multimodal = false;
};

// Coarse scan (log-spaced when the range spans more than a decade) followed
// by golden-section refinement of the best bracket.
OptimalDrive optimal_drive(const SystemParams& tmpl, double E_lo, double E_hi, int coarse = 64);

struct SpectrumMapRow {
  double outer = 0.0;
  bool stable = false;
  std::optional<SteadyState> state;
  std::vector<double> s_total;
  std::vector<double> dressed;
  std::vector<Peak> peaks;
};

// outer.param must be E or delta.
std::vector<SpectrumMapRow> spectrum_map(const SystemParams& tmpl, const Axis& outer,
                                         std::span<const double> nu, int threads = 1);

}  // namespace optokerr
