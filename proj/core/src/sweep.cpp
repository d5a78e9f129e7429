#include "optokerr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "optokerr/dynamics.hpp"
#include "optokerr/error.hpp"
#include "optokerr/fluctuations.hpp"

namespace optokerr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance between photon numbers on a log scale; the vacuum sits at 0.
double log_gap(double a, double b) {
  if (a == b) return 0.0;
  if (a <= 0.0 || b <= 0.0) return kInf;
  return std::abs(std::log(a / b));
}

// A followed state counts as continued when it moved by less than this factor
// (in log n) between neighbouring points. Larger moves are first checked by
// halving the step.
constexpr double kContinuation = 0.5;
constexpr double kStep = 0.05;
constexpr int kMaxHalvings = 40;
constexpr double kEdgeRel = 1e-7;

std::optional<std::size_t> nearest_state(const SweepPoint& pt, double n_ref, bool stable_only) {
  std::optional<std::size_t> best;
  double best_gap = kInf;
  for (std::size_t i = 0; i < pt.states.size(); ++i) {
    if (stable_only && !pt.states[i].is_stable()) continue;
    const double g = std::abs(pt.states[i].n_s - n_ref);
    if (!best || g < best_gap) {
      best = i;
      best_gap = g;
    }
  }
  return best;
}

// Continuation across one grid step without refinement (spectrum maps).
std::optional<std::size_t> continuation(const SweepPoint& pt, double n_ref) {
  const auto c = nearest_state(pt, n_ref, false);
  if (!c) return std::nullopt;
  if (!pt.states[*c].is_stable()) return std::nullopt;
  if (n_ref > 0.0 && log_gap(pt.states[*c].n_s, n_ref) > kContinuation) return std::nullopt;
  return c;
}

SweepPoint at_E(const SystemParams& tmpl, double E) {
  SystemParams p = tmpl;
  p.E = E;
  return evaluate_point(p, {E});
}

struct Follow {
  std::optional<std::size_t> index;  // state followed to the target
  double E_edge = 0.0;               // last E where the branch was still stable
  double n_edge = 0.0;
};

// Follows the stable state n_a at E_a to E_b, halving the step wherever the
// nearest state moved by more than kStep. A branch that ends (fold) or turns
// unstable on the way leaves `index` empty and reports its edge.
Follow follow(const SystemParams& tmpl, double E_a, double n_a, double E_b, SweepPoint& pt_b,
              int depth = 0) {
  pt_b = at_E(tmpl, E_b);
  const auto c = nearest_state(pt_b, n_a, false);
  if (c && pt_b.states[*c].is_stable()) {
    const double n_b = pt_b.states[*c].n_s;
    if (n_a == 0.0 ? n_b == 0.0 : log_gap(n_b, n_a) <= kStep) return {c, E_b, n_b};
  }
  if (depth >= kMaxHalvings || std::abs(E_b - E_a) <= kEdgeRel * std::max(std::abs(E_a), std::abs(E_b))) {
    return {std::nullopt, E_a, n_a};
  }
  const double mid = 0.5 * (E_a + E_b);
  SweepPoint pt_mid;
  const Follow h = follow(tmpl, E_a, n_a, mid, pt_mid, depth + 1);
  if (!h.index) return h;
  return follow(tmpl, mid, h.n_edge, E_b, pt_b, depth + 1);
}

// Walks one direction of a hysteresis ramp.
void trace(const SystemParams& tmpl, const std::vector<double>& Es, std::optional<double> n_start,
           std::vector<SweepPoint>& out, std::vector<Jump>& jumps, bool& terminated) {
  std::optional<double> n_prev = n_start;
  std::optional<double> E_prev;
  for (double E : Es) {
    SweepPoint pt;
    std::optional<std::size_t> sel;
    Follow f;
    if (n_prev && E_prev) {
      f = follow(tmpl, *E_prev, *n_prev, E, pt);
      sel = f.index;
    } else {
      pt = at_E(tmpl, E);
    }
    if (pt.no_stable_state || pt.states.empty()) {
      terminated = true;
      out.push_back(std::move(pt));
      return;
    }
    if (!sel) {
      if (n_prev && E_prev) {
        // The old branch is gone: jump to the stable state closest in n_s.
        sel = nearest_state(pt, *n_prev, true);
        Jump j;
        j.E_before = *E_prev;
        j.E_after = E;
        j.E_refined = f.E_edge;
        j.n_before = *n_prev;
        j.n_after = pt.states[*sel].n_s;
        jumps.push_back(j);
      } else {
        sel = nearest_state(pt, n_prev.value_or(0.0), true);
      }
    }
    pt.selected = sel;
    n_prev = pt.states[*sel].n_s;
    E_prev = E;
    out.push_back(std::move(pt));
  }
}

double state_distance(const SteadyState& a, const SteadyState& b) {
  const double nm = std::max(a.n_s, b.n_s);
  const double dn = nm > 0 ? std::abs(a.n_s - b.n_s) / nm : 0.0;
  const double qm = std::max(std::abs(a.q_s), std::abs(b.q_s));
  const double dq = qm > 0 ? std::abs(a.q_s - b.q_s) / qm : 0.0;
  return std::hypot(dn, dq);
}

}  // namespace

SweepParam parse_param(std::string_view name) {
  if (name == "E") return SweepParam::kE;
  if (name == "delta") return SweepParam::kDelta;
  if (name == "g_L") return SweepParam::kGL;
  if (name == "g_NL") return SweepParam::kGNL;
  if (name == "kappa_L") return SweepParam::kKappaL;
  if (name == "gamma_m") return SweepParam::kGammaM;
  if (name == "n0") return SweepParam::kN0;
  throw Error(ErrorCode::kConfig, "unknown sweep parameter '" + std::string(name) + "'");
}

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kE: return "E";
    case SweepParam::kDelta: return "delta";
    case SweepParam::kGL: return "g_L";
    case SweepParam::kGNL: return "g_NL";
    case SweepParam::kKappaL: return "kappa_L";
    case SweepParam::kGammaM: return "gamma_m";
    case SweepParam::kN0: return "n0";
  }
  return "?";
}

void set_param(SystemParams& p, SweepParam which, double v) {
  switch (which) {
    case SweepParam::kE: p.E = v; break;
    case SweepParam::kDelta: p.delta = v; break;
    case SweepParam::kGL: p.g_L = v; break;
    case SweepParam::kGNL: p.g_NL = v; break;
    case SweepParam::kKappaL: p.kappa_L = v; break;
    case SweepParam::kGammaM: p.gamma_m = v; break;
    case SweepParam::kN0: p.n0 = v; break;
  }
}

double get_param(const SystemParams& p, SweepParam which) {
  switch (which) {
    case SweepParam::kE: return p.E;
    case SweepParam::kDelta: return p.delta;
    case SweepParam::kGL: return p.g_L;
    case SweepParam::kGNL: return p.g_NL;
    case SweepParam::kKappaL: return p.kappa_L;
    case SweepParam::kGammaM: return p.gamma_m;
    case SweepParam::kN0: return p.n0;
  }
  return 0.0;
}

std::vector<double> Axis::values() const {
  if (count < 1) throw Error(ErrorCode::kConfig, "axis count must be >= 1");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = min;
    return v;
  }
  if (scale == AxisScale::kLog) {
    if (!(min > 0.0) || !(max > 0.0)) {
      throw Error(ErrorCode::kConfig, "log axis needs positive bounds");
    }
    const double a = std::log(min);
    const double b = std::log(max);
    for (int i = 0; i < count; ++i) v[i] = std::exp(a + (b - a) * i / (count - 1));
    v.front() = min;
    v.back() = max;
  } else {
    for (int i = 0; i < count; ++i) v[i] = min + (max - min) * i / (count - 1);
  }
  return v;
}

std::optional<std::size_t> SweepPoint::coolest() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!n_phonon[i]) continue;
    if (!best || *n_phonon[i] < *n_phonon[*best]) best = i;
  }
  return best;
}

SweepPoint evaluate_point(const SystemParams& p, std::vector<double> coords) {
  SweepPoint pt;
  pt.coords = std::move(coords);
  try {
    pt.states = enumerate_states(p);
  } catch (const Error& e) {
    pt.error = e.what();
  }
  pt.n_phonon.resize(pt.states.size());
  bool any_stable = false;
  for (std::size_t i = 0; i < pt.states.size(); ++i) {
    if (!pt.states[i].is_stable()) continue;
    any_stable = true;
    try {
      pt.n_phonon[i] = phonon_number_of(pt.states[i], p);
    } catch (const Error& e) {
      if (pt.error.empty()) pt.error = e.what();
    }
  }
  pt.no_physical_solution = pt.states.empty();
  pt.no_stable_state = !any_stable;
  return pt;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          bool expected = false;
          if (failed.compare_exchange_strong(expected, true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepPoint> grid_sweep(const SystemParams& tmpl, const Axis& axis1, const Axis& axis2,
                                   int threads) {
  const std::vector<double> v1 = axis1.values();
  const std::vector<double> v2 = axis2.values();
  std::vector<SweepPoint> out(v1.size() * v2.size());
  parallel_for(out.size(), threads, [&](std::size_t k) {
    const std::size_t i = k / v2.size();
    const std::size_t j = k % v2.size();
    SystemParams p = tmpl;
    set_param(p, axis1.param, v1[i]);
    set_param(p, axis2.param, v2[j]);
    out[k] = evaluate_point(p, {v1[i], v2[j]});
  });
  return out;
}

std::vector<SweepPoint> line_sweep(const SystemParams& tmpl, const Axis& axis, int threads) {
  const std::vector<double> v = axis.values();
  std::vector<SweepPoint> out(v.size());
  parallel_for(out.size(), threads, [&](std::size_t k) {
    SystemParams p = tmpl;
    set_param(p, axis.param, v[k]);
    out[k] = evaluate_point(p, {v[k]});
  });
  return out;
}

HysteresisTrace hysteresis_trace(const SystemParams& tmpl, std::span<const double> E_up) {
  if (!std::is_sorted(E_up.begin(), E_up.end())) {
    throw Error(ErrorCode::kInvalidParams, "E grid must be ascending");
  }
  HysteresisTrace h;
  const std::vector<double> up(E_up.begin(), E_up.end());
  trace(tmpl, up, std::nullopt, h.up, h.up_jumps, h.up_terminated);
  if (h.up_terminated || h.up.empty()) return h;
  const std::vector<double> down(up.rbegin(), up.rend());
  const SweepPoint& last = h.up.back();
  trace(tmpl, down, last.states[*last.selected].n_s, h.down, h.down_jumps, h.down_terminated);
  return h;
}

std::vector<Branch> partition_branches(std::span<const SweepPoint> sweep, double threshold) {
  std::vector<Branch> done;
  int next_id = 0;
  auto make_point = [&](std::size_t si, std::size_t k) {
    BranchPoint bp;
    bp.coord = sweep[si].coords.empty() ? 0.0 : sweep[si].coords[0];
    bp.sweep_index = si;
    bp.state_index = k;
    bp.state = sweep[si].states[k];
    bp.stable = bp.state.is_stable();
    return bp;
  };

  std::vector<Branch> current;
  for (std::size_t si = 0; si < sweep.size(); ++si) {
    const auto& st = sweep[si].states;
    std::vector<Branch> next(st.size());
    if (si == 0 || current.empty()) {
      for (Branch& b : current) done.push_back(std::move(b));
      for (std::size_t k = 0; k < st.size(); ++k) {
        next[k].id = next_id++;
        next[k].points.push_back(make_point(si, k));
      }
      current = std::move(next);
      continue;
    }
    const auto& prev = sweep[si - 1].states;
    const std::size_t a = prev.size();
    const std::size_t b = st.size();
    // Order-preserving matching maximising the number of pairs under the
    // threshold, then minimising total distance.
    struct Cell {
      int matches = 0;
      double cost = 0.0;
      int move = 0;  // 0 skip prev, 1 skip cur, 2 match
    };
    std::vector<std::vector<Cell>> dp(a + 1, std::vector<Cell>(b + 1));
    auto better = [](const Cell& x, const Cell& y) {
      if (x.matches != y.matches) return x.matches > y.matches;
      return x.cost < y.cost;
    };
    for (std::size_t i = 0; i <= a; ++i) {
      for (std::size_t j = 0; j <= b; ++j) {
        if (i == 0 && j == 0) continue;
        Cell best;
        bool have = false;
        if (i > 0) {
          Cell c = dp[i - 1][j];
          c.move = 0;
          best = c;
          have = true;
        }
        if (j > 0) {
          Cell c = dp[i][j - 1];
          c.move = 1;
          if (!have || better(c, best)) best = c;
          have = true;
        }
        if (i > 0 && j > 0) {
          const double d = state_distance(prev[i - 1], st[j - 1]);
          if (d <= threshold) {
            Cell c = dp[i - 1][j - 1];
            c.matches += 1;
            c.cost += d;
            c.move = 2;
            if (better(c, best)) best = c;
          }
        }
        dp[i][j] = best;
      }
    }
    std::vector<int> match_of_cur(b, -1);
    for (std::size_t i = a, j = b; i > 0 || j > 0;) {
      const int mv = dp[i][j].move;
      if (mv == 2) {
        match_of_cur[j - 1] = static_cast<int>(i - 1);
        --i;
        --j;
      } else if (mv == 0) {
        --i;
      } else {
        --j;
      }
    }
    std::vector<bool> continued(a, false);
    for (std::size_t k = 0; k < b; ++k) {
      BranchPoint bp = make_point(si, k);
      int close = 0;
      for (std::size_t i = 0; i < a; ++i) {
        if (state_distance(prev[i], st[k]) <= threshold) ++close;
      }
      bp.ambiguous = close > 1;
      if (match_of_cur[k] >= 0) {
        const int i = match_of_cur[k];
        next[k] = std::move(current[i]);
        continued[i] = true;
      } else {
        next[k].id = next_id++;
      }
      next[k].points.push_back(std::move(bp));
    }
    for (std::size_t i = 0; i < a; ++i) {
      if (!continued[i]) done.push_back(std::move(current[i]));
    }
    current = std::move(next);
  }
  for (Branch& b : current) done.push_back(std::move(b));
  std::sort(done.begin(), done.end(), [](const Branch& x, const Branch& y) { return x.id < y.id; });
  return done;
}

OptimalDrive optimal_drive(const SystemParams& tmpl, double E_lo, double E_hi, int coarse) {
  if (!(E_lo >= 0.0) || !(E_hi >= E_lo) || !std::isfinite(E_hi)) {
    throw Error(ErrorCode::kInvalidParams, "bad drive search range");
  }
  struct Sample {
    double n = kInf;
    std::optional<SteadyState> state;
  };
  auto eval = [&](double E) {
    SystemParams p = tmpl;
    p.E = E;
    const SweepPoint pt = evaluate_point(p, {E});
    Sample s;
    if (const auto c = pt.coolest()) {
      s.n = *pt.n_phonon[*c];
      s.state = pt.states[*c];
    }
    return s;
  };
  OptimalDrive out;
  auto finish = [&](double E, const Sample& s) {
    out.found = s.state.has_value();
    out.E_opt = E;
    if (out.found) {
      out.n_min = s.n;
      out.state = *s.state;
      out.below_unit_photon = s.state->n_s < 1.0;
    }
  };
  if (E_hi == E_lo) {
    finish(E_lo, eval(E_lo));
    return out;
  }
  const bool logscale = E_lo > 0.0 && E_hi / E_lo > 10.0;
  Axis ax{SweepParam::kE, E_lo, E_hi, std::max(coarse, 3),
          logscale ? AxisScale::kLog : AxisScale::kLinear};
  const std::vector<double> Es = ax.values();
  std::vector<Sample> samples;
  samples.reserve(Es.size());
  for (double E : Es) samples.push_back(eval(E));
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].n < samples[best].n) best = i;
  }
  if (!std::isfinite(samples[best].n)) return out;
  int minima = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].n)) continue;
    const double l = i > 0 ? samples[i - 1].n : kInf;
    const double r = i + 1 < samples.size() ? samples[i + 1].n : kInf;
    if (samples[i].n < l && samples[i].n < r) ++minima;
  }
  out.multimodal = minima > 1;

  const std::size_t il = best > 0 ? best - 1 : 0;
  const std::size_t ir = std::min(best + 1, Es.size() - 1);
  auto to_x = [&](double E) { return logscale ? std::log(E) : E; };
  auto to_E = [&](double x) { return logscale ? std::exp(x) : x; };
  double a = to_x(Es[il]);
  double b = to_x(Es[ir]);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  Sample f1 = eval(to_E(x1));
  Sample f2 = eval(to_E(x2));
  for (int it = 0; it < 80 && (b - a) > 1e-10 * std::max(1.0, std::abs(b)); ++it) {
    if (f1.n <= f2.n) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eval(to_E(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eval(to_E(x2));
    }
  }
  double E_best = Es[best];
  Sample s_best = samples[best];
  if (f1.n < s_best.n) {
    E_best = to_E(x1);
    s_best = f1;
  }
  if (f2.n < s_best.n) {
    E_best = to_E(x2);
    s_best = f2;
  }
  finish(E_best, s_best);
  return out;
}

std::vector<SpectrumMapRow> spectrum_map(const SystemParams& tmpl, const Axis& outer,
                                         std::span<const double> nu, int threads) {
  if (outer.param != SweepParam::kE && outer.param != SweepParam::kDelta) {
    throw Error(ErrorCode::kConfig, "spectrum map runs over E or delta");
  }
  const std::vector<double> vals = outer.values();
  std::vector<SpectrumMapRow> rows(vals.size());
  std::vector<SystemParams> params(vals.size(), tmpl);
  std::optional<double> n_prev;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    set_param(params[i], outer.param, vals[i]);
    rows[i].outer = vals[i];
    SweepPoint pt = evaluate_point(params[i], {vals[i]});
    std::optional<std::size_t> sel;
    if (n_prev) sel = continuation(pt, *n_prev);
    if (!sel) sel = nearest_state(pt, n_prev.value_or(0.0), true);
    if (sel) {
      rows[i].stable = true;
      rows[i].state = pt.states[*sel];
      rows[i].dressed = pt.states[*sel].stability->dressed_frequencies;
      n_prev = pt.states[*sel].n_s;
    }
  }
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    if (!rows[i].state) return;
    const auto series = spectrum_series(nu, *rows[i].state, params[i]);
    rows[i].s_total.reserve(series.size());
    for (const auto& s : series) rows[i].s_total.push_back(s.s_total);
    rows[i].peaks = find_peaks(series);
  });
  return rows;
}

}  // namespace optokerr
