#include "optokerr/cli/commands.hpp"

#include <fstream>
#include <functional>
#include <memory>

#include "optokerr/circuit.hpp"
#include "optokerr/cli/csv.hpp"
#include "optokerr/dynamics.hpp"
#include "optokerr/error.hpp"
#include "optokerr/fluctuations.hpp"
#include "optokerr/spectrum.hpp"
#include "optokerr/steady_state.hpp"
#include "optokerr/sweep.hpp"
#include "optokerr/version.hpp"

namespace optokerr::cli {

namespace {

using constants::kTwoPi;

// Thrown to stop a command with exit code 3 after output has been written.
struct NoStable {};

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
    os_ = file_.get();
  }
  std::ostream& os() { return *os_; }
  void close() {
    if (file_) {
      file_->flush();
      if (!*file_) throw Error(ErrorCode::kIo, "write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

std::string axis_text(const RunConfig& c, const Axis& a) {
  const double u = display_unit(c, a.param);
  return std::string(to_string(a.param)) + ":" + format_number(a.min * u) + ":" +
         format_number(a.max * u) + ":" + std::to_string(a.count) + ":" +
         (a.scale == AxisScale::kLog ? "log" : "linear");
}

void preamble(CsvWriter& w, const RunConfig& c, const std::string& command) {
  w.comment(std::string("optokerr ") + kVersion);
  w.comment("command", command);
  w.comment("units", c.units == Units::kRatio ? "ratio" : "absolute");
  if (c.circuit) {
    const auto& p = c.circuit->base;
    w.comment("circuit.bare_frequencies", c.circuit->bare == BareFrequency::kAngular ? "angular" : "ordinary");
    w.comment("circuit.exchange", p.exchange == ExchangeConvention::kHbar ? "hbar" : "planck");
    w.comment("circuit.cavity_moves", p.cavity_moves ? "true" : "false");
    w.comment("circuit.g_rad_s", p.g);
    w.comment("circuit.gamma_rad_s", p.gamma);
    w.comment("circuit.omega_C_rad_s", p.omega_C);
    w.comment("circuit.omega_c0_rad_s", p.omega_c0);
    w.comment("circuit.G_L_rad_s_per_m", p.G_L_dim);
    w.comment("circuit.C0_F", p.C0);
    w.comment("circuit.d0_m", p.d0);
    w.comment("circuit.C_sigma1_F", p.C_sigma1);
    w.comment("circuit.C_sigma2_F", p.C_sigma2);
    w.comment("circuit.x_zp_m", p.x_zp);
  }
  if (!c.has_system) return;
  const auto& s = c.system;
  w.comment("omega_m_rad_s", s.omega_m);
  w.comment("kappa0_rad_s", s.kappa0);
  w.comment("kappa_L_rad_s", s.kappa_L);
  w.comment("gamma_m_rad_s", s.gamma_m);
  w.comment("g_L_rad_s", s.g_L);
  w.comment("g_NL_rad_s", s.g_NL);
  w.comment("delta_rad_s", s.delta);
  w.comment("E_rad_s", s.E);
  w.comment("n0", s.n0);
  if (c.axis1) w.comment("axis1", axis_text(c, *c.axis1));
  if (c.axis2) w.comment("axis2", axis_text(c, *c.axis2));
  if (c.has_E_range) {
    w.comment("E_min_rad_s", c.E_min);
    w.comment("E_max_rad_s", c.E_max);
    w.comment("coarse", static_cast<double>(c.coarse));
  }
}

void nu_preamble(CsvWriter& w, const RunConfig& c) {
  w.comment("nu_min_rad_s", c.nu_min);
  w.comment("nu_max_rad_s", c.nu_max);
  w.comment("nu_count", static_cast<double>(c.nu_count));
}

const Axis& need_axis(const std::optional<Axis>& a, const char* which) {
  if (!a) throw Error(ErrorCode::kConfig, std::string("[sweep] ") + which + " is required");
  return *a;
}

void need_system(const RunConfig& c) {
  if (!c.has_system) throw Error(ErrorCode::kConfig, "this command needs a [system] section");
}

void cmd_steady(const RunConfig& c, std::ostream& os) {
  need_system(c);
  const auto states = enumerate_states(c.system);
  CsvWriter w(os);
  preamble(w, c, "steady");
  w.header({"n_s", "q_s", "re_alpha", "im_alpha", "G", "Gamma", "stable", "max_real", "stability",
            "n_phonon", "marginal", "below_unit_photon"});
  for (const auto& s : states) {
    std::string nph;
    if (s.is_stable()) {
      try {
        nph = cell(phonon_number_of(s, c.system));
      } catch (const Error&) {
      }
    }
    w.row({cell(s.n_s), cell(s.q_s), cell(s.alpha_s.real()), cell(s.alpha_s.imag()), cell(s.G),
           cell(s.Gamma), cell(s.is_stable()), cell(s.stability->max_real),
           to_string(s.stability->kind), nph, cell(s.marginal), cell(s.n_s < 1.0)});
  }
  if (states.empty()) throw Error(ErrorCode::kNoStableState, "no physical steady state");
}

void cmd_cooling_map(const RunConfig& c, const Options& opt, std::ostream& os) {
  need_system(c);
  const Axis& a1 = need_axis(c.axis1, "axis1");
  const Axis& a2 = need_axis(c.axis2, "axis2");
  const auto pts = grid_sweep(c.system, a1, a2, opt.threads);
  CsvWriter w(os);
  preamble(w, c, "cooling-map");
  w.header({display_name(c, a1.param), display_name(c, a2.param), "n_states", "n_stable",
            "n_phonon_min", "n_s_coolest", "below_unit_photon", "no_stable_state"});
  const double u1 = display_unit(c, a1.param);
  const double u2 = display_unit(c, a2.param);
  bool any = false;
  for (const auto& pt : pts) {
    long long stable = 0;
    for (const auto& s : pt.states) stable += s.is_stable();
    const auto k = pt.coolest();
    any = any || k.has_value();
    w.row({cell(pt.coords[0] * u1), cell(pt.coords[1] * u2),
           cell(static_cast<long long>(pt.states.size())), cell(stable),
           k ? cell(*pt.n_phonon[*k]) : "", k ? cell(pt.states[*k].n_s) : "",
           k ? cell(pt.states[*k].n_s < 1.0) : "", cell(pt.no_stable_state)});
  }
  if (!any) throw NoStable{};
}

void write_trace(const RunConfig& c, std::ostream& os, const std::string& direction,
                 const std::vector<SweepPoint>& pts, const std::vector<Jump>& jumps,
                 bool terminated) {
  const double u = display_unit(c, SweepParam::kE);
  CsvWriter w(os);
  preamble(w, c, "hysteresis");
  w.comment("direction", direction);
  for (const auto& j : jumps) {
    w.comment("jump", format_number(j.E_before * u) + "," + format_number(j.E_after * u) + "," +
                          format_number(j.E_refined * u) + "," + format_number(j.n_before) + "," +
                          format_number(j.n_after));
  }
  if (terminated) w.comment("terminated = no stable state");
  w.header({display_name(c, SweepParam::kE), "n_s", "q_s", "n_phonon", "n_states", "n_stable", "jump"});
  std::size_t ji = 0;
  for (const auto& pt : pts) {
    long long stable = 0;
    for (const auto& s : pt.states) stable += s.is_stable();
    bool jumped = false;
    while (ji < jumps.size() && jumps[ji].E_after == pt.coords[0]) {
      jumped = true;
      ++ji;
    }
    if (!pt.selected) {
      w.row({cell(pt.coords[0] * u), "", "", "", cell(static_cast<long long>(pt.states.size())),
             cell(stable), cell(false)});
      continue;
    }
    const auto& s = pt.states[*pt.selected];
    const auto& n = pt.n_phonon[*pt.selected];
    w.row({cell(pt.coords[0] * u), cell(s.n_s), cell(s.q_s), n ? cell(*n) : "",
           cell(static_cast<long long>(pt.states.size())), cell(stable), cell(jumped)});
  }
}

std::string with_suffix(const std::string& path, const std::string& tag) {
  const std::string ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size()) + "." + tag + ext;
  }
  return path + "." + tag + ext;
}

void cmd_hysteresis(const RunConfig& c, const std::string& path, std::ostream& fallback) {
  need_system(c);
  const Axis& a = need_axis(c.axis1, "axis1");
  if (a.param != SweepParam::kE) throw Error(ErrorCode::kConfig, "hysteresis needs axis1 over E");
  const auto Es = a.values();
  const HysteresisTrace h = hysteresis_trace(c.system, Es);
  {
    Sink up(path.empty() ? "" : with_suffix(path, "up"), fallback);
    write_trace(c, up.os(), "up", h.up, h.up_jumps, h.up_terminated);
    up.close();
  }
  {
    Sink down(path.empty() ? "" : with_suffix(path, "down"), fallback);
    write_trace(c, down.os(), "down", h.down, h.down_jumps, h.down_terminated);
    down.close();
  }
  if (h.up_terminated && h.up.size() <= 1) throw NoStable{};
}

std::vector<double> nu_grid(const RunConfig& c) { return linear_grid(c.nu_min, c.nu_max, c.nu_count); }

void cmd_spectrum(const RunConfig& c, std::ostream& os) {
  need_system(c);
  const auto states = enumerate_states(c.system);
  const SteadyState* chosen = nullptr;
  for (const auto& s : states) {
    if (s.is_stable()) {
      chosen = &s;
      break;
    }
  }
  if (!chosen) throw Error(ErrorCode::kNoStableState, "no stable steady state for the spectrum");
  const auto nu = nu_grid(c);
  const auto series = spectrum_series(nu, *chosen, c.system);
  const double nu_u = nu_unit(c);
  CsvWriter w(os);
  preamble(w, c, "spectrum");
  nu_preamble(w, c);
  w.comment("state_n_s", chosen->n_s);
  for (double f : chosen->stability->dressed_frequencies) w.comment("dressed_frequency", f * nu_u);
  for (const auto& p : find_peaks(series)) w.comment("peak", p.nu * nu_u);
  w.header({c.units == Units::kRatio ? "nu/omega_m" : "nu", "s_total", "s_thermal", "s_rp", "s_abs",
            "chi_eff_sq", "omega_eff", "gamma_eff"});
  for (const auto& p : series) {
    w.row({cell(p.nu * nu_u), cell(p.s_total), cell(p.s_thermal), cell(p.s_rp), cell(p.s_abs),
           cell(p.chi_eff_sq), cell(p.omega_eff), cell(p.gamma_eff)});
  }
}

void cmd_spectrum_map(const RunConfig& c, const Options& opt, std::ostream& os) {
  need_system(c);
  const Axis& a = need_axis(c.axis1, "axis1");
  const auto nu = nu_grid(c);
  const auto rows = spectrum_map(c.system, a, nu, opt.threads);
  const double u = display_unit(c, a.param);
  const double nu_u = nu_unit(c);
  CsvWriter w(os);
  preamble(w, c, "spectrum-map");
  nu_preamble(w, c);
  w.header({display_name(c, a.param), "kind", c.units == Units::kRatio ? "nu/omega_m" : "nu", "value"});
  bool any = false;
  for (const auto& r : rows) {
    const std::string o = cell(r.outer * u);
    if (!r.stable) {
      w.row({o, "unstable", "", ""});
      continue;
    }
    any = true;
    for (std::size_t i = 0; i < nu.size(); ++i) w.row({o, "S", cell(nu[i] * nu_u), cell(r.s_total[i])});
    for (double f : r.dressed) w.row({o, "dressed", cell(f * nu_u), ""});
    for (const auto& p : r.peaks) w.row({o, "peak", cell(p.nu * nu_u), cell(p.s)});
  }
  if (!any) throw NoStable{};
}

void cmd_optimal(const RunConfig& c, const Options& opt, std::ostream& os) {
  need_system(c);
  const Axis& a1 = need_axis(c.axis1, "axis1");
  const Axis& a2 = need_axis(c.axis2, "axis2");
  if (!c.has_E_range) throw Error(ErrorCode::kConfig, "[sweep] E_min and E_max are required");
  const auto v1 = a1.values();
  const auto v2 = a2.values();
  std::vector<OptimalDrive> res(v1.size() * v2.size());
  parallel_for(res.size(), opt.threads, [&](std::size_t k) {
    SystemParams p = c.system;
    set_param(p, a1.param, v1[k / v2.size()]);
    set_param(p, a2.param, v2[k % v2.size()]);
    res[k] = optimal_drive(p, c.E_min, c.E_max, c.coarse);
  });
  const double u1 = display_unit(c, a1.param);
  const double u2 = display_unit(c, a2.param);
  const double uE = display_unit(c, SweepParam::kE);
  CsvWriter w(os);
  preamble(w, c, "optimal-cooling");
  w.header({display_name(c, a1.param), display_name(c, a2.param), "found",
            display_name(c, SweepParam::kE) + "_opt", "n_min", "n_s", "below_unit_photon", "multimodal"});
  bool any = false;
  for (std::size_t k = 0; k < res.size(); ++k) {
    const auto& r = res[k];
    any = any || r.found;
    w.row({cell(v1[k / v2.size()] * u1), cell(v2[k % v2.size()] * u2), cell(r.found),
           r.found ? cell(r.E_opt * uE) : "", r.found ? cell(r.n_min) : "",
           r.found ? cell(r.state.n_s) : "", r.found ? cell(r.below_unit_photon) : "",
           cell(r.multimodal)});
  }
  if (!any) throw NoStable{};
}

void cmd_circuit(const RunConfig& c, std::ostream& os) {
  if (!c.circuit) throw Error(ErrorCode::kConfig, "circuit needs a [circuit] section");
  CsvWriter w(os);
  preamble(w, c, "circuit");
  w.header({"omega_x/2pi_Hz", "J0/2pi_Hz", "Delta0/2pi_Hz", "eta0/2pi_Hz", "G_NL/2pi_Hz_per_m",
            "G_L/2pi_Hz_per_m", "g_L_rad_s", "g_NL_rad_s", "cancellation_detuning/2pi_Hz",
            "validity_warning"});
  for (double fx : c.circuit->omega_x_hz) {
    CircuitParams p = c.circuit->base;
    p.omega_x = kTwoPi * fx;
    const CircuitSummary s = summarize(p);
    GeneralKerrInputs gi;
    gi.g1 = p.g;
    gi.omega_C = p.omega_C;
    w.row({cell(fx), cell(s.J0 / kTwoPi), cell(s.Delta0 / kTwoPi), cell(s.eta0 / kTwoPi),
           cell(s.G_NL_dim / kTwoPi), cell(p.G_L_dim / kTwoPi), cell(s.g_L), cell(s.g_NL),
           cell(s.cancellation / kTwoPi), cell(kerr_validity_warning(gi))});
  }
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kZeroTemperatureBath:
    case ErrorCode::kPlateCollision:
      return 2;
    case ErrorCode::kIo:
      return 4;
    default:
      return 3;
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"steady",   "cooling-map",     "hysteresis", "spectrum",
                                              "spectrum-map", "optimal-cooling", "circuit"};
  return names;
}

int run_command(const std::string& name, RunConfig cfg, const Options& opt, std::ostream& out,
                std::ostream& err) {
  try {
    const double nu_u = cfg.has_system ? nu_unit(cfg) : 1.0;
    if (opt.nu_min) cfg.nu_min = *opt.nu_min / nu_u;
    if (opt.nu_max) cfg.nu_max = *opt.nu_max / nu_u;
    if (opt.nu_count) cfg.nu_count = *opt.nu_count;
    if (cfg.nu_count < 3 || !(cfg.nu_max > cfg.nu_min)) {
      throw Error(ErrorCode::kConfig, "bad frequency grid");
    }
    const std::string path = opt.out.empty() ? cfg.output_path : opt.out;
    if (name == "hysteresis") {
      cmd_hysteresis(cfg, path, out);
      return 0;
    }
    Sink sink(path, out);
    if (name == "steady") {
      cmd_steady(cfg, sink.os());
    } else if (name == "cooling-map") {
      cmd_cooling_map(cfg, opt, sink.os());
    } else if (name == "spectrum") {
      cmd_spectrum(cfg, sink.os());
    } else if (name == "spectrum-map") {
      cmd_spectrum_map(cfg, opt, sink.os());
    } else if (name == "optimal-cooling") {
      cmd_optimal(cfg, opt, sink.os());
    } else if (name == "circuit") {
      cmd_circuit(cfg, sink.os());
    } else {
      throw Error(ErrorCode::kConfig, "unknown command '" + name + "'");
    }
    sink.close();
    return 0;
  } catch (const NoStable&) {
    err << "optokerr: no stable state anywhere in the sweep\n";
    return 3;
  } catch (const Error& e) {
    err << "optokerr: " << e.what() << '\n';
    return exit_code(e.code());
  }
}

int run_command(const std::string& name, const std::string& config_path, const Options& opt,
                std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    err << "optokerr: " << e.what() << '\n';
    return exit_code(e.code());
  }
  return run_command(name, std::move(cfg), opt, out, err);
}

}  // namespace optokerr::cli
