#include "optokerr/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "optokerr/error.hpp"

namespace optokerr::cli {

namespace {

namespace pt = boost::property_tree;
using constants::kTwoPi;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

double to_double(const std::string& key, std::string s) {
  boost::algorithm::trim(s);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(key + ": trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(key + ": not a number: '" + s + "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != static_cast<int>(v)) fail(key + ": expected an integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, std::string s) {
  boost::algorithm::trim(s);
  boost::algorithm::to_lower(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(key + ": expected true/false");
}

class Section {
 public:
  Section(const pt::ptree& root, const std::string& name, std::set<std::string> allowed)
      : name_(name) {
    if (auto child = root.get_child_optional(name)) {
      tree_ = *child;
      present_ = true;
      for (const auto& kv : tree_) {
        if (!allowed.count(kv.first)) fail("[" + name + "] unknown key '" + kv.first + "'");
      }
    }
  }
  bool present() const { return present_; }
  bool has(const std::string& k) const { return tree_.find(k) != tree_.not_found(); }
  std::string str(const std::string& k) const {
    auto v = tree_.get_optional<std::string>(k);
    if (!v) fail("[" + name_ + "] missing key '" + k + "'");
    return *v;
  }
  double num(const std::string& k) const { return to_double(qualified(k), str(k)); }
  double num_or(const std::string& k, double d) const { return has(k) ? num(k) : d; }
  std::string qualified(const std::string& k) const { return "[" + name_ + "] " + k; }

 private:
  std::string name_;
  pt::ptree tree_;
  bool present_ = false;
};

// omega_m and kappa0 are accepted either as ordinary frequency (_hz) or
// angular (plain key), never both.
double rate(const Section& s, const std::string& key) {
  const bool a = s.has(key);
  const bool h = s.has(key + "_hz");
  if (a == h) fail(s.qualified(key) + ": give exactly one of " + key + " or " + key + "_hz");
  return a ? s.num(key) : kTwoPi * s.num(key + "_hz");
}

Axis parse_axis(const RunConfig& c, const std::string& key, const std::string& spec) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, spec, boost::algorithm::is_any_of(":"));
  if (parts.size() != 5) fail(key + ": expected name:min:max:count:scale");
  for (auto& s : parts) boost::algorithm::trim(s);
  Axis a;
  try {
    a.param = parse_param(parts[0]);
  } catch (const Error&) {
    fail(key + ": unknown parameter '" + parts[0] + "'");
  }
  const double u = display_unit(c, a.param);
  a.min = to_double(key, parts[1]) / u;
  a.max = to_double(key, parts[2]) / u;
  a.count = to_int(key, parts[3]);
  if (parts[4] == "linear") {
    a.scale = AxisScale::kLinear;
  } else if (parts[4] == "log") {
    a.scale = AxisScale::kLog;
  } else {
    fail(key + ": scale must be linear or log");
  }
  if (a.count < 1) fail(key + ": count must be >= 1");
  if (a.scale == AxisScale::kLog && !(a.min > 0.0 && a.max > 0.0)) {
    fail(key + ": log axis needs positive bounds");
  }
  if (!(a.max >= a.min)) fail(key + ": max < min");
  return a;
}

}  // namespace

double display_unit(const RunConfig& c, SweepParam p) {
  if (c.units == Units::kAbsolute) return 1.0;
  switch (p) {
    case SweepParam::kE:
    case SweepParam::kDelta: return 1.0 / c.system.omega_m;
    case SweepParam::kGL:
    case SweepParam::kGNL:
    case SweepParam::kKappaL:
    case SweepParam::kGammaM: return 1.0 / c.system.kappa0;
    case SweepParam::kN0: return 1.0;
  }
  return 1.0;
}

std::string display_name(const RunConfig& c, SweepParam p) {
  std::string n = to_string(p);
  if (c.units == Units::kAbsolute || p == SweepParam::kN0) return n;
  if (p == SweepParam::kE || p == SweepParam::kDelta) return n + "/omega_m";
  return n + "/kappa0";
}

double nu_unit(const RunConfig& c) {
  return c.units == Units::kRatio ? 1.0 / c.system.omega_m : 1.0;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    fail(std::string("malformed config: ") + e.what());
  }
  const std::set<std::string> sections{"run", "system", "sweep", "spectrum", "circuit", "output"};
  for (const auto& kv : root) {
    if (!sections.count(kv.first)) fail("unknown section or top-level key '" + kv.first + "'");
  }

  RunConfig c;
  const Section run(root, "run", {"units"});
  std::string units = run.present() && run.has("units") ? run.str("units") : "";
  boost::algorithm::trim(units);
  if (units == "ratio") {
    c.units = Units::kRatio;
  } else if (units == "absolute" || (units.empty() && !root.get_child_optional("system"))) {
    c.units = Units::kAbsolute;
  } else {
    fail("[run] units must be 'ratio' or 'absolute'");
  }

  const Section sys(root, "system",
                    {"omega_m", "omega_m_hz", "kappa0", "kappa0_hz", "kappa_L", "gamma_m", "g_L",
                     "g_NL", "delta", "E", "n0"});
  c.has_system = sys.present();
  if (sys.present()) {
    c.system.omega_m = rate(sys, "omega_m");
    c.system.kappa0 = rate(sys, "kappa0");
    const double wu = c.units == Units::kRatio ? c.system.omega_m : 1.0;
    const double ku = c.units == Units::kRatio ? c.system.kappa0 : 1.0;
    c.system.kappa_L = sys.num_or("kappa_L", 0.0) * ku;
    c.system.gamma_m = sys.num_or("gamma_m", 0.0) * ku;
    c.system.g_L = sys.num_or("g_L", 0.0) * ku;
    c.system.g_NL = sys.num_or("g_NL", 0.0) * ku;
    c.system.delta = sys.num_or("delta", 0.0) * wu;
    c.system.E = sys.num_or("E", 0.0) * wu;
    c.system.n0 = sys.num_or("n0", 0.0);
    const auto v = validate(c.system);
    if (!v.empty()) fail("[system] " + v.front().field + " " + v.front().message);
  }

  const Section sw(root, "sweep", {"axis1", "axis2", "E_min", "E_max", "coarse"});
  if (sw.present()) {
    if (!sys.present()) fail("[sweep] needs a [system] section");
    if (sw.has("axis1")) c.axis1 = parse_axis(c, "[sweep] axis1", sw.str("axis1"));
    if (sw.has("axis2")) c.axis2 = parse_axis(c, "[sweep] axis2", sw.str("axis2"));
    if (sw.has("E_min") || sw.has("E_max")) {
      const double u = display_unit(c, SweepParam::kE);
      c.E_min = sw.num("E_min") / u;
      c.E_max = sw.num("E_max") / u;
      if (!(c.E_min >= 0.0 && c.E_max >= c.E_min)) fail("[sweep] need 0 <= E_min <= E_max");
      c.has_E_range = true;
    }
    if (sw.has("coarse")) c.coarse = to_int("[sweep] coarse", sw.str("coarse"));
  }

  const Section sp(root, "spectrum", {"nu_min", "nu_max", "nu_count"});
  {
    const double u = sys.present() ? nu_unit(c) : 1.0;
    c.nu_min = sp.num_or("nu_min", 0.2 * (c.units == Units::kRatio ? 1.0 : c.system.omega_m)) / u;
    c.nu_max = sp.num_or("nu_max", 1.8 * (c.units == Units::kRatio ? 1.0 : c.system.omega_m)) / u;
    c.nu_count = sp.has("nu_count") ? to_int("[spectrum] nu_count", sp.str("nu_count")) : 2001;
    if (c.nu_count < 3) fail("[spectrum] nu_count must be >= 3");
    if (!(c.nu_max > c.nu_min)) fail("[spectrum] nu_max must exceed nu_min");
  }

  const Section cir(root, "circuit",
                    {"g_over_kappa", "kappa_mhz", "gamma_mhz", "bare_frequencies", "omega_C_ghz",
                     "omega_c_ghz", "G_L_mhz_per_nm", "omega_x_ghz", "C0_fF", "d0_nm",
                     "C_sigma1_fF", "C_sigma2_fF", "x_zp_fm", "cavity_moves", "exchange"});
  if (cir.present()) {
    CircuitConfig cc;
    std::string bare = cir.has("bare_frequencies") ? cir.str("bare_frequencies") : "angular";
    boost::algorithm::trim(bare);
    if (bare == "angular") {
      cc.bare = BareFrequency::kAngular;
    } else if (bare == "ordinary") {
      cc.bare = BareFrequency::kOrdinary;
    } else {
      fail("[circuit] bare_frequencies must be angular or ordinary");
    }
    const double bs = cc.bare == BareFrequency::kAngular ? 1.0 : kTwoPi;
    auto& p = cc.base;
    const double kappa = cir.num("kappa_mhz") * 1e6 * bs;
    p.g = kTwoPi * cir.num("g_over_kappa") * kappa;
    p.gamma = cir.num("gamma_mhz") * 1e6 * bs;
    p.omega_C = kTwoPi * cir.num("omega_C_ghz") * 1e9;
    p.omega_c0 = kTwoPi * cir.num("omega_c_ghz") * 1e9;
    p.G_L_dim = kTwoPi * cir.num("G_L_mhz_per_nm") * 1e6 / 1e-9;
    p.C0 = cir.num("C0_fF") * 1e-15;
    p.d0 = cir.num("d0_nm") * 1e-9;
    p.C_sigma1 = cir.num("C_sigma1_fF") * 1e-15;
    p.C_sigma2 = cir.num("C_sigma2_fF") * 1e-15;
    p.x_zp = cir.num("x_zp_fm") * 1e-15;
    p.cavity_moves = cir.has("cavity_moves") ? to_bool("[circuit] cavity_moves", cir.str("cavity_moves")) : true;
    std::string ex = cir.has("exchange") ? cir.str("exchange") : "hbar";
    boost::algorithm::trim(ex);
    if (ex == "hbar") {
      p.exchange = ExchangeConvention::kHbar;
    } else if (ex == "planck") {
      p.exchange = ExchangeConvention::kPlanck;
    } else {
      fail("[circuit] exchange must be hbar or planck");
    }
    std::vector<std::string> xs;
    const std::string list = cir.str("omega_x_ghz");
    boost::algorithm::split(xs, list, boost::algorithm::is_any_of(","));
    for (const auto& s : xs) cc.omega_x_hz.push_back(to_double("[circuit] omega_x_ghz", s) * 1e9);
    p.omega_x = kTwoPi * cc.omega_x_hz.front();
    try {
      require_valid(p);
    } catch (const Error& e) {
      fail(std::string("[circuit] ") + e.what());
    }
    c.circuit = cc;
  }

  const Section outp(root, "output", {"path", "format"});
  if (outp.present()) {
    if (outp.has("format")) {
      std::string f = outp.str("format");
      boost::algorithm::trim(f);
      if (f != "csv") fail("[output] format must be csv");
    }
    if (outp.has("path")) {
      c.output_path = outp.str("path");
      boost::algorithm::trim(c.output_path);
    }
  }
  if (!sys.present() && !cir.present()) fail("config needs a [system] or [circuit] section");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace optokerr::cli
