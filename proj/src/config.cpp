#include "blowup/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "blowup/csv.hpp"
#include "blowup/error.hpp"

namespace blowup {

namespace {

const std::set<std::string> kKnownKeys = {
    "coefficients.family", "coefficients.alpha", "coefficients.N", "coefficients.d", "coefficients.table",
    "coefficients.p", "coefficients.q", "coefficients.M", "coefficients.x_max", "coefficients.b0",
    "coefficients.b1", "coefficients.perturbations",
    "initial.preset", "initial.amplitude", "initial.width", "initial.center", "initial.T0", "initial.d_hat",
    "grid.h", "grid.X_max",
    "solver.cfl", "solver.c_nl", "solver.t_max", "solver.first_threshold", "solver.overflow_guard",
    "solver.snapshot_eps", "solver.floor_cells",
    "analysis.x0", "analysis.ds", "analysis.n_y", "analysis.s_offset", "analysis.s_cap", "analysis.mu",
    "analysis.burn_in", "analysis.c1", "analysis.soliton_k", "analysis.soliton_s0", "analysis.soliton_s_end",
    "analysis.soliton_tol", "analysis.soliton_perturbation", "analysis.norm_d", "analysis.norm_R",
    "analysis.norm_h",
    "output.dir"};

std::string unquote(std::string v) {
  boost::algorithm::trim(v);
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
    v = v.substr(1, v.size() - 2);
  return v;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Validation, key + ": expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw Error(ErrorKind::Validation, key + ": expected an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string l = boost::algorithm::to_lower_copy(v);
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw Error(ErrorKind::Validation, key + ": expected a boolean");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, v, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::algorithm::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::Validation, std::string("config syntax: ") + e.what());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error(ErrorKind::Validation, "key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!kKnownKeys.count(full)) throw Error(ErrorKind::Validation, "unknown config key '" + full + "'");
      c.raw[full] = unquote(value.data());
    }
  }
  for (const auto& [key, v] : c.raw) {
    auto& co = c.coefficients;
    auto& o = co.options;
    auto& in0 = c.initial;
    auto& an = c.analysis;
    auto& so = c.solver;
    if (key == "coefficients.family") co.family = v;
    else if (key == "coefficients.alpha") co.alpha = to_double(key, v);
    else if (key == "coefficients.N") co.N = to_int(key, v);
    else if (key == "coefficients.d") co.d = to_int(key, v);
    else if (key == "coefficients.table") co.table = v;
    else if (key == "coefficients.p") o.p = to_double(key, v);
    else if (key == "coefficients.q") o.q = to_double(key, v);
    else if (key == "coefficients.M") o.M = to_double(key, v);
    else if (key == "coefficients.x_max") o.x_max = to_double(key, v);
    else if (key == "coefficients.b0") o.b0 = to_double(key, v);
    else if (key == "coefficients.b1") o.b1 = to_double(key, v);
    else if (key == "coefficients.perturbations") o.perturbations = to_bool(key, v);
    else if (key == "initial.preset") in0.preset = v;
    else if (key == "initial.amplitude") in0.amplitude = to_double(key, v);
    else if (key == "initial.width") in0.width = to_double(key, v);
    else if (key == "initial.center") in0.center = to_double(key, v);
    else if (key == "initial.T0") in0.T0 = to_double(key, v);
    else if (key == "initial.d_hat") in0.d_hat = to_double(key, v);
    else if (key == "grid.h") c.grid.h = to_double(key, v);
    else if (key == "grid.X_max") c.grid.X_max = to_double(key, v);
    else if (key == "solver.cfl") so.cfl = to_double(key, v);
    else if (key == "solver.c_nl") so.c_nl = to_double(key, v);
    else if (key == "solver.t_max") so.t_max = to_double(key, v);
    else if (key == "solver.first_threshold") so.first_threshold = to_double(key, v);
    else if (key == "solver.overflow_guard") so.overflow_guard = to_double(key, v);
    else if (key == "solver.snapshot_eps") so.snapshot_eps = to_double(key, v);
    else if (key == "solver.floor_cells") so.floor_cells = to_int(key, v);
    else if (key == "analysis.x0") {
      an.x0.clear();
      for (const auto& s : split_list(v)) an.x0.push_back(to_double(key, s));
    } else if (key == "analysis.ds") an.ds = to_double(key, v);
    else if (key == "analysis.n_y") an.n_y = to_int(key, v);
    else if (key == "analysis.s_offset") an.s_offset = to_double(key, v);
    else if (key == "analysis.s_cap") an.s_cap = to_double(key, v);
    else if (key == "analysis.mu") an.mu = to_double(key, v);
    else if (key == "analysis.burn_in") an.burn_in = to_double(key, v);
    else if (key == "analysis.c1") an.c1 = to_double(key, v);
    else if (key == "analysis.soliton_k") an.soliton_k = to_int(key, v);
    else if (key == "analysis.soliton_s0") an.soliton_s0 = to_double(key, v);
    else if (key == "analysis.soliton_s_end") an.soliton_s_end = to_double(key, v);
    else if (key == "analysis.soliton_tol") an.soliton_tol = to_double(key, v);
    else if (key == "analysis.soliton_perturbation") an.soliton_perturbation = to_double(key, v);
    else if (key == "analysis.norm_d") {
      an.norm_d.clear();
      for (const auto& s : split_list(v)) an.norm_d.push_back(to_int(key, s));
    } else if (key == "analysis.norm_R") an.norm_R = to_double(key, v);
    else if (key == "analysis.norm_h") an.norm_h = to_double(key, v);
    else if (key == "output.dir") c.output_dir = v;
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const RunConfig& c) {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::Validation, what);
  };
  const auto& co = c.coefficients;
  const auto& o = co.options;
  require(co.family == "power_law" || co.family == "constant" || co.family == "tabulated",
          "coefficients.family must be power_law, constant or tabulated");
  require(o.p > 1.0, "coefficients.p must exceed 1");
  require(o.q < o.p, "coefficients.q must be smaller than p");
  require(o.M > 0.0, "coefficients.M must be positive");
  require(o.x_max > 0.0, "coefficients.x_max must be positive");
  require(o.b0 > 0.0 && o.b0 + o.b1 * o.x_max > 0.0, "b must stay positive on [0, x_max]");
  require(co.N >= 1 && co.d >= 1, "coefficients.N and d must be positive");
  require(co.family != "tabulated" || !co.table.empty(), "coefficients.table is required for tabulated");
  const auto& in0 = c.initial;
  require(in0.preset == "flat_ode" || in0.preset == "gaussian_bump" || in0.preset == "soliton_seed",
          "initial.preset must be flat_ode, gaussian_bump or soliton_seed");
  require(in0.T0 > 0.0, "initial.T0 must be positive");
  require(in0.width > 0.0, "initial.width must be positive");
  require(std::abs(in0.d_hat) < 1.0, "initial.d_hat must lie in (-1, 1)");
  require(c.grid.h > 0.0 && c.grid.X_max > 4.0 * c.grid.h, "grid.h must be positive and X_max > 4h");
  const auto& so = c.solver;
  require(so.cfl > 0.0 && so.cfl <= 0.9, "solver.cfl must lie in (0, 0.9]");
  require(so.c_nl > 0.0 && so.c_nl <= 0.5, "solver.c_nl must lie in (0, 0.5]");
  require(so.t_max > 0.0, "solver.t_max must be positive");
  require(so.first_threshold > 0.0 && so.overflow_guard > 8.0 * so.first_threshold,
          "solver thresholds need overflow_guard > 8 first_threshold");
  require(so.snapshot_eps > 0.0 && so.floor_cells >= 2, "solver snapshot settings out of range");
  const auto& an = c.analysis;
  require(!an.x0.empty(), "analysis.x0 must list at least one base point");
  for (double x : an.x0) require(x >= 0.0 && x <= o.x_max, "analysis.x0 entries must lie in [0, x_max]");
  require(an.ds > 0.0, "analysis.ds must be positive");
  require(an.n_y >= 8, "analysis.n_y must be >= 8");
  require(an.mu > 0.0, "analysis.mu must be positive");
  require(an.burn_in >= 0.0 && an.burn_in < 1.0, "analysis.burn_in must lie in [0, 1)");
  require(an.c1 > 0.0, "analysis.c1 must be positive");
  require(an.soliton_k >= 2, "analysis.soliton_k must be >= 2");
  require(an.soliton_s0 > 1.0 && an.soliton_s_end > an.soliton_s0, "soliton s-range must satisfy 1 < s0 < s_end");
  require(an.soliton_tol > 0.0, "analysis.soliton_tol must be positive");
  require(!an.norm_d.empty(), "analysis.norm_d must list a dimension");
  for (int d : an.norm_d) require(d >= 1, "analysis.norm_d entries must be positive");
  require(an.norm_R >= 3.0 && an.norm_h > 0.0 && an.norm_h <= 0.01, "norm grid needs R >= 3 and h <= 0.01");
}

std::string canonical_text(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  const auto num = [](double v) { return format_double(v); };
  const auto& co = c.coefficients;
  const auto& o = co.options;
  kv["coefficients.family"] = co.family;
  kv["coefficients.alpha"] = num(co.alpha);
  kv["coefficients.N"] = std::to_string(co.N);
  kv["coefficients.d"] = std::to_string(co.d);
  kv["coefficients.table"] = co.table;
  kv["coefficients.p"] = num(o.p);
  kv["coefficients.q"] = num(o.q);
  kv["coefficients.M"] = num(o.M);
  kv["coefficients.x_max"] = num(o.x_max);
  kv["coefficients.b0"] = num(o.b0);
  kv["coefficients.b1"] = num(o.b1);
  kv["coefficients.perturbations"] = o.perturbations ? "true" : "false";
  kv["initial.preset"] = c.initial.preset;
  kv["initial.amplitude"] = num(c.initial.amplitude);
  kv["initial.width"] = num(c.initial.width);
  kv["initial.center"] = num(c.initial.center);
  kv["initial.T0"] = num(c.initial.T0);
  kv["initial.d_hat"] = num(c.initial.d_hat);
  kv["grid.h"] = num(c.grid.h);
  kv["grid.X_max"] = num(c.grid.X_max);
  kv["solver.cfl"] = num(c.solver.cfl);
  kv["solver.c_nl"] = num(c.solver.c_nl);
  kv["solver.t_max"] = num(c.solver.t_max);
  kv["solver.first_threshold"] = num(c.solver.first_threshold);
  kv["solver.overflow_guard"] = num(c.solver.overflow_guard);
  kv["solver.snapshot_eps"] = num(c.solver.snapshot_eps);
  kv["solver.floor_cells"] = std::to_string(c.solver.floor_cells);
  const auto& an = c.analysis;
  std::string x0s;
  for (double x : an.x0) x0s += (x0s.empty() ? "" : ",") + num(x);
  kv["analysis.x0"] = x0s;
  kv["analysis.ds"] = num(an.ds);
  kv["analysis.n_y"] = std::to_string(an.n_y);
  kv["analysis.s_offset"] = num(an.s_offset);
  kv["analysis.s_cap"] = num(an.s_cap);
  kv["analysis.mu"] = num(an.mu);
  kv["analysis.burn_in"] = num(an.burn_in);
  kv["analysis.c1"] = num(an.c1);
  kv["analysis.soliton_k"] = std::to_string(an.soliton_k);
  kv["analysis.soliton_s0"] = num(an.soliton_s0);
  kv["analysis.soliton_s_end"] = num(an.soliton_s_end);
  kv["analysis.soliton_tol"] = num(an.soliton_tol);
  kv["analysis.soliton_perturbation"] = num(an.soliton_perturbation);
  std::string ds;
  for (int d : an.norm_d) ds += (ds.empty() ? "" : ",") + std::to_string(d);
  kv["analysis.norm_d"] = ds;
  kv["analysis.norm_R"] = num(an.norm_R);
  kv["analysis.norm_h"] = num(an.norm_h);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

CoefficientModel build_model(const RunConfig& c) {
  const auto& co = c.coefficients;
  if (co.family == "constant") return make_constant_model(co.N, co.d, co.options);
  if (co.family == "power_law") return make_power_law_model({co.alpha, co.N}, co.options);
  if (co.family == "tabulated") return make_tabulated_model(co.table, co.N, co.d, co.options);
  throw Error(ErrorKind::Validation, "unknown coefficient family " + co.family);
}

FieldState build_initial_state(const RunConfig& c, const CoefficientModel& model) {
  const auto& in0 = c.initial;
  const double p = model.p();
  const double m = 2.0 / (p - 1.0);
  const double scale = model.kappa0() * std::pow(c.coefficients.options.b0, -1.0 / (p - 1.0));
  if (in0.preset == "flat_ode") {
    const double U0 = scale * std::pow(in0.T0, -m);
    const double V0 = m * U0 / in0.T0;
    return make_state(model, c.grid.h, c.grid.X_max, [U0](double) { return U0; }, [V0](double) { return V0; });
  }
  if (in0.preset == "gaussian_bump") {
    const double A = in0.amplitude;
    const double w = in0.width;
    const double x_c = in0.center;
    return make_state(
        model, c.grid.h, c.grid.X_max, [=](double X) { return A * std::exp(-(X - x_c) * (X - x_c) / (w * w)); },
        [](double) { return 0.0; });
  }
  // soliton_seed: C (T0 + d (X - center) - t)^{-m}, exact for d = 1 and constant beta.
  const double dh = in0.d_hat;
  const double C = scale * std::pow(1.0 - dh * dh, 1.0 / (p - 1.0));
  const double T0 = in0.T0;
  const double x_c = in0.center;
  const auto xi = [=](double X) {
    const double v = T0 + dh * (X - x_c);
    if (!(v > 0.0)) throw Error(ErrorKind::Validation, "soliton_seed blow-up time must stay positive on the grid");
    return v;
  };
  return make_state(
      model, c.grid.h, c.grid.X_max, [=](double X) { return C * std::pow(xi(X), -m); },
      [=](double X) { return m * C * std::pow(xi(X), -m - 1.0); });
}

}  // namespace blowup
