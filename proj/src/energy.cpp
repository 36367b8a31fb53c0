#include "blowup/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "blowup/csv.hpp"
#include "blowup/error.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

double rho0_exponent(double p, int d) { return 2.0 / (p - 1.0) - (d - 1) / 2.0; }

double rho_mass_exact(double p) { return std::beta(0.5, 2.0 / (p - 1.0) + 1.0); }

double rho0_mass_exact(double p, int d) {
  const double c = rho0_exponent(p, d);
  if (!(c > -1.0)) throw Error(ErrorKind::NonIntegrableWeight, "rho0 is not integrable at y = 1");
  return 0.5 * std::beta(d / 2.0, c + 1.0);
}

double WeightedQuadrature::integrate(const std::vector<double>& g) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double factor = singular ? (1.0 - nodes[i]) * (1.0 + nodes[i]) : 1.0;
    sum += weights[i] * factor * g[i];
  }
  return sum;
}

double WeightedQuadrature::integrate_singular(const std::vector<double>& g) const {
  if (!singular) throw Error(ErrorKind::NonIntegrableWeight, "weight / (1-y^2) is not integrable");
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * g[i];
  return sum;
}

double WeightedQuadrature::mass() const { return integrate(std::vector<double>(nodes.size(), 1.0)); }

namespace {

WeightedQuadrature build_rule(WeightKind kind, double p, int d, int n) {
  WeightedQuadrature q;
  q.kind = kind;
  q.p = p;
  q.d = d;
  switch (kind) {
    case WeightKind::Rho: {
      const double a = 2.0 / (p - 1.0);
      const QuadratureRule r = gauss_jacobi(n, a - 1.0, a - 1.0);
      q.nodes = r.nodes;
      q.weights = r.weights;
      q.singular = true;
      break;
    }
    case WeightKind::Plain: {
      const QuadratureRule r = gauss_legendre(n);
      q.nodes = r.nodes;
      q.weights = r.weights;
      break;
    }
    case WeightKind::Rho0:
    case WeightKind::RPower: {
      // z = y^2 turns y^{d-1} dy into z^{(d-2)/2} dz / 2.
      const double c = kind == WeightKind::Rho0 ? rho0_exponent(p, d) : 0.0;
      if (!(c > -1.0)) throw Error(ErrorKind::NonIntegrableWeight, "rho0 is not integrable at y = 1");
      const double e = c > 0.0 ? c - 1.0 : c;
      const double b = (d - 2) / 2.0;
      const QuadratureRule r = gauss_jacobi(n, e, b);
      const double scale = std::exp2(-2.0 - e - b);
      q.nodes.resize(n);
      q.weights.resize(n);
      for (int i = 0; i < n; ++i) {
        q.nodes[i] = std::sqrt(0.5 * (1.0 + r.nodes[i]));
        q.weights[i] = scale * r.weights[i];
      }
      q.singular = c > 0.0;
      break;
    }
  }
  return q;
}

bool same_nodes(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-14) return false;
  return true;
}

/// The frame resampled onto the rule nodes (or itself when they already match).
SimilarityFrame aligned(const SimilarityFrame& frame, const WeightedQuadrature& rule) {
  if (same_nodes(frame.y, rule.nodes)) return frame;
  const BarycentricInterpolant interp(frame.y);
  SimilarityFrame out = frame;
  out.y = rule.nodes;
  out.w = interp.evaluate(frame.w, rule.nodes);
  out.w_s = interp.evaluate(frame.w_s, rule.nodes);
  out.w_y = interp.evaluate(frame.w_y, rule.nodes);
  return out;
}

double bracket(double w, double ws, double wy, double y, double p, double beta0) {
  return 0.5 * ws * ws + 0.5 * wy * wy * (1.0 - y * y) + (p + 1.0) / ((p - 1.0) * (p - 1.0)) * w * w -
         beta0 / (p + 1.0) * std::pow(std::abs(w), p + 1.0);
}

}  // namespace

const WeightedQuadrature& weighted_rule(WeightKind kind, double p, int d, int n) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, int, int>, WeightedQuadrature> cache;
  if (!(p > 1.0)) throw Error(ErrorKind::Precondition, "p must exceed 1");
  if (n < 2) throw Error(ErrorKind::Precondition, "rule needs >= 2 nodes");
  const int dim = (kind == WeightKind::Rho0 || kind == WeightKind::RPower) ? d : 1;
  const double pk = (kind == WeightKind::Rho || kind == WeightKind::Rho0) ? p : 0.0;
  const auto key = std::make_tuple(static_cast<int>(kind), pk, dim, n);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_rule(kind, p, dim, n)).first;
  return it->second;
}

double weighted_norm(const SimilarityFrame& frame, NormKind kind, int d) {
  const bool h1 = kind == NormKind::H1_rho || kind == NormKind::H1_rho0 || kind == NormKind::H1_rd ||
                  kind == NormKind::H1_plain;
  WeightKind wk = WeightKind::Rho;
  int dim = d;
  switch (kind) {
    case NormKind::L2_rho:
    case NormKind::H1_rho: wk = WeightKind::Rho; break;
    case NormKind::L2_rho0:
    case NormKind::H1_rho0: wk = WeightKind::Rho0; break;
    case NormKind::L2_rd:
    case NormKind::H1_rd: wk = WeightKind::RPower; break;
    case NormKind::H1_plain:
      wk = frame.origin ? WeightKind::RPower : WeightKind::Plain;
      dim = 1;
      break;
  }
  const bool half_interval = wk == WeightKind::Rho0 || wk == WeightKind::RPower;
  if (half_interval != frame.origin)
    throw Error(ErrorKind::Precondition, "frame interval does not match the norm's interval");
  const auto& rule = weighted_rule(wk, frame.p, dim, static_cast<int>(std::max<std::size_t>(frame.size(), 2)));
  const SimilarityFrame f = aligned(frame, rule);
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = f.w[i] * f.w[i] + (h1 ? f.w_y[i] * f.w_y[i] : 0.0);
  return std::sqrt(std::max(0.0, rule.integrate(g)));
}

double E0_functional(const SimilarityFrame& frame, double beta_at_X0) {
  if (frame.origin) throw Error(ErrorKind::Precondition, "E0 needs a frame on (-1, 1)");
  const auto& rule = weighted_rule(WeightKind::Rho, frame.p, 1, static_cast<int>(frame.size()));
  const SimilarityFrame f = aligned(frame, rule);
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = bracket(f.w[i], f.w_s[i], f.w_y[i], f.y[i], f.p, beta_at_X0);
  return rule.integrate(g);
}

double energy_gamma(double p, double q) { return std::min(0.5, (p - q) / (p - 1.0)); }

EnergyReport full_energy(const SimilarityFrame& frame, const CoefficientModel& model, double mu) {
  if (frame.origin || !(frame.X0 > 0.0)) throw Error(ErrorKind::Precondition, "full_energy needs x0 != 0");
  if (!(mu > 0.0)) throw Error(ErrorKind::Precondition, "mu must be positive");
  const auto& rule = weighted_rule(WeightKind::Rho, frame.p, 1, static_cast<int>(frame.size()));
  const SimilarityFrame f = aligned(frame, rule);
  const double p = model.p();
  const double s = f.s;
  const double m = 2.0 / (p - 1.0);
  const double beta0 = model.beta(f.X0);
  const double e = std::exp(-s);
  const std::size_t n = f.size();

  EnergyReport r;
  r.s = s;
  r.mu = mu;
  r.gamma = energy_gamma(p, model.q());
  r.E0 = E0_functional(f, beta0);

  std::vector<double> g(n);
  if (model.has_source()) {
    const double up = std::exp(m * s);
    const double down = std::exp(-2.0 * (p + 1.0) * s / (p - 1.0));
    for (std::size_t i = 0; i < n; ++i) {
      double F = model.F(up * f.w[i]);
      if (!std::isfinite(F)) {
        const double u = std::abs(up * f.w[i]);
        F = model.M() * (u + std::pow(u, model.q() + 1.0) / (model.q() + 1.0));
      }
      g[i] = down * F;
    }
    r.I = -rule.integrate(g);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double X = f.X0 + f.y[i] * e;
    g[i] = (model.beta(X) - beta0) * std::pow(std::abs(f.w[i]), p + 1.0);
  }
  r.J = -rule.integrate(g) / (p + 1.0);
  for (std::size_t i = 0; i < n; ++i) g[i] = f.w[i] * f.w_s[i];
  r.K = -std::exp(-r.gamma * s) * rule.integrate(g);
  r.E = r.E0 + r.I + r.J + r.K;
  r.H = r.E * std::exp((p + 3.0) / (2.0 * r.gamma) * std::exp(-r.gamma * s)) + mu * std::exp(-2.0 * r.gamma * s);
  for (std::size_t i = 0; i < n; ++i) g[i] = f.w_s[i] * f.w_s[i];
  r.dissipation = rule.integrate_singular(g);
  return r;
}

IdentityTerms identity_terms(const SimilarityFrame& frame, const CoefficientModel& model, const EnergyReport& report) {
  const auto& rule = weighted_rule(WeightKind::Rho, frame.p, 1, static_cast<int>(frame.size()));
  const SimilarityFrame f = aligned(frame, rule);
  const double p = model.p();
  const double s = f.s;
  const double m = 2.0 / (p - 1.0);
  const double e = std::exp(-s);
  const double gamma = report.gamma;
  const double beta0 = model.beta(f.X0);
  const int d = model.d();
  const double t = f.T0 - e;
  const double up = std::exp(m * s);
  const double up_d = std::exp((m + 1.0) * s);
  const double src = std::exp(-2.0 * p * s / (p - 1.0));
  const double Fscale = std::exp(-2.0 * (p + 1.0) * s / (p - 1.0));
  const std::size_t n = f.size();

  IdentityTerms T;
  std::vector<double> g1(n), g2(n), g3(n), g4(n), g5(n), k1(n), k2(n), k3(n), k4(n), k5(n), k7(n), k8(n);
  std::vector<double> ws2(n), wy2(n), w2(n), wp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = f.y[i];
    const double w = f.w[i];
    const double ws = f.w_s[i];
    const double wy = f.w_y[i];
    const double X = f.X0 + y * e;
    const double absw_p1 = std::pow(std::abs(w), p + 1.0);
    const double fval = model.has_source() ? model.f(up * w) : 0.0;
    const double Fval = model.has_source() ? model.F(up * w) : 0.0;
    const double G = model.G(X, t, up_d * wy, up_d * (ws + y * wy + m * w));
    const double dbeta = model.beta(X) - beta0;

    g1[i] = ws * wy / X;
    g2[i] = Fval;
    g3[i] = fval * w;
    g4[i] = y * model.beta_prime(X) * absw_p1;
    g5[i] = G * ws;
    k1[i] = w * ws;
    k2[i] = w * ws * y * y;  // against rho/(1-y^2)
    k3[i] = y * ws * wy;
    k4[i] = w * fval;
    k5[i] = w * G;
    k7[i] = w * wy / X;
    k8[i] = dbeta * absw_p1;
    ws2[i] = ws * ws;
    wy2[i] = wy * wy * (1.0 - y * y);
    w2[i] = w * w;
    wp[i] = absw_p1;
  }

  T.dissipation = rule.integrate_singular(ws2);
  T.I1 = (d - 1) * e * rule.integrate(g1);
  T.I2 = 2.0 * (p + 1.0) / (p - 1.0) * Fscale * rule.integrate(g2);
  T.I3 = -2.0 / (p - 1.0) * src * rule.integrate(g3);
  T.I4 = e / (p + 1.0) * rule.integrate(g4);
  T.I5 = src * rule.integrate(g5);
  T.rhs_E0IJ = -4.0 / (p - 1.0) * T.dissipation + T.I1 + T.I2 + T.I3 + T.I4 + T.I5;

  const double ww_s = rule.integrate(k1);
  T.K1 = (gamma + (p + 3.0) / (p - 1.0) - 2.0 + (p + 3.0) / 2.0 * std::exp(-gamma * s)) * ww_s;
  T.K2 = 8.0 / (p - 1.0) * rule.integrate_singular(k2);
  T.K3 = -2.0 * rule.integrate(k3);
  T.K4 = -src * rule.integrate(k4);
  T.K5 = -src * rule.integrate(k5);
  T.K6 = (p + 3.0) / 2.0 * Fscale * rule.integrate(g2);
  T.K7 = -(d - 1) * e * rule.integrate(k7);
  T.K8 = -(p - 1.0) / (2.0 * (p + 1.0)) * rule.integrate(k8);
  T.rhs_K = (p + 3.0) / 2.0 * report.E - (p + 7.0) / 4.0 * rule.integrate(ws2) - (p - 1.0) / 4.0 * rule.integrate(wy2) -
            (p + 1.0) / (2.0 * (p - 1.0)) * rule.integrate(w2) -
            (p - 1.0) / (2.0 * (p + 1.0)) * beta0 * rule.integrate(wp) + T.K1 + T.K2 + T.K3 + T.K4 + T.K5 + T.K6 +
            T.K7 + T.K8;
  return T;
}

IdentityCheck dissipation_identity_check(std::vector<EnergyReport>& reports, const std::vector<SimilarityFrame>& frames,
                                         const CoefficientModel& model) {
  const std::size_t n = frames.size();
  if (n < 3 || reports.size() != n) throw Error(ErrorKind::Precondition, "identity check needs >= 3 matching slices");
  IdentityCheck out;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double ds = frames[k].s - frames[k - 1].s;
    if (!(ds > 0.0) || std::abs(frames[k + 1].s - frames[k].s - ds) > 1e-9 * (1.0 + ds))
      throw Error(ErrorKind::Precondition, "slices must be equally spaced in s");
    const auto sum3 = [&](std::size_t j) { return reports[j].E0 + reports[j].I + reports[j].J; };
    const double dE = (sum3(k + 1) - sum3(k - 1)) / (2.0 * ds);
    const double egdK = std::exp(reports[k].gamma * frames[k].s) * (reports[k + 1].K - reports[k - 1].K) / (2.0 * ds);
    const IdentityTerms terms = identity_terms(frames[k], model, reports[k]);
    out.s.push_back(frames[k].s);
    out.dE0IJ_ds.push_back(dE);
    out.residual_E0IJ.push_back(std::abs(dE - terms.rhs_E0IJ));
    out.eg_dK_ds.push_back(egdK);
    out.residual_K.push_back(std::abs(egdK - terms.rhs_K));
    out.terms.push_back(terms);
    reports[k].identity_residual_E0IJ = out.residual_E0IJ.back();
    reports[k].identity_residual_K = out.residual_K.back();
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  reports.front().identity_residual_E0IJ = reports.front().identity_residual_K = nan;
  reports.back().identity_residual_E0IJ = reports.back().identity_residual_K = nan;
  return out;
}

OriginEnergy origin_energy(const SimilarityFrame& frame, double p, int d, double beta0) {
  if (!frame.origin) throw Error(ErrorKind::Precondition, "origin energy needs a frame on (0, 1)");
  const auto& rule = weighted_rule(WeightKind::Rho0, p, d, static_cast<int>(frame.size()));
  const SimilarityFrame f = aligned(frame, rule);
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = bracket(f.w[i], f.w_s[i], f.w_y[i], f.y[i], p, beta0);
  OriginEnergy out;
  out.E00 = rule.integrate(g);
  const double coef = d - 1.0 - 4.0 / (p - 1.0);
  if (std::abs(coef) > 1e-14) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = f.w_s[i] * f.w_s[i];
    out.dE00_ds_predicted = coef * rule.integrate_singular(g);
  }
  return out;
}

OriginEnergy origin_energy(const SimilarityFrame& frame, const CoefficientModel& model) {
  return origin_energy(frame, model.p(), model.d(), model.b(0.0));
}

MonotonicityReport check_monotonicity(const std::vector<EnergyReport>& reports, double burn_in_fraction,
                                      double tol_rel) {
  MonotonicityReport m;
  const std::size_t n = reports.size();
  m.burn_in_index = static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(n)));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double rise = reports[k + 1].H - reports[k].H;
    const double tol = tol_rel * (1.0 + std::abs(reports[k].H));
    if (!(rise > tol)) continue;
    if (k >= m.burn_in_index) {
      ++m.violations_after;
      m.worst_excess = std::max(m.worst_excess, rise - tol);
    } else {
      ++m.violations_before;
    }
  }
  m.pass = n >= 2 && m.violations_after == 0;
  return m;
}

double extrapolated_energy_limit(const std::vector<EnergyReport>& reports, double tail_fraction) {
  if (reports.empty()) throw Error(ErrorKind::Precondition, "empty energy series");
  const std::size_t n = reports.size();
  const std::size_t start = std::min(n - 1, static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * n)));
  const std::size_t m = n - start;
  if (m < 4) return reports.back().E;
  double best_res = std::numeric_limits<double>::infinity();
  double best = reports.back().E;
  const double s_ref = reports.back().s;
  for (int i = 0; i <= 120; ++i) {
    const double lambda = 0.05 * std::pow(100.0, i / 120.0);
    // Linear least squares in (E_inf, C) for E = E_inf + C e^{-lambda (s - s_ref)}.
    double S1 = 0, Sx = 0, Sxx = 0, Sy = 0, Sxy = 0;
    for (std::size_t k = start; k < n; ++k) {
      const double x = std::exp(-lambda * (reports[k].s - s_ref));
      const double y = reports[k].E;
      S1 += 1;
      Sx += x;
      Sxx += x * x;
      Sy += y;
      Sxy += x * y;
    }
    const double det = S1 * Sxx - Sx * Sx;
    if (std::abs(det) < 1e-300) continue;
    const double Einf = (Sxx * Sy - Sx * Sxy) / det;
    const double C = (S1 * Sxy - Sx * Sy) / det;
    double res = 0.0;
    for (std::size_t k = start; k < n; ++k) {
      const double r = reports[k].E - Einf - C * std::exp(-lambda * (reports[k].s - s_ref));
      res += r * r;
    }
    if (res < best_res) {
      best_res = res;
      best = Einf;
    }
  }
  return best;
}

void write_energy_csv(const std::vector<EnergyReport>& reports, const std::string& path) {
  CsvWriter csv(path, {"s", "E0", "I", "J", "K", "E", "H", "dissipation", "res1", "res2"});
  for (const auto& r : reports)
    csv.row({r.s, r.E0, r.I, r.J, r.K, r.E, r.H, r.dissipation, r.identity_residual_E0IJ, r.identity_residual_K});
}

}  // namespace blowup
