#include "blowup/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "blowup/csv.hpp"
#include "blowup/error.hpp"
#include "blowup/quadrature.hpp"
#include "blowup/weighted_quadrature.hpp"

namespace blowup {

double kappa0(double p) { return std::pow(2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)), 1.0 / (p - 1.0)); }

namespace {

double amplitude(double d_hat, double p) {
  if (!(std::abs(d_hat) < 1.0)) throw Error(ErrorKind::Domain, "soliton parameter must satisfy |d| < 1");
  return kappa0(p) * std::pow(1.0 - d_hat * d_hat, 1.0 / (p - 1.0));
}

}  // namespace

double kappa(double d_hat, double y, double p) {
  const double m = 2.0 / (p - 1.0);
  return amplitude(d_hat, p) * std::pow(1.0 + d_hat * y, -m);
}

double kappa_y(double d_hat, double y, double p) {
  const double m = 2.0 / (p - 1.0);
  return -amplitude(d_hat, p) * m * d_hat * std::pow(1.0 + d_hat * y, -m - 1.0);
}

double kappa_yy(double d_hat, double y, double p) {
  const double m = 2.0 / (p - 1.0);
  return amplitude(d_hat, p) * m * (m + 1.0) * d_hat * d_hat * std::pow(1.0 + d_hat * y, -m - 2.0);
}

double soliton_stationary_residual(double d_hat, double y, double p) {
  const double k = kappa(d_hat, y, p);
  return (1.0 - y * y) * kappa_yy(d_hat, y, p) - 2.0 * (p + 1.0) / (p - 1.0) * y * kappa_y(d_hat, y, p) -
         2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)) * k + std::pow(std::abs(k), p - 1.0) * k;
}

double Soliton::value(double y) const {
  return theta * std::pow(beta0, -1.0 / (p - 1.0)) * kappa(d_hat, y, p);
}

double Soliton::derivative(double y) const {
  return theta * std::pow(beta0, -1.0 / (p - 1.0)) * kappa_y(d_hat, y, p);
}

namespace {

struct AlignedFrame {
  const WeightedQuadrature* rule;
  std::vector<double> w, w_s, w_y;
};

AlignedFrame align(const SimilarityFrame& frame) {
  if (frame.origin) throw Error(ErrorKind::Precondition, "profile fits need frames on (-1, 1)");
  const auto& rule = weighted_rule(WeightKind::Rho, frame.p, 1, static_cast<int>(frame.size()));
  AlignedFrame a{&rule, frame.w, frame.w_s, frame.w_y};
  bool same = frame.y.size() == rule.nodes.size();
  for (std::size_t i = 0; same && i < frame.y.size(); ++i) same = std::abs(frame.y[i] - rule.nodes[i]) <= 1e-14;
  if (!same) {
    const BarycentricInterpolant interp(frame.y);
    a.w = interp.evaluate(frame.w, rule.nodes);
    a.w_s = interp.evaluate(frame.w_s, rule.nodes);
    a.w_y = interp.evaluate(frame.w_y, rule.nodes);
  }
  return a;
}

double distance_aligned(const AlignedFrame& a, double p, int theta, double d_hat, double beta0) {
  const Soliton sol{d_hat, theta, p, beta0};
  const auto& y = a.rule->nodes;
  std::vector<double> g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dw = a.w[i] - sol.value(y[i]);
    const double dy = a.w_y[i] - sol.derivative(y[i]);
    g[i] = dw * dw + dy * dy + a.w_s[i] * a.w_s[i];
  }
  return std::sqrt(std::max(0.0, a.rule->integrate(g)));
}

}  // namespace

double soliton_distance(const SimilarityFrame& frame, int theta, double d_hat, double beta0) {
  return distance_aligned(align(frame), frame.p, theta, d_hat, beta0);
}

SolitonMatch match_soliton(const SimilarityFrame& frame, double beta0) {
  const AlignedFrame a = align(frame);
  const double p = frame.p;
  SolitonMatch best{1, 0.0, std::numeric_limits<double>::infinity()};
  // d = tanh(eta): scan, then golden-section refinement around the best sample.
  constexpr int scan = 96;
  constexpr double eta_max = 4.5;
  for (int theta : {1, -1}) {
    const auto obj = [&](double eta) { return distance_aligned(a, p, theta, std::tanh(eta), beta0); };
    int best_i = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= scan; ++i) {
      const double v = obj(-eta_max + 2.0 * eta_max * i / scan);
      if (v < best_v) {
        best_v = v;
        best_i = i;
      }
    }
    double lo = -eta_max + 2.0 * eta_max * std::max(best_i - 1, 0) / scan;
    double hi = -eta_max + 2.0 * eta_max * std::min(best_i + 1, scan) / scan;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo);
    double e = lo + g * (hi - lo);
    double fc = obj(c);
    double fe = obj(e);
    while (hi - lo > 1e-11) {
      if (fc < fe) {
        hi = e;
        e = c;
        fe = fc;
        c = hi - g * (hi - lo);
        fc = obj(c);
      } else {
        lo = c;
        c = e;
        fc = fe;
        e = lo + g * (hi - lo);
        fe = obj(e);
      }
    }
    const double eta = 0.5 * (lo + hi);
    const double v = obj(eta);
    if (v < best.distance) best = {theta, std::tanh(eta), v};
  }
  return best;
}

ProfileFit fit_profile(const std::vector<SimilarityFrame>& frames, const CoefficientModel& model, double T_U_prime) {
  if (frames.empty()) throw Error(ErrorKind::Precondition, "no frames to fit");
  ProfileFit fit;
  const double beta0 = model.beta(frames.front().X0);
  for (const auto& f : frames) {
    const SolitonMatch m = match_soliton(f, beta0);
    fit.s.push_back(f.s);
    fit.distances.push_back(m.distance);
    fit.d_hats.push_back(m.d_hat);
    fit.theta = m.theta;
  }
  const std::size_t n = frames.size();
  fit.x0 = frames.back().x0;
  fit.d_hat_star = fit.d_hats.back();
  fit.distance = fit.distances.back();
  fit.s_star = fit.s.back();
  fit.T0 = frames.back().T0;
  fit.d_hat_expected = T_U_prime;
  const double sa = fit.x0 > 0.0 ? std::sqrt(model.a(fit.x0)) : 1.0;
  fit.T_prime = (std::isfinite(T_U_prime) ? T_U_prime : fit.d_hat_star) / sa;

  // log distance = c - mu0 s over the second half.
  double S1 = 0, Sx = 0, Sxx = 0, Sy = 0, Sxy = 0;
  for (std::size_t k = n / 2; k < n; ++k) {
    if (!(fit.distances[k] > 0.0)) continue;
    const double x = fit.s[k];
    const double y = std::log(fit.distances[k]);
    S1 += 1;
    Sx += x;
    Sxx += x * x;
    Sy += y;
    Sxy += x * y;
  }
  const double det = S1 * Sxx - Sx * Sx;
  fit.rate = (S1 >= 2 && det > 0) ? -(S1 * Sxy - Sx * Sy) / det : 0.0;
  const std::size_t third = (2 * n) / 3;
  fit.converged = n >= 3 && fit.distances.back() <= fit.distances[std::min(third, n - 1)];
  return fit;
}

double u_profile_prediction(const ProfileFit& fit, const CoefficientModel& model, double x0, double x, double t) {
  const double p = model.p();
  const double dX = model.phi(x) - model.phi(x0);
  if (!(std::abs(dX) < fit.T0 - t)) throw Error(ErrorKind::Domain, "(x, t) lies outside the backward cone of x0");
  const double a0 = model.a(x0);
  const double lorentz = 1.0 - a0 * fit.T_prime * fit.T_prime;
  if (!(lorentz > 0.0)) throw Error(ErrorKind::Domain, "a(x0) T'(x0)^2 must be below 1");
  const double denom = fit.T0 - t + fit.T_prime * std::sqrt(a0) * dX;
  const double beta0 = model.b(x0);
  return fit.theta * kappa0(p) * std::pow(beta0, -1.0 / (p - 1.0)) * std::pow(lorentz, 1.0 / (p - 1.0)) /
         std::pow(denom, 2.0 / (p - 1.0));
}

namespace {

struct SideSample {
  double value;  // fitted quantity before the k-dependent shift
  double logL;
  int side;
};

ExpansionFit fit_sides(const std::vector<SideSample>& samples, double p, const ExpansionOptions& opts) {
  int n_minus = 0;
  int n_plus = 0;
  double Lmin = std::numeric_limits<double>::infinity();
  double Lmax = 0.0;
  for (const auto& s : samples) {
    (s.side < 0 ? n_minus : n_plus)++;
    Lmin = std::min(Lmin, std::exp(s.logL));
    Lmax = std::max(Lmax, std::exp(s.logL));
  }
  if (n_minus < 2 || n_plus < 2) throw Error(ErrorKind::InsufficientRange, "need samples on both sides of x0");
  if (!(Lmax >= 10.0 * Lmin)) throw Error(ErrorKind::InsufficientRange, "|log|x-x0|| spans less than one decade");

  ExpansionFit best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int k = opts.k_min; k <= opts.k_max; ++k) {
    const double ek = (k - 1) * (p - 1.0) / 2.0;
    double sum[2] = {0, 0};
    int cnt[2] = {0, 0};
    for (const auto& s : samples) {
      const int idx = s.side < 0 ? 0 : 1;
      sum[idx] += s.value + ek * s.logL;
      ++cnt[idx];
    }
    const double c_minus = sum[0] / cnt[0];
    const double c_plus = sum[1] / cnt[1];
    double ss = 0.0;
    for (const auto& s : samples) {
      const double r = s.value + ek * s.logL - (s.side < 0 ? c_minus : c_plus);
      ss += r * r;
    }
    const double res = std::sqrt(ss / static_cast<double>(samples.size()));
    best.residual_by_k.push_back(res);
    if (res < best.residual) {
      best.residual = res;
      best.k = k;
      best.xi0 = (c_minus - c_plus) / 4.0;
      best.nu = std::exp(0.5 * (c_plus + c_minus));
    }
  }
  best.accepted = best.residual <= opts.max_residual;
  return best;
}

double curve_T_at(const BlowupCurve& curve, double X0) {
  const auto it = std::lower_bound(curve.X.begin(), curve.X.end(), X0);
  if (it == curve.X.end()) throw Error(ErrorKind::OutOfRange, "x0 beyond the curve samples");
  const std::size_t j = static_cast<std::size_t>(it - curve.X.begin());
  if (curve.X[j] == X0 || j == 0) return curve.T[j];
  const double w = (X0 - curve.X[j - 1]) / (curve.X[j] - curve.X[j - 1]);
  return (1.0 - w) * curve.T[j - 1] + w * curve.T[j];
}

}  // namespace

ExpansionFit characteristic_expansion_fit(const BlowupCurve& curve, const CoefficientModel& model, double x0,
                                          const ExpansionOptions& opts) {
  const double X0 = model.phi(x0);
  const double T0 = curve_T_at(curve, X0);
  if (!std::isfinite(T0)) throw Error(ErrorKind::Precondition, "no finite blow-up time at x0");
  std::vector<SideSample> samples;
  for (std::size_t j = 0; j < curve.X.size(); ++j) {
    const double dX = curve.X[j] - X0;
    if (std::abs(dX) <= 1e-12 * std::max(1.0, std::abs(X0)) || !std::isfinite(curve.T[j])) continue;
    const double dx = model.phi_inverse(curve.X[j]) - x0;
    const double delta = std::abs(dx);
    if (delta > opts.radius || delta >= 1.0) continue;
    const double D = curve.T[j] - T0 + std::abs(dX);
    if (!(D > 0.0)) continue;
    samples.push_back({std::log(D / std::abs(dX)), std::log(std::abs(std::log(delta))), dx < 0 ? -1 : 1});
  }
  return fit_sides(samples, model.p(), opts);
}

ExpansionFit characteristic_slope_fit(const BlowupCurve& curve, const CoefficientModel& model, double x0,
                                      const ExpansionOptions& opts) {
  const double X0 = model.phi(x0);
  std::vector<SideSample> samples;
  for (std::size_t j = 0; j < curve.X.size(); ++j) {
    const double dX = curve.X[j] - X0;
    if (std::abs(dX) <= 1e-12 * std::max(1.0, std::abs(X0)) || !std::isfinite(curve.T_prime[j])) continue;
    const double dx = model.phi_inverse(curve.X[j]) - x0;
    const double delta = std::abs(dx);
    if (delta > opts.radius || delta >= 1.0) continue;
    const int theta = dx < 0 ? -1 : 1;
    const double q = theta * (curve.T_prime[j] + theta);
    if (!(q > 0.0)) continue;
    // Same sign convention as the expansion fit: value = log nu - 2 theta xi0 - e_k log L.
    samples.push_back({std::log(q), std::log(std::abs(std::log(delta))), theta});
  }
  return fit_sides(samples, model.p(), opts);
}

void write_fit_json(const ProfileFit& fit, const std::string& distance_file, const std::string& path) {
  nlohmann::ordered_json j;
  j["x0"] = fit.x0;
  j["theta"] = fit.theta;
  j["d_hat"] = fit.d_hat_star;
  j["d_hat_expected"] = std::isfinite(fit.d_hat_expected) ? nlohmann::ordered_json(fit.d_hat_expected) : nullptr;
  j["mu0"] = fit.rate;
  j["distance"] = fit.distance;
  j["s_star"] = fit.s_star;
  j["converged"] = fit.converged;
  j["distance_series_file"] = distance_file;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

void write_distance_csv(const ProfileFit& fit, const std::string& path) {
  CsvWriter csv(path, {"s", "distance", "d_hat"});
  for (std::size_t k = 0; k < fit.s.size(); ++k) csv.row({fit.s[k], fit.distances[k], fit.d_hats[k]});
}

}  // namespace blowup
