#include "blowup/normspaces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "blowup/error.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

namespace {

constexpr double kPi = std::numbers::pi;

/// Surface measure of the unit sphere S^{k}.
double sphere_area(int k) { return 2.0 * std::pow(kPi, (k + 1) / 2.0) / std::tgamma((k + 1) / 2.0); }

const QuadratureRule& gl(int n) {
  static const QuadratureRule r8 = gauss_legendre(8);
  static const QuadratureRule r4 = gauss_legendre(4);
  static const QuadratureRule r32 = gauss_legendre(32);
  return n == 8 ? r8 : (n == 4 ? r4 : r32);
}

double sin_power_integral(double theta, int k) {
  // int_0^theta sin^k
  if (k == 0) return theta;
  if (k == 1) return 1.0 - std::cos(theta);
  return integrate_gl([k](double t) { return std::pow(std::sin(t), k); }, 0.0, theta, gl(32));
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo);
  double e = lo + g * (hi - lo);
  double fc = f(c);
  double fe = f(e);
  for (int it = 0; it < 40; ++it) {
    if (fc > fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + g * (hi - lo);
      fe = f(e);
    }
  }
  return std::max(fc, fe);
}

double sampled_sup(const std::function<double(double)>& f, double lo, double hi, double step) {
  if (hi < lo) throw Error(ErrorKind::Precondition, "radial grid too short for the supremum range");
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  double best = -1.0;
  double at = lo;
  for (int i = 0; i <= n; ++i) {
    const double r0 = lo + step * i;
    const double v = f(r0);
    if (v > best) {
      best = v;
      at = r0;
    }
  }
  const double v_hi = f(hi);
  if (v_hi > best) {
    best = v_hi;
    at = hi;
  }
  return std::max(best, golden_max(f, std::max(lo, at - step), std::min(hi, at + step)));
}

}  // namespace

double RadialFunction::operator()(double r) const {
  if (r < 0.0) r = -r;
  const double x = r / h;
  const auto j = static_cast<std::size_t>(std::floor(x));
  if (j + 1 >= values.size()) return j + 1 == values.size() && x == static_cast<double>(j) ? values.back() : 0.0;
  const double w = x - static_cast<double>(j);
  return (1.0 - w) * values[j] + w * values[j + 1];
}

RadialFunction sample_radial(const std::function<double(double)>& u, double R, double h, int d, std::string label) {
  if (!(h > 0.0) || !(R > h)) throw Error(ErrorKind::Precondition, "need 0 < h < R");
  RadialFunction f;
  f.h = h;
  f.d = d;
  f.label = std::move(label);
  const auto n = static_cast<std::size_t>(std::llround(R / h)) + 1;
  f.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    f.values[j] = u(h * static_cast<double>(j));
    if (!std::isfinite(f.values[j])) throw Error(ErrorKind::Precondition, "radial values must be finite");
  }
  return f;
}

double ball_slice_measure(double r, double r0, int d) {
  if (d < 1) throw Error(ErrorKind::Precondition, "dimension must be positive");
  if (r < 0.0 || r0 < 0.0) return 0.0;
  if (d == 1) return (std::abs(r - r0) < 1.0 ? 1.0 : 0.0) + (r + r0 < 1.0 ? 1.0 : 0.0);
  if (std::abs(r - r0) >= 1.0) return 0.0;
  if (r + r0 <= 1.0) return sphere_area(d - 1) * std::pow(r, d - 1);
  if (d == 3) return kPi * r / r0 * (1.0 - (r - r0) * (r - r0));
  const double c = std::clamp((r * r + r0 * r0 - 1.0) / (2.0 * r * r0), -1.0, 1.0);
  const double theta = std::acos(c);
  if (d == 2) return 2.0 * r * theta;
  return sphere_area(d - 2) * std::pow(r, d - 1) * sin_power_integral(theta, d - 2);
}

double ball_integral(const RadialFunction& u, double r0) {
  const double lo = std::max(0.0, r0 - 1.0);
  const double hi = std::min(r0 + 1.0, u.R());
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  if (1.0 - r0 > lo && 1.0 - r0 < hi) cuts.push_back(1.0 - r0);
  for (double r = std::ceil(lo / u.h) * u.h; r < hi; r += u.h)
    if (r > lo) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  const auto& rule = gl(8);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double half = 0.5 * (cuts[i + 1] - cuts[i]);
    if (!(half > 0.0)) continue;
    // r = mid + half sin(pi xi / 2) absorbs square-root endpoint behaviour.
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double r = mid + half * std::sin(0.5 * kPi * xi);
      const double jac = half * 0.5 * kPi * std::cos(0.5 * kPi * xi);
      const double v = u(r);
      sum += rule.weights[q] * jac * v * v * ball_slice_measure(r, r0, u.d);
    }
  }
  return sum;
}

double window_integral(const RadialFunction& u, double r0) {
  if (!(r0 > 0.0)) throw Error(ErrorKind::Precondition, "window centre must be positive");
  const double lo = std::max(0.0, r0 - 1.0);
  const double hi = std::min(r0 + 1.0, u.R());
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double r = std::ceil(lo / u.h) * u.h; r < hi; r += u.h)
    if (r > lo) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  const auto& rule = gl(4);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    sum += integrate_gl(
        [&](double r) {
          const double v = u(r);
          return v * v * std::pow(r, u.d - 1);
        },
        cuts[i], cuts[i + 1], rule);
  }
  return sum / std::pow(r0, u.d - 1);
}

double norm_A(const RadialFunction& u) {
  return sampled_sup([&](double r0) { return ball_integral(u, r0); }, 0.0, std::max(0.0, u.R() - 1.0), 0.05);
}

double norm_B(const RadialFunction& u) {
  if (u.R() < 2.0) throw Error(ErrorKind::Precondition, "norm_B needs R >= 2");
  return sampled_sup([&](double r0) { return window_integral(u, r0); }, 1.0, u.R() - 1.0, 0.05);
}

EquivalenceReport equivalence_check(const std::vector<RadialFunction>& family, int d) {
  EquivalenceReport rep;
  rep.d = d;
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  for (const auto& f : family) {
    if (f.d != d) throw Error(ErrorKind::Precondition, "family member has a different dimension");
    const double A = norm_A(f);
    const double B = norm_B(f);
    if (!(A > 0.0) || !(B > 0.0)) continue;
    const double r = A / B;
    rep.ratios.push_back(r);
    if (r < rep.ratio_min) {
      rep.ratio_min = r;
      rep.witness_min = f.label;
    }
    if (r > rep.ratio_max) {
      rep.ratio_max = r;
      rep.witness_max = f.label;
    }
  }
  if (rep.ratios.empty()) throw Error(ErrorKind::DegenerateFamily, "all norms vanish on the family");
  rep.family_size = rep.ratios.size();
  rep.alpha_bar = rep.ratio_max;
  rep.beta_bar = 1.0 / rep.ratio_min;
  return rep;
}

std::vector<RadialFunction> stress_family(int d, double R, double h) {
  std::vector<RadialFunction> fam;
  for (int c = 1; c <= 20; ++c) {
    fam.push_back(sample_radial([c](double r) { return std::exp(-(r - c) * (r - c) / 0.25); }, R, h, d,
                                "bump_r" + std::to_string(c)));
  }
  for (int i = 0; i < 10; ++i) {
    const double sigma = 0.3 + 0.5 * i;
    fam.push_back(sample_radial([sigma](double r) { return std::exp(-r * r / (2.0 * sigma * sigma)); }, R, h, d,
                                "gauss_sigma" + std::to_string(i)));
  }
  for (int i = 0; i < 10; ++i) {
    const double decay = 0.25 * (i % 5);
    const double omega = 1.0 + 2.0 * (i / 5) + 0.7 * i;
    fam.push_back(sample_radial(
        [decay, omega](double r) { return std::pow(1.0 + r, -decay) * std::cos(omega * r); }, R, h, d,
        "osc_tail" + std::to_string(i)));
  }
  for (int i = 0; i < 10; ++i) {
    const double edge = 1.0 + 2.0 * i;
    fam.push_back(sample_radial([edge](double r) { return 0.5 * (1.0 - std::tanh(4.0 * (r - edge))); }, R, h, d,
                                "plateau" + std::to_string(i)));
  }
  return fam;
}

int crown_disk_count(double r0) {
  if (!(r0 >= 1.0)) throw Error(ErrorKind::Precondition, "crown radius must be >= 1");
  return static_cast<int>(std::floor(kPi / std::asin(1.0 / r0) + 1e-12));
}

void write_norms_json(const std::vector<EquivalenceReport>& reports, const std::string& path) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["d"] = r.d;
    j["family_size"] = r.family_size;
    j["ratio_min"] = r.ratio_min;
    j["ratio_max"] = r.ratio_max;
    j["alpha_bar"] = r.alpha_bar;
    j["beta_bar"] = r.beta_bar;
    j["witness_functions"] = {r.witness_min, r.witness_max};
    arr.push_back(j);
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << arr.dump(2) << '\n';
}

}  // namespace blowup
