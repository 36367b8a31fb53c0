#include "blowup/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

namespace {

constexpr int kPanelOrder = 20;
constexpr int kGeometricKnots = 40;
constexpr int kUniformKnots = 256;

const QuadratureRule& panel_rule() {
  static const QuadratureRule rule = gauss_legendre(kPanelOrder);
  return rule;
}

double central_difference(const ScalarFn& fn, double x) {
  double step = 1e-6 * (1.0 + std::abs(x));
  if (x > 0.0) step = std::min(step, 0.25 * x);
  if (x - step < 0.0) return (fn(x + step) - fn(x)) / step;
  return (fn(x + step) - fn(x - step)) / (2.0 * step);
}

}  // namespace

CoefficientModel::CoefficientModel(CoefficientData data) : data_(std::move(data)) {
  const auto& D = data_;
  if (!D.a) throw Error(ErrorKind::Validation, "coefficient a is required");
  if (!D.b) throw Error(ErrorKind::Validation, "coefficient b is required");
  if (!(D.p > 1.0)) throw Error(ErrorKind::Validation, "p must exceed 1");
  if (!(D.q < D.p)) throw Error(ErrorKind::Validation, "q must be smaller than p");
  if (!(D.M > 0.0)) throw Error(ErrorKind::Validation, "M must be positive");
  if (D.N < 1 || D.d < 1) throw Error(ErrorKind::Validation, "N and d must be positive integers");
  if (D.d >= 2 && !(D.p < (D.d + 3.0) / (D.d - 1.0)))
    throw Error(ErrorKind::Validation, "p must be subconformal: p < (d+3)/(d-1)");
  if (!(D.x_max > 0.0)) throw Error(ErrorKind::Validation, "x_max must be positive");
  if (D.origin_exponent && !(*D.origin_exponent < 2.0))
    throw Error(ErrorKind::DivergentIntegral, "1/sqrt(a) is not integrable at 0 for exponent >= 2");
  for (double x : {1e-9 * D.x_max, 1e-3 * D.x_max, 0.5 * D.x_max, D.x_max}) {
    if (!(D.a(x) > 0.0)) throw Error(ErrorKind::Validation, "a must be positive on (0, x_max]");
    if (!(D.b(x) > 0.0)) throw Error(ErrorKind::Validation, "b must be positive on (0, x_max]");
  }
  if (D.f && !D.F) data_.F = cached_antiderivative(D.f);

  // Knot table: geometric toward the origin, then uniform up to x_max.
  const double unit = D.x_max / kUniformKnots;
  for (int j = kGeometricKnots; j >= 1; --j) knots_.push_back(unit * std::ldexp(1.0, -j));
  for (int j = 1; j <= kUniformKnots; ++j) knots_.push_back(unit * j);
  knots_.back() = D.x_max;

  const auto inv_sqrt_a = [this](double y) { return 1.0 / std::sqrt(data_.a(y)); };
  knot_phi_.resize(knots_.size());
  knot_phi_[0] = phi_from_origin(knots_[0]);
  for (std::size_t k = 1; k < knots_.size(); ++k)
    knot_phi_[k] = knot_phi_[k - 1] + integrate_gl(inv_sqrt_a, knots_[k - 1], knots_[k], panel_rule());
  phi_max_ = knot_phi_.back();
}

double CoefficientModel::a(double x) const { return data_.a(x); }

double CoefficientModel::a_prime(double x) const {
  return data_.a_prime ? data_.a_prime(x) : central_difference(data_.a, x);
}

double CoefficientModel::b(double x) const { return data_.b(x); }

double CoefficientModel::b_prime(double x) const {
  return data_.b_prime ? data_.b_prime(x) : central_difference(data_.b, x);
}

double CoefficientModel::f(double u) const { return data_.f ? data_.f(u) : 0.0; }

double CoefficientModel::F(double u) const { return data_.F ? data_.F(u) : 0.0; }

double CoefficientModel::g(double x, double t, double v, double z) const {
  return data_.g ? data_.g(x, t, v, z) : 0.0;
}

double CoefficientModel::kappa0() const {
  const double p = data_.p;
  return std::pow(2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)), 1.0 / (p - 1.0));
}

double CoefficientModel::phi_from_origin(double x) const {
  if (x <= 0.0) return 0.0;
  const auto& rule = panel_rule();
  if (data_.origin_exponent) {
    // y = u^k with k = 2/(2-alpha): the integrand k u^{k-1} / sqrt(a(u^k)) is
    // constant for an exact power law and smooth for power-law-like a.
    const double k = 2.0 / (2.0 - *data_.origin_exponent);
    const double u_end = std::pow(x, 1.0 / k);
    const auto integrand = [&](double u) {
      if (u <= 0.0) return 0.0;
      const double y = std::pow(u, k);
      return k * std::pow(u, k - 1.0) / std::sqrt(data_.a(y));
    };
    constexpr int panels = 4;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i)
      sum += integrate_gl(integrand, u_end * i / panels, u_end * (i + 1) / panels, rule);
    return sum;
  }

  // Graded geometric panels [x r^{j+1}, x r^j], r = 1/2, with a geometric tail.
  const auto inv_sqrt_a = [this](double y) { return 1.0 / std::sqrt(data_.a(y)); };
  double total = 0.0;
  double prev = 0.0;
  double prev_ratio = 0.0;
  double hi = x;
  for (int j = 0; j < 4000; ++j) {
    const double lo = 0.5 * hi;
    const double c = integrate_gl(inv_sqrt_a, lo, hi, rule);
    if (!std::isfinite(c)) throw Error(ErrorKind::DivergentIntegral, "phi: non-finite panel");
    total += c;
    hi = lo;
    if (j >= 2) {
      const double ratio = c / prev;
      if (ratio >= 1.0 - 1e-9)
        throw Error(ErrorKind::DivergentIntegral, "phi: panel contributions do not decay");
      if (c < 1e-17 * total) return total;
      if (j >= 40 && std::abs(ratio - prev_ratio) < 1e-10 * ratio)
        return total + c * ratio / (1.0 - ratio);
      prev_ratio = ratio;
    }
    prev = c;
  }
  throw Error(ErrorKind::DivergentIntegral, "phi: graded quadrature did not converge");
}

double CoefficientModel::phi(double x) const {
  if (x < 0.0) throw Error(ErrorKind::Domain, "phi: x must be non-negative");
  if (x <= knots_.front()) return phi_from_origin(x);
  const auto inv_sqrt_a = [this](double y) { return 1.0 / std::sqrt(data_.a(y)); };
  if (x > knots_.back()) {
    // Beyond the table: continue with panels no wider than the uniform spacing.
    const double unit = data_.x_max / kUniformKnots;
    double sum = knot_phi_.back();
    double lo = knots_.back();
    while (lo < x) {
      const double hi = std::min(x, lo + unit);
      sum += integrate_gl(inv_sqrt_a, lo, hi, panel_rule());
      lo = hi;
    }
    return sum;
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (x == knots_[k]) return knot_phi_[k];
  return knot_phi_[k] + integrate_gl(inv_sqrt_a, knots_[k], x, panel_rule());
}

double CoefficientModel::phi_inverse(double X) const {
  if (X < 0.0) throw Error(ErrorKind::Domain, "phi_inverse: X must be non-negative");
  if (X == 0.0) return 0.0;
  if (X > phi_max_ * (1.0 + 1e-14))
    throw Error(ErrorKind::OutOfRange, "phi_inverse: X exceeds phi(x_max)");
  if (X >= phi_max_) return data_.x_max;

  double lo = 0.0;
  double hi = knots_.front();
  if (X > knot_phi_.front()) {
    const auto it = std::upper_bound(knot_phi_.begin(), knot_phi_.end(), X);
    const std::size_t k = static_cast<std::size_t>(it - knot_phi_.begin());
    lo = knots_[k - 1];
    hi = knots_[std::min(k, knots_.size() - 1)];
  }
  // Safeguarded Newton; phi' = 1/sqrt(a).
  double x = 0.5 * (lo + hi);
  const double tol = 1e-13 * (1.0 + X);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = phi(x) - X;
    if (std::abs(r) <= tol) return x;
    if (r > 0.0)
      hi = x;
    else
      lo = x;
    double next = x - r * std::sqrt(data_.a(x));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
    x = next;
  }
  return x;
}

double CoefficientModel::beta(double X) const { return data_.b(phi_inverse(X)); }

double CoefficientModel::beta_prime(double X) const {
  const double x = phi_inverse(X);
  return b_prime(x) * std::sqrt(data_.a(x));
}

double CoefficientModel::drift(double X) const {
  if (X <= 0.0) return 0.0;
  const double x = phi_inverse(X);
  const double sa = std::sqrt(data_.a(x));
  return (data_.N - 1) * sa / x - 0.5 * a_prime(x) / sa - (data_.d - 1) / X;
}

double CoefficientModel::G(double X, double t, double U_X, double U_t) const {
  if (!data_.g) return drift(X) * U_X;
  const double x = phi_inverse(X);
  const double sa = std::sqrt(data_.a(x));
  const double mismatch =
      X > 0.0 ? (data_.N - 1) * sa / x - 0.5 * a_prime(x) / sa - (data_.d - 1) / X : 0.0;
  return data_.g(x, t, U_X / sa, U_t) + mismatch * U_X;
}

int effective_dimension(const PowerLawCoefficient& coef) {
  if (!(coef.alpha < 2.0)) throw Error(ErrorKind::Domain, "power law requires alpha < 2");
  if (coef.N < 2)
    throw Error(ErrorKind::Domain, "power law requires N >= 2 (the admissibility condition fails for N = 1)");
  const double d = 2.0 * (coef.N - coef.alpha) / (2.0 - coef.alpha);
  const double rounded = std::round(d);
  if (std::abs(d - rounded) > 1e-12 || rounded < 1.0)
    throw Error(ErrorKind::NonIntegerDimension,
                "2(N-alpha)/(2-alpha) is not a positive integer; for N >= 3 use alpha = 2(k-N)/(k-2)");
  return static_cast<int>(rounded);
}

namespace {

void install_reaction_and_perturbations(CoefficientData& data, const ModelOptions& opts) {
  const double b0 = opts.b0;
  const double b1 = opts.b1;
  data.b = [b0, b1](double x) { return b0 + b1 * x; };
  data.b_prime = [b1](double) { return b1; };
  data.p = opts.p;
  data.q = opts.q;
  data.M = opts.M;
  data.x_max = opts.x_max;
  if (opts.perturbations) {
    const double M = opts.M;
    const double q = opts.q;
    data.f = [M, q](double u) { return M * std::copysign(std::pow(std::abs(u), q), u); };
    data.F = [M, q](double u) { return M * std::pow(std::abs(u), q + 1.0) / (q + 1.0); };
    data.g = [M](double, double, double v, double z) { return M * std::sin(v + z); };
  }
}

}  // namespace

CoefficientModel make_constant_model(int N, int d, const ModelOptions& opts) {
  CoefficientData data;
  data.a = [](double) { return 1.0; };
  data.a_prime = [](double) { return 0.0; };
  data.N = N;
  data.d = d;
  data.origin_exponent = 0.0;
  data.family = "constant";
  install_reaction_and_perturbations(data, opts);
  return CoefficientModel(std::move(data));
}

CoefficientModel make_power_law_model(const PowerLawCoefficient& coef, const ModelOptions& opts) {
  const int d = effective_dimension(coef);
  const double alpha = coef.alpha;
  CoefficientData data;
  data.a = [alpha](double x) { return std::pow(x, alpha); };
  data.a_prime = [alpha](double x) { return alpha == 0.0 ? 0.0 : alpha * std::pow(x, alpha - 1.0); };
  data.N = coef.N;
  data.d = d;
  data.origin_exponent = alpha;
  data.family = "power_law";
  install_reaction_and_perturbations(data, opts);
  return CoefficientModel(std::move(data));
}

CoefficientModel make_tabulated_model(const std::string& path, int N, int d,
                                      const ModelOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open tabulated coefficient file " + path);
  std::vector<double> xs;
  std::vector<double> as;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double x = 0.0;
    double a = 0.0;
    if (!(row >> x >> a)) continue;
    if (!(x > 0.0) || !(a > 0.0))
      throw Error(ErrorKind::Validation, "tabulated coefficient needs x > 0 and a > 0");
    if (!xs.empty() && !(x > xs.back()))
      throw Error(ErrorKind::Validation, "tabulated coefficient x must be strictly increasing");
    xs.push_back(x);
    as.push_back(a);
  }
  if (xs.size() < 2) throw Error(ErrorKind::Validation, "tabulated coefficient needs >= 2 rows");

  // Log-log linear interpolation, power-law extrapolation toward the origin.
  std::vector<double> lx(xs.size());
  std::vector<double> la(as.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx[i] = std::log(xs[i]);
    la[i] = std::log(as[i]);
  }
  const double origin_slope = (la[1] - la[0]) / (lx[1] - lx[0]);
  const double x_last = xs.back();
  CoefficientData data;
  data.a = [lx, la, origin_slope, x_last](double x) {
    if (x > x_last * (1.0 + 1e-12))
      throw Error(ErrorKind::OutOfRange, "tabulated coefficient evaluated beyond last row");
    const double l = std::log(x);
    if (l <= lx.front()) return std::exp(la.front() + origin_slope * (l - lx.front()));
    const auto it = std::upper_bound(lx.begin(), lx.end(), l);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - lx.begin()), lx.size() - 1);
    const double w = (l - lx[k - 1]) / (lx[k] - lx[k - 1]);
    return std::exp(la[k - 1] + w * (la[k] - la[k - 1]));
  };
  data.N = N;
  data.d = d;
  if (origin_slope < 2.0) data.origin_exponent = origin_slope;
  data.family = "tabulated";
  ModelOptions o = opts;
  o.x_max = std::min(opts.x_max, x_last);
  install_reaction_and_perturbations(data, o);
  return CoefficientModel(std::move(data));
}

ScalarFn cached_antiderivative(ScalarFn f, double u_max) {
  // Geometric lattice in |u| from 1e-6 to u_max, 32 points per octave.
  std::vector<double> lattice{0.0};
  for (double u = 1e-6; u < u_max; u *= std::exp2(1.0 / 32.0)) lattice.push_back(u);
  lattice.push_back(u_max);
  const auto& rule = panel_rule();
  std::vector<double> pos(lattice.size(), 0.0);
  std::vector<double> neg(lattice.size(), 0.0);
  for (std::size_t k = 1; k < lattice.size(); ++k) {
    pos[k] = pos[k - 1] + integrate_gl(f, lattice[k - 1], lattice[k], rule);
    neg[k] = neg[k - 1] + integrate_gl(f, -lattice[k], -lattice[k - 1], rule);
  }
  return [f = std::move(f), lattice, pos, neg](double u) {
    const double m = std::abs(u);
    if (m >= lattice.back()) {
      const double base = u > 0 ? pos.back() : -neg.back();
      const double start = u > 0 ? lattice.back() : -lattice.back();
      return base + integrate_gl(f, start, u, panel_rule());
    }
    const auto it = std::upper_bound(lattice.begin(), lattice.end(), m);
    const std::size_t k = static_cast<std::size_t>(it - lattice.begin());
    const double x0 = lattice[k - 1];
    const double x1 = lattice[k];
    // Cubic Hermite in |u| with the exact derivative f.
    const double sgn = u >= 0 ? 1.0 : -1.0;
    const double F0 = u >= 0 ? pos[k - 1] : -neg[k - 1];
    const double F1 = u >= 0 ? pos[k] : -neg[k];
    const double d0 = f(sgn * x0) * sgn;
    const double d1 = f(sgn * x1) * sgn;
    const double hgt = x1 - x0;
    const double t = (m - x0) / hgt;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    // F(-m) = -int_{-m}^0 f, tabulated as -neg, so the derivative in m is -f(-m).
    return h00 * F0 + h10 * hgt * d0 + h01 * F1 + h11 * hgt * d1;
  };
}

AdmissibilityReport check_admissibility(const CoefficientModel& model, double x_max, int samples) {
  if (samples < 2) throw Error(ErrorKind::Precondition, "check_admissibility needs >= 2 samples");
  AdmissibilityReport report;
  report.bound = model.M();
  const double lo = std::log10(x_max) - 8.0;
  const double hi = std::log10(x_max);
  for (int i = 0; i < samples; ++i) {
    const double x = std::pow(10.0, lo + (hi - lo) * i / (samples - 1));
    const double a = model.a(x);
    if (!(a > 0.0)) throw Error(ErrorKind::Evaluation, "a(x) <= 0 at a lattice sample");
    const double sa = std::sqrt(a);
    const double v = std::abs((model.N() - 1) * sa / x - 0.5 * model.a_prime(x) / sa -
                              (model.d() - 1) / model.phi(x));
    report.lattice.push_back(x);
    report.values.push_back(v);
    report.sup_all = std::max(report.sup_all, v);
    if (x <= 1.0) report.sup_unit = std::max(report.sup_unit, v);
  }
  report.pass = report.sup_all <= report.bound;
  return report;
}

BoundReport check_perturbation_bounds(const CoefficientModel& model) {
  BoundReport report;
  const double M = model.M();
  const double q = model.q();
  std::vector<double> mags{0.0};
  for (double m = 1e-3; m <= 1e6; m *= 10.0) mags.push_back(m);
  for (double m : mags) {
    for (double u : {m, -m}) {
      report.worst_f_ratio =
          std::max(report.worst_f_ratio, std::abs(model.f(u)) / (M * (1.0 + std::pow(std::abs(u), q))));
    }
  }
  for (double x : {1e-6 * model.x_max(), 1e-2 * model.x_max(), 0.5 * model.x_max(), model.x_max()}) {
    const double sa = std::sqrt(model.a(x));
    for (double t : {0.0, 0.5}) {
      for (double v : mags) {
        for (double z : mags) {
          for (double sv : {1.0, -1.0}) {
            const double val = std::abs(model.g(x, t, sv * v, -z));
            report.worst_g_ratio =
                std::max(report.worst_g_ratio, val / (M * (1.0 + std::abs(v) * sa + std::abs(z))));
          }
        }
      }
    }
  }
  report.pass = report.worst_f_ratio <= 1.0 + 1e-12 && report.worst_g_ratio <= 1.0 + 1e-12;
  return report;
}

}  // namespace blowup
