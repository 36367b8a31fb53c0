#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace blowup {

using ScalarFn = std::function<double(double)>;
/// g(x, t, v, z) with v = d_x u and z = d_t u.
using PerturbationFn = std::function<double(double, double, double, double)>;

/// Raw problem data. Empty callables mean "zero" for f, F, g and "use central
/// differences" for a' and b'.
struct CoefficientData {
  ScalarFn a;
  ScalarFn a_prime;
  ScalarFn b;
  ScalarFn b_prime;
  ScalarFn f;
  ScalarFn F;
  PerturbationFn g;
  int N = 1;
  int d = 1;
  double p = 3.0;
  double q = 1.0;
  double M = 1.0;
  double x_max = 10.0;
  /// When a(x) behaves like x^alpha at the origin, phi near 0 is integrated
  /// after the substitution y = u^{2/(2-alpha)}, which makes the integrand regular.
  std::optional<double> origin_exponent;
  std::string family = "custom";
};

/// Immutable coefficient set for the degenerate wave equation together with the
/// arclength map phi(x) = int_0^x dy / sqrt(a(y)) and its inverse.
class CoefficientModel {
 public:
  explicit CoefficientModel(CoefficientData data);

  double a(double x) const;
  double a_prime(double x) const;
  double b(double x) const;
  double b_prime(double x) const;
  double f(double u) const;
  double F(double u) const;
  double g(double x, double t, double v, double z) const;
  bool has_source() const { return static_cast<bool>(data_.f); }
  bool has_gradient_term() const { return static_cast<bool>(data_.g); }

  int N() const { return data_.N; }
  int d() const { return data_.d; }
  double p() const { return data_.p; }
  double q() const { return data_.q; }
  double M() const { return data_.M; }
  double x_max() const { return data_.x_max; }
  double X_max() const { return phi_max_; }
  const std::string& family() const { return data_.family; }

  /// (2 (p+1) / (p-1)^2)^{1/(p-1)}
  double kappa0() const;

  double phi(double x) const;
  double phi_inverse(double X) const;

  /// beta(X) = b(phi^{-1}(X)) and its X-derivative b'(x) sqrt(a(x)).
  double beta(double X) const;
  double beta_prime(double X) const;

  /// (N-1) sqrt(a)/x - a'/(2 sqrt(a)) - (d-1)/phi(x) at x = phi^{-1}(X); the part
  /// of the first-order coefficient that is moved into G.
  double drift(double X) const;

  /// Full G(X, t, U_X, U_t) of the transformed equation.
  double G(double X, double t, double U_X, double U_t) const;

 private:
  double phi_from_origin(double x) const;

  CoefficientData data_;
  std::vector<double> knots_;
  std::vector<double> knot_phi_;
  double phi_max_ = 0.0;
};

struct PowerLawCoefficient {
  double alpha = 0.0;
  int N = 2;
};

/// d = 2 (N - alpha) / (2 - alpha); throws unless it is a positive integer.
int effective_dimension(const PowerLawCoefficient& coef);

struct ModelOptions {
  double p = 3.0;
  double q = 1.0;
  double M = 1.0;
  double x_max = 10.0;
  double b0 = 1.0;  ///< b(x) = b0 + b1 x
  double b1 = 0.0;
  bool perturbations = false;  ///< enable the test family f = M sign(u)|u|^q, g = M sin(v + z)
};

CoefficientModel make_constant_model(int N, int d, const ModelOptions& opts);
CoefficientModel make_power_law_model(const PowerLawCoefficient& coef, const ModelOptions& opts);
/// Two-column text file (x, a(x)) with strictly increasing x > 0.
CoefficientModel make_tabulated_model(const std::string& path, int N, int d,
                                      const ModelOptions& opts);

/// Antiderivative F(u) = int_0^u f, tabulated on a symmetric geometric lattice
/// and interpolated; falls back to direct quadrature outside the lattice.
ScalarFn cached_antiderivative(ScalarFn f, double u_max = 1e6);

struct AdmissibilityReport {
  std::vector<double> lattice;
  std::vector<double> values;
  double sup_all = 0.0;
  double sup_unit = 0.0;  ///< restricted to (0, 1]
  double bound = 0.0;
  bool pass = false;
};

/// Samples |(N-1) sqrt(a)/x - a'/(2 sqrt(a)) - (d-1)/phi| on a log-spaced lattice
/// in (0, x_max] (8 decades) and compares the supremum with M.
AdmissibilityReport check_admissibility(const CoefficientModel& model, double x_max, int samples);

struct BoundReport {
  double worst_f_ratio = 0.0;  ///< max |f(u)| / (M (1 + |u|^q))
  double worst_g_ratio = 0.0;  ///< max |g| / (M (1 + |v| sqrt(a) + |z|))
  bool pass = false;
};

BoundReport check_perturbation_bounds(const CoefficientModel& model);

}  // namespace blowup
