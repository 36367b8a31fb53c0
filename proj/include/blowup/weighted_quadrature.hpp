#pragma once

#include <vector>

namespace blowup {

enum class WeightKind {
  Rho,     ///< (1-y^2)^{2/(p-1)} on (-1, 1)
  Rho0,    ///< (1-y^2)^{2/(p-1)-(d-1)/2} y^{d-1} on (0, 1)
  RPower,  ///< y^{d-1} on (0, 1)
  Plain,   ///< 1 on (-1, 1)
};

/// Gauss-Jacobi-type rule for one of the similarity-variable weights.
///
/// The rule is built for the reduced weight w(y)/(1-y^2) whenever that is
/// still integrable, so both int g w and int g w/(1-y^2) are available from
/// the same nodes.
struct WeightedQuadrature {
  WeightKind kind = WeightKind::Rho;
  double p = 3.0;
  int d = 1;
  std::vector<double> nodes;
  std::vector<double> weights;  ///< for the reduced weight when `singular` is true
  bool singular = false;

  std::size_t size() const { return nodes.size(); }
  /// int g w dy
  double integrate(const std::vector<double>& g) const;
  /// int g w / (1-y^2) dy; throws NonIntegrableWeight unless `singular`.
  double integrate_singular(const std::vector<double>& g) const;
  /// int w dy computed by the rule
  double mass() const;
};

/// 2/(p-1) - (d-1)/2
double rho0_exponent(double p, int d);

/// Shared, cached rules. n defaults to 128 nodes.
const WeightedQuadrature& weighted_rule(WeightKind kind, double p, int d, int n = 128);

/// Closed forms: B(1/2, 2/(p-1)+1) and B(d/2, c+1)/2.
double rho_mass_exact(double p);
double rho0_mass_exact(double p, int d);

}  // namespace blowup
