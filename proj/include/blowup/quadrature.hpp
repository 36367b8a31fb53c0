#pragma once

#include <functional>
#include <vector>

namespace blowup {

/// Nodes ascending on [-1, 1]; weights integrate against the rule's weight function.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1].
/// Requires alpha, beta > -1.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

QuadratureRule gauss_legendre(int n);

/// Integral over [-1, 1] of (1-x)^alpha (1+x)^beta.
double jacobi_weight_mass(double alpha, double beta);

/// Fixed-order Gauss-Legendre integral of fn over [lo, hi].
double integrate_gl(const std::function<double(double)>& fn, double lo, double hi,
                    const QuadratureRule& legendre);

/// Barycentric Lagrange interpolation through arbitrary distinct nodes.
class BarycentricInterpolant {
 public:
  explicit BarycentricInterpolant(std::vector<double> nodes);

  /// Values of the interpolant of `values` (sampled at the nodes) at `targets`.
  std::vector<double> evaluate(const std::vector<double>& values,
                               const std::vector<double>& targets) const;

  const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace blowup
