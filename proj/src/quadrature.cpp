#include "blowup/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "blowup/error.hpp"

namespace blowup {

double jacobi_weight_mass(double alpha, double beta) {
  return std::exp2(alpha + beta + 1.0) * std::beta(alpha + 1.0, beta + 1.0);
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw Error(ErrorKind::Precondition, "gauss_jacobi: n must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw Error(ErrorKind::NonIntegrableWeight, "gauss_jacobi: exponents must exceed -1");

  // Golub-Welsch on the symmetric Jacobi matrix of the monic recurrence.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double two_k_ab = 2.0 * k + ab;
    if (k == 0)
      diag(k) = (beta - alpha) / (ab + 2.0);
    else
      diag(k) = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double two_k_ab = 2.0 * k + ab;
    double b;
    if (k == 1) {
      b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
          (two_k_ab * two_k_ab * (two_k_ab + 1.0) * (two_k_ab - 1.0));
    }
    sub(k - 1) = std::sqrt(b);
  }

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mass = jacobi_weight_mass(alpha, beta);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mass;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = values(k);
    rule.weights[k] = mass * vectors(0, k) * vectors(0, k);
  }
  return rule;
}

QuadratureRule gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_jacobi(n, 0.0, 0.0)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& fn, double lo, double hi,
                    const QuadratureRule& legendre) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < legendre.size(); ++i)
    sum += legendre.weights[i] * fn(mid + half * legendre.nodes[i]);
  return sum * half;
}

BarycentricInterpolant::BarycentricInterpolant(std::vector<double> nodes)
    : nodes_(std::move(nodes)), weights_(nodes_.size()) {
  const std::size_t n = nodes_.size();
  // Products are accumulated in log space; only ratios of weights matter.
  std::vector<double> log_mag(n, 0.0);
  std::vector<int> sign(n, 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const double diff = nodes_[j] - nodes_[k];
      if (diff == 0.0) throw Error(ErrorKind::Precondition, "interpolation nodes must be distinct");
      log_mag[j] -= std::log(std::abs(diff));
      if (diff < 0.0) sign[j] = -sign[j];
    }
  }
  const double shift = *std::max_element(log_mag.begin(), log_mag.end());
  for (std::size_t j = 0; j < n; ++j) weights_[j] = sign[j] * std::exp(log_mag[j] - shift);
}

std::vector<double> BarycentricInterpolant::evaluate(const std::vector<double>& values,
                                                     const std::vector<double>& targets) const {
  std::vector<double> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double x = targets[t];
    double num = 0.0;
    double den = 0.0;
    bool exact = false;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      const double diff = x - nodes_[j];
      if (diff == 0.0) {
        out[t] = values[j];
        exact = true;
        break;
      }
      const double c = weights_[j] / diff;
      num += c * values[j];
      den += c;
    }
    if (!exact) out[t] = num / den;
  }
  return out;
}

}  // namespace blowup
