#include <cmath>
#include <numbers>

#include "blowup/quadrature.hpp"
#include "blowup/weighted_quadrature.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

namespace {

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto r = gauss_legendre(10);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 18);
  CHECK(s == Approx(2.0 / 19.0).epsilon(1e-14));
  CHECK(integrate_gl([](double x) { return std::exp(x); }, 0.0, 1.0, r) == Approx(std::numbers::e - 1.0));
}

TEST_CASE("Gauss-Jacobi weights are positive and sum to the weight mass") {
  for (double a : {-0.5, 0.0, 1.0, 3.0})
    for (double b : {-0.5, 0.5, 2.0}) {
      const auto r = gauss_jacobi(32, a, b);
      double s = 0.0;
      for (double w : r.weights) {
        CHECK(w > 0.0);
        s += w;
      }
      CHECK(s == Approx(jacobi_weight_mass(a, b)).epsilon(1e-12));
      for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
  CHECK_THROWS(gauss_jacobi(8, -1.0, 0.0));
}

TEST_CASE("rho rule against Beta values for polynomial moments") {
  for (double p : {2.0, 3.0, 5.0}) {
    const double alpha = 2.0 / (p - 1.0);
    const auto& rule = weighted_rule(WeightKind::Rho, p, 1);
    CHECK(rule.mass() == Approx(beta_fn(0.5, alpha + 1.0)).epsilon(1e-12));
    CHECK(rho_mass_exact(p) == Approx(beta_fn(0.5, alpha + 1.0)).epsilon(1e-14));
    for (int m : {2, 4, 10}) {
      std::vector<double> g;
      for (double y : rule.nodes) g.push_back(std::pow(y, m));
      CHECK(rule.integrate(g) == Approx(beta_fn((m + 1) / 2.0, alpha + 1.0)).epsilon(1e-12));
    }
    std::vector<double> odd;
    for (double y : rule.nodes) odd.push_back(y * y * y);
    CHECK(std::abs(rule.integrate(odd)) < 1e-14);
  }
}

TEST_CASE("singular integral against the reduced weight") {
  const auto& rule = weighted_rule(WeightKind::Rho, 3.0, 1);
  REQUIRE(rule.singular);
  std::vector<double> one(rule.size(), 1.0);
  // int (1-y^2)^{0} dy = 2
  CHECK(rule.integrate_singular(one) == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("rho0 rule") {
  CHECK(rho0_exponent(3.0, 2) == Approx(0.5));
  for (double p : {2.0, 3.0, 5.0})
    for (int d : {2, 3}) {
      const double c = rho0_exponent(p, d);
      const auto& rule = weighted_rule(WeightKind::Rho0, p, d);
      CHECK(rule.mass() == Approx(0.5 * beta_fn(d / 2.0, c + 1.0)).epsilon(1e-12));
      for (double w : rule.weights) CHECK(w > 0.0);
      for (double y : rule.nodes) CHECK((y > 0.0 && y < 1.0));
    }
  CHECK_ERROR_KIND(weighted_rule(WeightKind::Rho0, 5.0, 5), ErrorKind::NonIntegrableWeight);
}

TEST_CASE("barycentric interpolation reproduces polynomials") {
  const auto r = gauss_legendre(12);
  const BarycentricInterpolant b(r.nodes);
  std::vector<double> v;
  for (double x : r.nodes) v.push_back(1.0 + x - 3.0 * std::pow(x, 5));
  const auto out = b.evaluate(v, {-0.9, 0.0, 0.33, r.nodes[3]});
  CHECK(out[0] == Approx(1.0 - 0.9 + 3.0 * std::pow(0.9, 5)).epsilon(1e-12));
  CHECK(out[1] == Approx(1.0).epsilon(1e-12));
  CHECK(out[2] == Approx(1.33 - 3.0 * std::pow(0.33, 5)).epsilon(1e-12));
  CHECK(out[3] == Approx(v[3]));
}
