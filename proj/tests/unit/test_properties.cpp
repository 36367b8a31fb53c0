#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "blowup/blowup_curve.hpp"
#include "blowup/coefficients.hpp"
#include "blowup/profiles.hpp"
#include "blowup/soliton_dynamics.hpp"
#include "blowup/weighted_quadrature.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

TEST_CASE("property: soliton forces telescope to zero") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> gap(0.05, 3.0), start(-5.0, 5.0), pd(1.2, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    SolitonState st;
    st.p = pd(rng);
    st.c1 = gap(rng);
    const int k = 2 + trial % 5;
    double x = start(rng);
    for (int i = 0; i < k; ++i) st.xi.push_back(x += gap(rng));
    const auto r = ode_rhs(st);
    double scale = 0.0;
    for (double v : r) scale += std::abs(v);
    CHECK(std::abs(std::accumulate(r.begin(), r.end(), 0.0)) <= 1e-14 * (1.0 + scale));
    // The outermost centres are pushed apart.
    CHECK(r.front() < 0.0);
    CHECK(r.back() > 0.0);
  }
}

TEST_CASE("property: solitons are stationary for random parameters") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> dd(-0.95, 0.95), yy(-0.999, 0.999);
  for (double p : {2.0, 3.0, 5.0, 7.0})
    for (int trial = 0; trial < 300; ++trial) {
      const double d = dd(rng), y = yy(rng);
      CHECK(kappa(d, y, p) > 0.0);
      CHECK(std::abs(soliton_stationary_residual(d, y, p)) <= 1e-9 * (1.0 + kappa(d, y, p)));
    }
}

TEST_CASE("property: rho rules integrate even polynomials exactly") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (double p : {2.0, 3.0, 5.0}) {
    const auto& rule = weighted_rule(WeightKind::Rho, p, 1, 32);
    const double a = 2.0 / (p - 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> c(8);
      for (double& v : c) v = coef(rng);
      double exact = 0.0;
      for (std::size_t m = 0; m < c.size(); ++m)
        exact += c[m] * std::exp(std::lgamma(m + 0.5) + std::lgamma(a + 1.0) - std::lgamma(m + a + 1.5));
      std::vector<double> g;
      for (double y : rule.nodes) {
        double v = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) v += c[m] * std::pow(y, 2.0 * m);
        g.push_back(v);
      }
      CHECK(rule.integrate(g) == Approx(exact).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("property: phi is increasing for power-law coefficients") {
  for (double alpha : {0.0, 0.5, 1.0, 1.5}) {
    const PowerLawCoefficient pc{alpha, 2};
    REQUIRE(effective_dimension(pc) == 2);
    ModelOptions o;
    o.x_max = 3.0;
    const auto m = make_power_law_model(pc, o);
    double prev = -1.0;
    for (int i = 0; i <= 60; ++i) {
      const double X = m.phi(3.0 * i / 60.0);
      CHECK(X > prev);
      prev = X;
    }
  }
}

TEST_CASE("property: 1-Lipschitz curves have bounded slope estimates") {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> slope(-1.0, 1.0);
  std::vector<double> X, T;
  double t = 2.0;
  for (int i = 0; i <= 500; ++i) {
    X.push_back(0.01 * i);
    T.push_back(t);
    t += 0.01 * slope(rng);
  }
  const auto c = make_curve(X, T);
  CHECK(c.lipschitz_constant() <= 1.0 + 1e-12);
  for (double tp : c.T_prime) CHECK(std::abs(tp) <= 1.0 + 1e-12);
}
