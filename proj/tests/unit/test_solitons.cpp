#include <cmath>
#include <numbers>
#include <numeric>

#include "blowup/soliton_dynamics.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

TEST_CASE("right-hand side") {
  const auto r = ode_rhs({{-1.0, 1.0}, 1.0, 1.0, 3.0});
  CHECK(r[0] == Approx(-std::exp(-2.0)));
  CHECK(r[1] == Approx(std::exp(-2.0)));
  const auto eq = ode_rhs({{0.0, 1.0, 2.0, 3.0}, 1.0, 1.0, 3.0});
  CHECK(std::abs(eq[1]) < 1e-15);
  CHECK(std::abs(eq[2]) < 1e-15);
  CHECK(std::abs(std::accumulate(eq.begin(), eq.end(), 0.0)) < 1e-15);
  CHECK_ERROR_KIND(ode_rhs({{0.0, 0.0}, 1.0, 1.0, 3.0}), ErrorKind::Precondition);
}

TEST_CASE("explicit solution") {
  const auto a = ansatz_offsets(2, 3.0, 1.0);
  CHECK(a[1] == Approx(0.5 * std::log(2.0)));
  CHECK(a[0] + a[1] == Approx(0.0));
  for (double p : {2.0, 3.0, 5.0})
    for (int k : {2, 3, 4, 5}) {
      const auto o = ansatz_offsets(k, p, 0.7);
      CHECK(std::abs(std::accumulate(o.begin(), o.end(), 0.0)) < 1e-12);
      for (double s : {10.0, 1e3}) {
        const auto xi = explicit_ansatz(k, p, 0.7, s);
        CHECK(std::abs(std::accumulate(xi.begin(), xi.end(), 0.0)) < 1e-12);
        const auto rhs = ode_rhs({xi, s, 0.7, p});
        for (int i = 0; i < k; ++i) CHECK(rhs[i] == Approx((i + 1 - 0.5 * (k + 1)) * 0.5 * (p - 1.0) / s));
      }
    }
  const auto g1 = explicit_ansatz(2, 3.0, 1.0, 10.0), g2 = explicit_ansatz(2, 3.0, 1.0, 20.0);
  CHECK((g2[1] - g2[0]) - (g1[1] - g1[0]) == Approx(std::log(2.0)));
}

TEST_CASE("integration preserves ordering and centre of mass") {
  const double tol = 1e-10;
  SolitonState st{{-1.3, 0.1, 0.4, 2.0}, 2.0, 1.0, 3.0};
  const double com = std::accumulate(st.xi.begin(), st.xi.end(), 0.0);
  const auto series = integrate(st, 1e3, tol);
  CHECK(series.front().s == 2.0);
  CHECK(series.back().s == Approx(1e3));
  for (const auto& x : series) {
    for (int i = 1; i < x.k(); ++i) CHECK(x.xi[i] > x.xi[i - 1]);
    CHECK(std::abs(std::accumulate(x.xi.begin(), x.xi.end(), 0.0) - com) <= 10 * tol);
  }
}

TEST_CASE("integration from the ansatz stays on it") {
  SolitonState st{explicit_ansatz(3, 3.0, 1.0, 10.0), 10.0, 1.0, 3.0};
  const auto last = integrate(st, 1e3, 1e-11).back();
  const auto ref = explicit_ansatz(3, 3.0, 1.0, 1e3);
  for (int i = 0; i < 3; ++i) CHECK(last.xi[i] == Approx(ref[i]).epsilon(1e-6));
}

TEST_CASE("far-separated centres are frozen") {
  SolitonState st{{-30.0, 30.0}, 5.0, 1.0, 3.0};
  const auto last = integrate(st, 6.0, 1e-12).back();
  CHECK(last.xi[0] == Approx(-30.0).epsilon(1e-12));
  CHECK(last.xi[1] == Approx(30.0).epsilon(1e-12));
}

TEST_CASE("integration errors") {
  SolitonState st{{0.0, 1.0}, 5.0, 1.0, 3.0};
  CHECK_ERROR_KIND(integrate(st, 4.0, 1e-8), ErrorKind::Precondition);
  CHECK_ERROR_KIND(integrate(st, 6.0, 0.0), ErrorKind::Precondition);
}

TEST_CASE("d_hat values") {
  CHECK(d_hat_value(0.0, 0.0) == 0.0);
  CHECK(d_hat_value(0.1, 0.2) == Approx(-std::tan(0.3)));
  CHECK(std::abs(d_hat_value(0.0, std::numbers::pi / 4.0)) == Approx(1.0));
  CHECK_ERROR_KIND(d_hat_value(std::numbers::pi / 2.0, 0.0), ErrorKind::Domain);
  const auto tr = d_hat_trajectory({{{0.0, std::numbers::pi / 4.0}, 2.0, 1.0, 3.0}}, 0.0);
  CHECK_FALSE(tr.boundary[0][0]);
  CHECK(tr.boundary[0][1]);
}
