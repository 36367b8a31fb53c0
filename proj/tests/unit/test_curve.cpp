#include <cmath>

#include "blowup/blowup_curve.hpp"
#include "blowup/solver.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

namespace {

BlowupCurve curve_of(double (*T)(double)) {
  std::vector<double> X, Ts;
  for (int i = 0; i <= 200; ++i) {
    X.push_back(0.01 * i);
    Ts.push_back(T(X.back()));
  }
  return make_curve(X, Ts);
}

}  // namespace

TEST_CASE("flat curve is non-characteristic with the minimal slope") {
  const auto c = classify_point(curve_of([](double) { return 1.0; }), 1.0);
  CHECK(c.kind == PointClass::NonCharacteristic);
  CHECK(c.delta == Approx(ClassifyOptions{}.delta_min));
}

TEST_CASE("upward corner is characteristic") {
  const auto c = classify_point(curve_of([](double X) { return 1.0 + std::abs(X - 1.0); }), 1.0);
  CHECK(c.kind == PointClass::Characteristic);
}

TEST_CASE("downward corner of slope one half") {
  const auto c = classify_point(curve_of([](double X) { return 1.0 - 0.5 * std::abs(X - 1.0); }), 1.0);
  CHECK(c.kind == PointClass::NonCharacteristic);
  CHECK(c.delta == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("too few samples near the base point") {
  const auto curve = make_curve({0.0, 0.5, 1.0, 1.5, 2.0}, {1.0, 1.0, 1.0, 1.0, 1.0});
  CHECK_ERROR_KIND(classify_point(curve, 1.0), ErrorKind::InsufficientResolution);
}

TEST_CASE("finite differences for T_prime") {
  const auto c = curve_of([](double X) { return 1.0 + 0.3 * X; });
  for (double tp : c.T_prime) CHECK(tp == Approx(0.3).epsilon(1e-10));
  CHECK(c.lipschitz_constant() == Approx(0.3).epsilon(1e-10));
  CHECK_ERROR_KIND(make_curve({0.0}, {1.0}), ErrorKind::Precondition);
}

TEST_CASE("solver curves are 1-Lipschitz") {
  const auto m = make_constant_model(1, 1, {});
  SolverOptions o;
  o.t_max = 4.0;
  const double h = 1.0 / 128.0;
  const Trace tr = Solver(m, o).run(make_state(m, h, 2.0, [](double X) { return 3.0 * std::exp(-X * X / 0.36); },
                                               [](double) { return 0.0; }));
  auto c = curve_from_trace(tr);
  std::size_t finite = 0;
  for (double T : c.T) finite += std::isfinite(T);
  REQUIRE(finite > 10);
  CHECK(c.lipschitz_constant() <= 1.05);
  classify_all(c);
  for (std::size_t j = 0; j < c.X.size(); ++j)
    if (c.classes[j].kind == PointClass::NonCharacteristic) CHECK(std::abs(c.T_prime[j]) < 1.0);
}
