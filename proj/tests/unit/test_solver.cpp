#include <cmath>
#include <cstdio>
#include <numbers>

#include "blowup/solver.hpp"
#include "blowup/trace.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

namespace {

FieldState flat_state(const CoefficientModel& m, double h, double X_max, double T0) {
  const double U0 = std::sqrt(2.0) / T0;
  const double V0 = std::sqrt(2.0) / (T0 * T0);
  return make_state(m, h, X_max, [U0](double) { return U0; }, [V0](double) { return V0; });
}

}  // namespace

TEST_CASE("flat data tracks the ODE solution") {
  const auto m = make_constant_model(2, 2, {});
  SolverOptions o;
  o.t_max = 2.0;
  const Trace tr = Solver(m, o).run(flat_state(m, 1.0 / 512.0, 1.0, 1.0));
  const TraceSampler sampler(tr);
  const double exact = std::sqrt(2.0) / 0.5;
  double err = 0.0;
  for (double X : tr.X) err = std::max(err, std::abs(sampler.sample(X, 0.5).U - exact) / exact);
  CHECK(err <= 1e-4);
  for (double T : tr.T) CHECK(T == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("zero data stays zero") {
  const auto m = make_constant_model(1, 1, {});
  SolverOptions o;
  o.t_max = 0.5;
  const Trace tr = Solver(m, o).run(make_state(m, 1.0 / 64.0, 1.0, [](double) { return 0.0; },
                                               [](double) { return 0.0; }));
  for (const auto& snap : tr.snapshots)
    for (double u : snap.U) CHECK(u == 0.0);
  for (double T : tr.T) CHECK(std::isinf(T));
  CHECK(tr.t_end == Approx(0.5));
}

TEST_CASE("linear periodic transport matches d'Alembert") {
  const auto m = make_constant_model(1, 1, {});
  SolverOptions o;
  o.nonlinear = false;
  o.boundary = BoundaryMode::Periodic;
  const int n = 4096;
  const double h = 2.0 * std::numbers::pi / n;
  FieldState s = make_state(m, h, 2.0 * std::numbers::pi - h, [](double X) { return std::sin(X); },
                            [](double) { return 0.0; });
  REQUIRE(s.size() == static_cast<std::size_t>(n));
  const Stepper stepper(m, s, o);
  const int steps = 2048;
  const double dt = 1.0 / steps;
  for (int k = 0; k < steps; ++k) stepper.advance(s, dt);
  double err = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) err = std::max(err, std::abs(s.U[j] - std::sin(s.X[j]) * std::cos(1.0)));
  CHECK(s.t == Approx(1.0));
  CHECK(err <= 1e-6);
}

TEST_CASE("Neumann symmetry at the origin") {
  const auto m = make_constant_model(1, 1, {});
  SolverOptions o;
  o.nonlinear = false;
  FieldState s = make_state(m, 1.0 / 128.0, 2.0, [](double X) { return std::cos(X) + 2.0; },
                            [](double) { return 0.0; });
  const Stepper stepper(m, s, o);
  for (int k = 0; k < 64; ++k) stepper.advance(s, 0.25 / 128.0);
  const auto a = stepper.acceleration(s);
  // The ghost U(-h) = U(h) makes the origin acceleration the one-sided symmetric difference.
  CHECK(a[0] == Approx(2.0 * (s.U[1] - s.U[0]) * 128.0 * 128.0).epsilon(1e-12));
  for (double u : s.U) CHECK(std::isfinite(u));
}

TEST_CASE("blow-up time detection") {
  std::vector<double> thr, times;
  for (int k = 0; k < 10; ++k) {
    thr.push_back(100.0 * std::pow(2.0, k));
    times.push_back(1.0 - std::sqrt(2.0) / thr.back());
  }
  SUBCASE("exact series") {
    const auto fit = detect_blowup_time(times, thr, 3.0);
    CHECK(fit.T == Approx(1.0).epsilon(1e-4));
    CHECK_FALSE(fit.poor_fit);
  }
  SUBCASE("noisy series with exponent one") {
    std::vector<double> t2;
    for (std::size_t k = 0; k < thr.size(); ++k)
      t2.push_back(1.0 - 1.0 / thr[k] + 1e-6 * ((k % 2) ? 1.0 : -1.0));
    const auto fit = detect_blowup_time(t2, thr, 3.0);
    CHECK(fit.T == Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("too few crossings") {
    CHECK(std::isinf(detect_blowup_time({0.1, 0.2}, {100.0, 200.0}, 3.0).T));
  }
}

TEST_CASE("exact ODE completion") {
  SUBCASE("zero-energy orbit of p = 3") {
    // u = sqrt(2)/(1 - t) has E = 0.
    const double t = 0.5;
    const double U = std::sqrt(2.0) / 0.5, V = std::sqrt(2.0) / 0.25;
    const auto c = ode_completion(3.0, 1.0, t, U, V, {10.0, 100.0, 1000.0});
    CHECK(c.T == Approx(1.0).epsilon(1e-12));
    REQUIRE(c.crossing_times.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const double level = std::vector<double>{10.0, 100.0, 1000.0}[i];
      CHECK(c.crossing_times[i] == Approx(1.0 - std::sqrt(2.0) / level).epsilon(1e-12));
    }
  }
  SUBCASE("beta rescales the blow-up time of the flat orbit") {
    const double U = 1.0;
    const double beta = 4.0;
    // u = kappa0 beta^{-1/2} / (T - t) with T = kappa0 beta^{-1/2} / U = 1/sqrt(2).
    const double T = std::sqrt(2.0) / 2.0;
    const auto c = ode_completion(3.0, beta, 0.0, U, U / T, {});
    CHECK(c.T == Approx(T).epsilon(1e-12));
  }
  SUBCASE("preconditions") {
    CHECK_ERROR_KIND(ode_completion(3.0, 1.0, 0.0, 1.0, -1.0, {2.0}), ErrorKind::Precondition);
    CHECK_ERROR_KIND(ode_completion(3.0, 1.0, 0.0, 1.0, 1.0, {0.5}), ErrorKind::Precondition);
  }
}

TEST_CASE("trace save and load round-trip") {
  const auto m = make_constant_model(2, 2, {});
  SolverOptions o;
  o.t_max = 2.0;
  const Trace tr = Solver(m, o).run(flat_state(m, 1.0 / 64.0, 1.0, 1.0));
  const std::string path = "unit_trace_roundtrip.bin";
  save_trace(tr, path);
  const Trace back = load_trace(path);
  std::remove(path.c_str());
  CHECK(back.X == tr.X);
  CHECK(back.T == tr.T);
  CHECK(back.snapshots.size() == tr.snapshots.size());
  CHECK(back.snapshots.back().U == tr.snapshots.back().U);
  CHECK(back.steps == tr.steps);
}

TEST_CASE("make_state rejects grids beyond the model") {
  ModelOptions mo;
  mo.x_max = 1.0;
  const auto m = make_constant_model(1, 1, mo);
  CHECK_ERROR_KIND(make_state(m, 0.01, 2.0, [](double) { return 0.0; }, [](double) { return 0.0; }),
                   ErrorKind::OutOfRange);
  CHECK_ERROR_KIND(make_state(m, 0.0, 1.0, [](double) { return 0.0; }, [](double) { return 0.0; }),
                   ErrorKind::Precondition);
}
