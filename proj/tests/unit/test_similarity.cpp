#include <cmath>
#include <random>

#include "blowup/similarity.hpp"
#include "blowup/solver.hpp"
#include "blowup/weighted_quadrature.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

namespace {

AnalyticField flat_field(double p, double T) {
  const double k0 = std::pow(2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)), 1.0 / (p - 1.0));
  const double m = 2.0 / (p - 1.0);
  return {[=](double, double t) { return k0 * std::pow(T - t, -m); }, [](double, double) { return 0.0; },
          [=](double, double t) { return m * k0 * std::pow(T - t, -m - 1.0); }};
}

}  // namespace

TEST_CASE("flat ODE solution gives the constant frame") {
  const auto& nodes = weighted_rule(WeightKind::Rho, 3.0, 1).nodes;
  for (double p : {2.0, 3.0, 5.0}) {
    const double k0 = std::pow(2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)), 1.0 / (p - 1.0));
    for (double s : {0.5, 2.0, 5.0}) {
      const auto f = analytic_frame(flat_field(p, 1.0), p, 0.5, 0.5, 1.0, s, nodes);
      for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(f.w[i] == Approx(k0).epsilon(1e-12));
        CHECK(std::abs(f.w_s[i]) < 1e-10);
        CHECK(std::abs(f.w_y[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("zero field gives the zero frame") {
  const AnalyticField zero{[](double, double) { return 0.0; }, [](double, double) { return 0.0; },
                           [](double, double) { return 0.0; }};
  const auto f = analytic_frame(zero, 3.0, 0.5, 0.5, 1.0, 1.0, {-0.5, 0.0, 0.5});
  for (double w : f.w) CHECK(w == 0.0);
}

TEST_CASE("frame equation residual") {
  const auto m = make_constant_model(1, 1, {});
  const auto& nodes = weighted_rule(WeightKind::Rho, 3.0, 1).nodes;
  const auto field = flat_field(3.0, 1.0);
  const auto f0 = analytic_frame(field, 3.0, 0.5, 0.5, 1.0, 1.99, nodes);
  const auto f1 = analytic_frame(field, 3.0, 0.5, 0.5, 1.0, 2.00, nodes);
  const auto f2 = analytic_frame(field, 3.0, 0.5, 0.5, 1.0, 2.01, nodes);
  CHECK(frame_equation_residual(f0, f1, f2, m) < 1e-8);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto r0 = f0, r1 = f1, r2 = f2;
  for (auto* f : {&r0, &r1, &r2})
    for (std::size_t i = 0; i < f->size(); ++i) f->w[i] = dist(rng), f->w_s[i] = dist(rng), f->w_y[i] = dist(rng);
  CHECK(frame_equation_residual(r0, r1, r2, m) > 1e-1);
}

TEST_CASE("solver frames and round-trip against the trace") {
  const auto m = make_constant_model(2, 2, {});
  SolverOptions o;
  o.t_max = 2.0;
  const double U0 = std::sqrt(2.0), V0 = std::sqrt(2.0);
  const Trace tr = Solver(m, o).run(make_state(m, 1.0 / 512.0, 1.0, [=](double) { return U0; },
                                               [=](double) { return V0; }));
  SeriesOptions so;
  so.n_y = 64;
  const auto series = frame_series(tr, m, 0.5, so);
  REQUIRE(series.frames.size() >= 3);
  CHECK(series.s_min >= -std::log(series.T0));
  double worst = 0.0;
  for (const auto& f : series.frames)
    for (double w : f.w) worst = std::max(worst, std::abs(w - std::sqrt(2.0)));
  CHECK(worst < 1e-3);

  const std::size_t k = series.frames.size() / 2;
  CHECK(frame_equation_residual(series.frames[k - 1], series.frames[k], series.frames[k + 1], m) <= 1e-3);

  const TraceSampler sampler(tr);
  const auto& f = series.frames[k];
  const double t = series.T0 - std::exp(-f.s);
  for (std::size_t i = 0; i < f.size(); i += 7) {
    const double X = f.X0 + f.y[i] * std::exp(-f.s);
    const double u = std::exp(2.0 * f.s / (f.p - 1.0)) * f.w[i];
    CHECK(u == Approx(sampler.sample(X, t).U).epsilon(1e-4));
  }

  CHECK_ERROR_KIND(to_similarity(tr, m, 0.5, tr.resolved_s_max() + 1.0, 32), ErrorKind::Extrapolation);
  CHECK_ERROR_KIND(to_similarity(tr, m, 0.5, -std::log(series.T0) - 1.0, 32), ErrorKind::Precondition);
}

TEST_CASE("origin frames have a symmetric slope") {
  const auto m = make_constant_model(2, 2, {});
  SolverOptions o;
  o.t_max = 2.0;
  const Trace tr = Solver(m, o).run(make_state(m, 1.0 / 256.0, 1.0,
                                               [](double X) { return std::sqrt(2.0) * (1.0 + 0.1 * X * X); },
                                               [](double) { return std::sqrt(2.0); }));
  const auto f = to_similarity(tr, m, 0.0, 1.0, 32);
  CHECK(f.origin);
  for (double y : f.y) CHECK((y > 0.0 && y < 1.0));
  const TraceSampler sampler(tr);
  const auto f0 = to_similarity(sampler, tr, m, 0.0, 1.0, std::vector<double>{0.0});
  CHECK(std::abs(f0.w_y[0]) < 1e-6);
}
