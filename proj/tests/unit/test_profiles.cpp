#include <algorithm>
#include <cmath>
#include <numbers>

#include "blowup/profiles.hpp"
#include "blowup/solver.hpp"
#include "blowup/weighted_quadrature.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

namespace {

SimilarityFrame soliton_frame(int theta, double d_hat, double s, double p = 3.0) {
  SimilarityFrame f;
  f.p = p;
  f.s = s;
  f.x0 = f.X0 = 1.0;
  f.T0 = 1.0;
  f.y = weighted_rule(WeightKind::Rho, p, 1).nodes;
  const Soliton sol{d_hat, theta, p, 1.0};
  for (double y : f.y) {
    f.w.push_back(sol.value(y));
    f.w_s.push_back(0.0);
    f.w_y.push_back(sol.derivative(y));
  }
  return f;
}

}  // namespace

TEST_CASE("soliton values") {
  CHECK(kappa0(3.0) == Approx(std::sqrt(2.0)));
  for (double y : {-0.9, 0.0, 0.4}) CHECK(kappa(0.0, y, 3.0) == Approx(std::sqrt(2.0)));
  CHECK(kappa(0.5, 0.0, 3.0) == Approx(std::sqrt(2.0) * std::sqrt(0.75)).epsilon(1e-14));
  CHECK(kappa(1.0 - 1e-12, 0.0, 3.0) < 1e-5);
  CHECK_ERROR_KIND(kappa(1.0, 0.0, 3.0), ErrorKind::Domain);
}

TEST_CASE("solitons are positive stationary solutions") {
  for (double p : {2.0, 3.0, 5.0})
    for (double d : {-0.7, -0.3, 0.0, 0.3, 0.7})
      for (int i = -99; i <= 99; ++i) {
        const double y = i / 100.0;
        CHECK(kappa(d, y, p) > 0.0);
        CHECK(std::abs(soliton_stationary_residual(d, y, p)) <= 1e-10);
      }
}

TEST_CASE("soliton derivatives match finite differences") {
  const double e = 1e-5;
  for (double d : {-0.5, 0.2})
    for (double y : {-0.5, 0.1, 0.6}) {
      CHECK(kappa_y(d, y, 3.0) == Approx((kappa(d, y + e, 3.0) - kappa(d, y - e, 3.0)) / (2 * e)).epsilon(1e-8));
      CHECK(kappa_yy(d, y, 3.0) ==
            Approx((kappa_y(d, y + e, 3.0) - kappa_y(d, y - e, 3.0)) / (2 * e)).epsilon(1e-7));
    }
  const Soliton s{0.3, -1, 3.0, 4.0};
  CHECK(s.value(0.2) == Approx(-kappa(0.3, 0.2, 3.0) / 2.0));
}

TEST_CASE("matching exact soliton frames") {
  const auto m0 = match_soliton(soliton_frame(1, 0.0, 2.0), 1.0);
  CHECK(m0.theta == 1);
  CHECK(std::abs(m0.d_hat) < 1e-6);
  CHECK(m0.distance < 1e-8);
  const auto m1 = match_soliton(soliton_frame(-1, 0.3, 2.0), 1.0);
  CHECK(m1.theta == -1);
  CHECK(m1.d_hat == Approx(0.3).epsilon(1e-6));
  CHECK(soliton_distance(soliton_frame(1, 0.3, 2.0), 1, 0.3, 1.0) < 1e-12);
  CHECK(soliton_distance(soliton_frame(1, 0.3, 2.0), 1, 0.0, 1.0) > 0.0);
}

TEST_CASE("profile fit on a constant soliton series") {
  const auto m = make_constant_model(1, 1, {});
  std::vector<SimilarityFrame> frames;
  for (int i = 0; i < 20; ++i) frames.push_back(soliton_frame(1, 0.0, 1.0 + 0.1 * i));
  const auto fit = fit_profile(frames, m, 0.0);
  CHECK(fit.theta == 1);
  CHECK(std::abs(fit.d_hat_star) < 1e-6);
  CHECK(fit.distance < 1e-8);
  CHECK_ERROR_KIND(fit_profile({}, m), ErrorKind::Precondition);
}

TEST_CASE("distance decreases on a relaxing series") {
  const auto m = make_constant_model(1, 1, {});
  std::vector<SimilarityFrame> frames;
  for (int i = 0; i < 30; ++i) {
    auto f = soliton_frame(1, 0.2, 1.0 + 0.1 * i);
    for (std::size_t j = 0; j < f.size(); ++j) f.w[j] += 0.3 * std::exp(-f.s) * f.y[j] * f.y[j];
    frames.push_back(f);
  }
  const auto fit = fit_profile(frames, m);
  CHECK(fit.converged);
  CHECK(fit.rate == Approx(1.0).epsilon(0.1));
  CHECK(fit.d_hat_star == Approx(0.2).epsilon(0.01));
  for (std::size_t k = 1; k < fit.distances.size(); ++k) CHECK(fit.distances[k] <= fit.distances[k - 1]);
}

TEST_CASE("profile prediction in original variables") {
  const auto m = make_constant_model(1, 1, {});
  ProfileFit fit;
  fit.theta = 1;
  fit.T0 = 1.0;
  fit.T_prime = 0.0;
  CHECK(u_profile_prediction(fit, m, 0.5, 0.5, 0.9) == Approx(std::sqrt(2.0) / 0.1));
  const double a = u_profile_prediction(fit, m, 0.5, 0.5, 1.0 - 1e-3);
  const double b = u_profile_prediction(fit, m, 0.5, 0.5, 1.0 - 1e-4);
  CHECK(std::log(b / a) / std::log(10.0) == Approx(1.0).epsilon(1e-12));
  CHECK_ERROR_KIND(u_profile_prediction(fit, m, 0.5, 0.9, 0.9), ErrorKind::Domain);
}

TEST_CASE("profile prediction against a flat run") {
  const auto m = make_constant_model(2, 2, {});
  SolverOptions o;
  o.t_max = 2.0;
  const Trace tr = Solver(m, o).run(make_state(m, 1.0 / 256.0, 1.0, [](double) { return std::sqrt(2.0); },
                                               [](double) { return std::sqrt(2.0); }));
  const TraceSampler sampler(tr);
  ProfileFit fit;
  fit.T0 = tr.T_at(0.5);
  for (double t : {0.99, 0.995}) {
    const double pred = u_profile_prediction(fit, m, 0.5, 0.5, t);
    CHECK(pred == Approx(sampler.sample(0.5, t).U).epsilon(1e-2));
  }
}

namespace {

BlowupCurve synthetic_curve(int k, double xi0, double nu, double x0, double p = 3.0) {
  const double e = (k - 1) * (p - 1.0) / 2.0;
  std::vector<double> X, T;
  const int per_side = 300;
  for (int i = per_side - 1; i >= 0; --i) {
    const double delta = 1e-5 * std::pow(0.35 / 1e-5, i / double(per_side - 1));
    X.push_back(x0 - delta);
    T.push_back(1.0 - delta + nu * delta * std::exp(2.0 * xi0) / std::pow(std::abs(std::log(delta)), e));
  }
  X.push_back(x0);
  T.push_back(1.0);
  for (int i = 0; i < per_side; ++i) {
    const double delta = 1e-5 * std::pow(0.35 / 1e-5, i / double(per_side - 1));
    X.push_back(x0 + delta);
    T.push_back(1.0 - delta + nu * delta * std::exp(-2.0 * xi0) / std::pow(std::abs(std::log(delta)), e));
  }
  return make_curve(X, T);
}

}  // namespace

TEST_CASE("characteristic expansion recovery") {
  const auto m = make_constant_model(1, 1, {});
  ExpansionOptions eo;
  eo.radius = 0.35;
  for (int k : {2, 3}) {
    const auto fit = characteristic_expansion_fit(synthetic_curve(k, 0.25, 1.0, 0.5), m, 0.5, eo);
    CHECK(fit.k == k);
    CHECK(fit.accepted);
    CHECK(fit.xi0 == Approx(0.25).epsilon(0.05));
    CHECK(fit.nu == Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("flat curve is rejected by the expansion fit") {
  const auto m = make_constant_model(1, 1, {});
  std::vector<double> X{0.5}, T{1.0};
  for (int i = 0; i < 200; ++i) {
    const double delta = 1e-8 * std::pow(0.3 / 1e-8, i / 199.0);
    X.push_back(0.5 - delta);
    X.push_back(0.5 + delta);
  }
  std::sort(X.begin(), X.end());
  T.assign(X.size(), 1.0);
  ExpansionOptions eo;
  const auto fit = characteristic_expansion_fit(make_curve(X, T), m, 0.5, eo);
  CHECK_FALSE(fit.accepted);
  CHECK(fit.residual > eo.max_residual);
  std::vector<double> Xn, Tn;
  for (int i = -20; i <= 20; ++i) {
    Xn.push_back(0.5 + 0.01 * i);
    Tn.push_back(1.0 - 0.5 * std::abs(0.01 * i));
  }
  CHECK_ERROR_KIND(characteristic_expansion_fit(make_curve(Xn, Tn), m, 0.5, eo), ErrorKind::InsufficientRange);
}
