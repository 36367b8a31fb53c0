#include <cmath>

#include "blowup/energy.hpp"
#include "blowup/weighted_quadrature.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

namespace {

SimilarityFrame frame_on(const std::vector<double>& y, double p, double (*w)(double), double s = 2.0) {
  SimilarityFrame f;
  f.p = p;
  f.s = s;
  f.x0 = f.X0 = 1.0;
  f.T0 = 1.0;
  f.y = y;
  for (double v : y) {
    f.w.push_back(w(v));
    f.w_s.push_back(0.0);
    f.w_y.push_back(0.0);
  }
  return f;
}

const std::vector<double>& rho_nodes(double p) { return weighted_rule(WeightKind::Rho, p, 1).nodes; }

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// w = kappa0 solution u = kappa0 (T - t)^{-m}, sampled at consecutive s.
std::vector<SimilarityFrame> flat_frames(double p, double s0, double ds, int n) {
  const double k0 = std::pow(2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)), 1.0 / (p - 1.0));
  std::vector<SimilarityFrame> frames;
  for (int i = 0; i < n; ++i) {
    SimilarityFrame f;
    f.p = p;
    f.s = s0 + i * ds;
    f.x0 = f.X0 = 1.0;
    f.T0 = 1.0;
    f.y = rho_nodes(p);
    f.w.assign(f.y.size(), k0);
    f.w_s.assign(f.y.size(), 0.0);
    f.w_y.assign(f.y.size(), 0.0);
    frames.push_back(f);
  }
  return frames;
}

}  // namespace

TEST_CASE("weighted norms of simple functions") {
  const auto one = frame_on(rho_nodes(3.0), 3.0, [](double) { return 1.0; });
  CHECK(weighted_norm(one, NormKind::L2_rho) == Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
  const auto lin = frame_on(rho_nodes(3.0), 3.0, [](double y) { return y; });
  CHECK(weighted_norm(lin, NormKind::L2_rho) == Approx(std::sqrt(4.0 / 15.0)).epsilon(1e-12));
  const auto zero = frame_on(rho_nodes(3.0), 3.0, [](double) { return 0.0; });
  for (auto k : {NormKind::L2_rho, NormKind::H1_rho, NormKind::H1_plain}) CHECK(weighted_norm(zero, k) == 0.0);
}

TEST_CASE("norms on foreign nodes are resampled") {
  const auto& nodes = weighted_rule(WeightKind::Rho, 2.0, 1).nodes;
  const auto f = frame_on(nodes, 3.0, [](double y) { return 1.0 + y * y; });
  // int (1 + y^2)^2 (1 - y^2) dy = 2 (1 + 2/3 + 1/5) - 2 (1/3 + 2/5 + 1/7)
  const double exact = 2.0 * (1.0 + 2.0 / 3.0 + 0.2) - 2.0 * (1.0 / 3.0 + 0.4 + 1.0 / 7.0);
  CHECK(weighted_norm(f, NormKind::L2_rho) == Approx(std::sqrt(exact)).epsilon(1e-10));
}

TEST_CASE("E0 at kappa0") {
  const auto f = flat_frames(3.0, 1.0, 0.01, 1)[0];
  CHECK(E0_functional(f, 1.0) == Approx(4.0 / 3.0).epsilon(1e-12));
  const auto g = flat_frames(2.0, 1.0, 0.01, 1)[0];
  CHECK(E0_functional(g, 1.0) == Approx(36.0 * beta_fn(0.5, 3.0)).epsilon(1e-12));

  auto big = f;
  for (double& w : big.w) w *= 1.1;
  const double k0 = std::sqrt(2.0);
  const double quad_only = (0.5 * (1.1 * k0) * (1.1 * k0)) * 4.0 / 3.0;
  CHECK(E0_functional(big, 1.0) < quad_only);
  CHECK(E0_functional(frame_on(rho_nodes(3.0), 3.0, [](double) { return 0.0; }), 1.0) == 0.0);
}

TEST_CASE("full energy decomposition") {
  CHECK(energy_gamma(3.0, 1.0) == Approx(0.5));
  CHECK(energy_gamma(3.0, 2.5) == Approx(0.25));
  const auto m = make_constant_model(1, 1, {});
  const auto f = flat_frames(3.0, 3.0, 0.01, 1)[0];
  const auto r = full_energy(f, m, 2.0);
  CHECK(r.I == 0.0);
  CHECK(r.J == 0.0);
  CHECK(r.K == 0.0);
  CHECK(r.E == Approx(r.E0 + r.I + r.J + r.K));
  const double H = r.E * std::exp((3.0 + 3.0) / (2.0 * r.gamma) * std::exp(-r.gamma * 3.0)) +
                   2.0 * std::exp(-2.0 * r.gamma * 3.0);
  CHECK(r.H == Approx(H).epsilon(1e-14));
}

TEST_CASE("J vanishes for an even frame with linear beta") {
  ModelOptions o;
  o.b1 = 0.1;
  o.x_max = 4.0;
  const auto m = make_constant_model(1, 1, o);
  const auto r = full_energy(flat_frames(3.0, 3.0, 0.01, 1)[0], m);
  CHECK(std::abs(r.J) < 1e-12);
}

TEST_CASE("dissipation identity on exact and trivial frames") {
  const auto m = make_constant_model(1, 1, {});
  for (double p : {3.0}) {
    auto frames = flat_frames(p, 2.0, 0.01, 7);
    std::vector<EnergyReport> reports;
    for (const auto& f : frames) reports.push_back(full_energy(f, m));
    const auto check = dissipation_identity_check(reports, frames, m);
    REQUIRE(check.residual_E0IJ.size() == 5);
    for (double r : check.residual_E0IJ) CHECK(std::abs(r) <= 1e-3);
    for (const auto& t : check.terms)
      for (double v : {t.I2, t.I3, t.I4, t.I5}) CHECK(std::abs(v) <= 1e-12);
  }
  auto zeros = flat_frames(3.0, 2.0, 0.01, 5);
  for (auto& f : zeros) f.w.assign(f.size(), 0.0);
  std::vector<EnergyReport> reports;
  for (const auto& f : zeros) reports.push_back(full_energy(f, m));
  const auto check = dissipation_identity_check(reports, zeros, m);
  for (double r : check.residual_E0IJ) CHECK(r == Approx(0.0));
  for (double r : check.residual_K) CHECK(r == Approx(0.0));
}

TEST_CASE("origin energy") {
  const auto& rule = weighted_rule(WeightKind::Rho0, 3.0, 2);
  SimilarityFrame f;
  f.p = 3.0;
  f.origin = true;
  f.s = 1.0;
  f.y = rule.nodes;
  f.w.assign(f.y.size(), std::sqrt(2.0));
  f.w_s.assign(f.y.size(), 0.0);
  f.w_y.assign(f.y.size(), 0.0);
  const auto e = origin_energy(f, 3.0, 2, 1.0);
  CHECK(e.E00 == Approx(2.0 / 2.0 * rho0_mass_exact(3.0, 2)).epsilon(1e-10));
  CHECK(e.dE00_ds_predicted == 0.0);
  // d = 1 + 4/(p-1) = 3 for p = 3: the slope coefficient vanishes.
  f.w_s.assign(f.y.size(), 0.7);
  f.y = weighted_rule(WeightKind::Rho0, 3.0, 3).nodes;
  f.w.assign(f.y.size(), 1.0);
  f.w_s.assign(f.y.size(), 0.7);
  f.w_y.assign(f.y.size(), 0.0);
  CHECK(origin_energy(f, 3.0, 3, 1.0).dE00_ds_predicted == Approx(0.0));
  CHECK_ERROR_KIND(origin_energy(f, 5.0, 5, 1.0), ErrorKind::NonIntegrableWeight);
}

TEST_CASE("monotonicity check and energy limit") {
  std::vector<EnergyReport> r(50);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i].s = 0.1 * i;
    r[i].H = 1.0 + std::exp(-r[i].s);
    r[i].E = 4.0 / 3.0 + 0.5 * std::exp(-0.8 * r[i].s);
  }
  CHECK(check_monotonicity(r).pass);
  CHECK(extrapolated_energy_limit(r) == Approx(4.0 / 3.0).epsilon(1e-3));
  r[40].H += 0.1;
  const auto bad = check_monotonicity(r);
  CHECK_FALSE(bad.pass);
  CHECK(bad.violations_after >= 1);
  CHECK(bad.worst_excess > 0.0);
  r[40].H -= 0.1;
  r[2].H += 0.1;
  CHECK(check_monotonicity(r, 0.2).pass);
}
