#include <cmath>
#include <numbers>

#include "blowup/normspaces.hpp"
#include "support.hpp"

using namespace blowup;
using doctest::Approx;

TEST_CASE("ball integrals of constants") {
  const auto one2 = sample_radial([](double) { return 1.0; }, 10.0, 0.01, 2);
  CHECK(ball_integral(one2, 5.0) == Approx(std::numbers::pi).epsilon(1e-3));
  CHECK(ball_integral(one2, 0.0) == Approx(std::numbers::pi).epsilon(1e-3));
  const auto one3 = sample_radial([](double) { return 1.0; }, 10.0, 0.01, 3);
  CHECK(ball_integral(one3, 5.0) == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-3));
  const auto zero = sample_radial([](double) { return 0.0; }, 10.0, 0.01, 2);
  CHECK(ball_integral(zero, 3.0) == 0.0);
  CHECK(norm_A(zero) == 0.0);
}

TEST_CASE("slice measures integrate to the ball volume") {
  double s = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double r = 2.0 + 2.0 * (i + 0.5) / n;
    s += ball_slice_measure(r, 3.0, 2) * 2.0 / n;
  }
  CHECK(s == Approx(std::numbers::pi).epsilon(1e-4));
}

TEST_CASE("window integrals") {
  const auto one = sample_radial([](double) { return 1.0; }, 10.0, 0.01, 2);
  for (double r0 : {1.0, 2.5, 7.0}) CHECK(window_integral(one, r0) == Approx(2.0).epsilon(1e-6));
  CHECK(norm_B(one) == Approx(2.0).epsilon(1e-6));
  const auto step = sample_radial([](double r) { return r <= 1.0 ? 1.0 : 0.0; }, 10.0, 0.001, 2);
  CHECK(norm_B(step) == Approx(0.5).epsilon(2e-3));
  CHECK(window_integral(sample_radial([](double) { return 0.0; }, 10.0, 0.01, 2), 2.0) == 0.0);
}

TEST_CASE("equivalence constants") {
  std::vector<RadialFunction> constants;
  for (double c : {0.5, 1.0, 3.0}) constants.push_back(sample_radial([c](double) { return c; }, 10.0, 0.01, 2));
  const auto r = equivalence_check(constants, 2);
  CHECK(r.ratio_min == Approx(std::numbers::pi / 2.0).epsilon(1e-3));
  CHECK(r.ratio_max == Approx(std::numbers::pi / 2.0).epsilon(1e-3));

  const auto fam = stress_family(3);
  CHECK(fam.size() == 50);
  const auto rep = equivalence_check(fam, 3);
  CHECK(rep.ratio_max / rep.ratio_min <= 100.0);
  const auto near = sample_radial([](double r) { return std::exp(-(r - 1.0) * (r - 1.0) / 0.04); }, 25.0, 0.01, 3);
  const auto far = sample_radial([](double r) { return std::exp(-(r - 10.0) * (r - 10.0) / 0.04); }, 25.0, 0.01, 3);
  for (const auto& u : {near, far}) {
    const double ratio = norm_A(u) / norm_B(u);
    CHECK(ratio >= rep.ratio_min * (1 - 1e-9));
    CHECK(ratio <= rep.ratio_max * (1 + 1e-9));
  }
  std::vector<RadialFunction> zeros{sample_radial([](double) { return 0.0; }, 10.0, 0.01, 2)};
  CHECK_ERROR_KIND(equivalence_check(zeros, 2), ErrorKind::DegenerateFamily);
}

TEST_CASE("crown disk count grows linearly") {
  CHECK(crown_disk_count(1.0) >= 1);
  CHECK(crown_disk_count(20.0) > crown_disk_count(10.0));
  CHECK(crown_disk_count(20.0) <= static_cast<int>(std::numbers::pi * 20.0) + 1);
  CHECK_ERROR_KIND(crown_disk_count(0.5), ErrorKind::Precondition);
}
