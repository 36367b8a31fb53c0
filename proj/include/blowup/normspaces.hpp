#pragma once

#include <functional>
#include <string>
#include <vector>

namespace blowup {

/// Radial profile sampled on r_j = j h, j = 0..n-1, in dimension d.
struct RadialFunction {
  double h = 0.01;
  std::vector<double> values;
  int d = 2;
  std::string label;

  double R() const { return h * static_cast<double>(values.size() - 1); }
  /// Linear interpolation; zero beyond R.
  double operator()(double r) const;
};

RadialFunction sample_radial(const std::function<double(double)>& u, double R, double h, int d,
                             std::string label = {});

/// Measure of {|x| = r} inside the unit ball centred at distance r0 from the origin.
double ball_slice_measure(double r, double r0, int d);

/// int_{B(x0,1)} u^2 dx for |x0| = r0.
double ball_integral(const RadialFunction& u, double r0);
/// r0^{1-d} int_{r0-1}^{r0+1} u^2 r^{d-1} dr
double window_integral(const RadialFunction& u, double r0);

/// sup over centres of the unit-ball mass (square of the loc-unif L^2 norm).
double norm_A(const RadialFunction& u);
/// sup over r0 in [1, R-1] of the weighted window mass.
double norm_B(const RadialFunction& u);

struct EquivalenceReport {
  int d = 2;
  std::size_t family_size = 0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double alpha_bar = 0.0;  ///< ratio_max
  double beta_bar = 0.0;   ///< 1 / ratio_min
  std::string witness_min;
  std::string witness_max;
  std::vector<double> ratios;
};

/// Extremes of A/B over the non-zero members of the family.
EquivalenceReport equivalence_check(const std::vector<RadialFunction>& family, int d);

/// Bumps at radii 1..20, Gaussians, oscillatory tails and plateaus (50 members).
std::vector<RadialFunction> stress_family(int d, double R = 25.0, double h = 0.01);

/// Number of disjoint unit disks centred on the circle of radius r0 (d = 2).
int crown_disk_count(double r0);

void write_norms_json(const std::vector<EquivalenceReport>& reports, const std::string& path);

}  // namespace blowup
