#pragma once

#include <string>
#include <vector>

namespace blowup {

/// Centers xi_1 < ... < xi_k of k interacting solitons at similarity time s.
struct SolitonState {
  std::vector<double> xi;
  double s = 1.0;
  double c1 = 1.0;
  double p = 3.0;

  int k() const { return static_cast<int>(xi.size()); }
};

/// c1 (e^{-(2/(p-1))(xi_i - xi_{i-1})} - e^{-(2/(p-1))(xi_{i+1} - xi_i)}), with the
/// left term absent for i = 1 and the right term absent for i = k.
std::vector<double> ode_rhs(const SolitonState& state);

/// Adaptive Dormand-Prince integration to s_end; samples are log-spaced in s
/// (samples_per_decade) and always include the start and s_end.
std::vector<SolitonState> integrate(const SolitonState& state, double s_end, double tol,
                                    int samples_per_decade = 20);

/// Constants alpha_i of the explicit solution, with sum alpha_i = 0.
std::vector<double> ansatz_offsets(int k, double p, double c1);

/// xi_i(s) = (i - (k+1)/2) (p-1)/2 log s + alpha_i.
std::vector<double> explicit_ansatz(int k, double p, double c1, double s);

/// d_i = -tan(xi_i + xi0) along a series. A value with |d_i| >= 1 is flagged.
struct DHatSeries {
  std::vector<double> s;
  std::vector<std::vector<double>> d_hat;
  std::vector<std::vector<bool>> boundary;
};

DHatSeries d_hat_trajectory(const std::vector<SolitonState>& series, double xi0_shift);
double d_hat_value(double xi, double xi0_shift);

/// Rows (s, xi_1 .. xi_k).
void write_soliton_series_csv(const std::vector<SolitonState>& series, const std::string& path);
/// Rows (s, gap_observed, gap_ansatz) for consecutive centers (gap index in column 2).
void write_ansatz_csv(const std::vector<SolitonState>& series, const std::string& path);

}  // namespace blowup
