#pragma once

#include <string>
#include <vector>

#include "blowup/blowup_curve.hpp"
#include "blowup/coefficients.hpp"
#include "blowup/similarity.hpp"

namespace blowup {

/// (2 (p+1) / (p-1)^2)^{1/(p-1)}
double kappa0(double p);

/// kappa0 (1 - d^2)^{1/(p-1)} / (1 + d y)^{2/(p-1)}
double kappa(double d_hat, double y, double p);
double kappa_y(double d_hat, double y, double p);
double kappa_yy(double d_hat, double y, double p);

/// (1-y^2) k'' - 2(p+1)/(p-1) y k' - 2(p+1)/(p-1)^2 k + |k|^{p-1} k for the
/// soliton itself; zero up to rounding.
double soliton_stationary_residual(double d_hat, double y, double p);

struct Soliton {
  double d_hat = 0.0;
  int theta = 1;
  double p = 3.0;
  double beta0 = 1.0;  ///< solitons of beta0 |w|^{p-1} w carry the factor beta0^{-1/(p-1)}

  double value(double y) const;
  double derivative(double y) const;
};

struct ProfileFit {
  double x0 = 0.0;
  int theta = 1;
  double d_hat_star = 0.0;
  double distance = 0.0;
  double rate = 0.0;     ///< mu0 in distance ~ e^{-mu0 s}
  double s_star = 0.0;   ///< s of the terminal fit
  double T0 = 0.0;
  double T_prime = 0.0;  ///< x-derivative of T at x0 (for the profile in x)
  double d_hat_expected = std::numeric_limits<double>::quiet_NaN();  ///< T_U'(X0), when known
  bool converged = false;
  std::vector<double> s;
  std::vector<double> distances;
  std::vector<double> d_hats;
};

struct SolitonMatch {
  int theta = 1;
  double d_hat = 0.0;
  double distance = 0.0;
};

/// Closest theta kappa(d, .) to (w, w_s) in H1_rho x L2_rho on one frame.
SolitonMatch match_soliton(const SimilarityFrame& frame, double beta0);

/// H1_rho x L2_rho distance between the frame and theta kappa(d_hat, .).
double soliton_distance(const SimilarityFrame& frame, int theta, double d_hat, double beta0);

/// Fits every frame, keeps the terminal fit and regresses log distance over the
/// second half of the series. T_U_prime, if finite, is stored for comparison.
ProfileFit fit_profile(const std::vector<SimilarityFrame>& frames, const CoefficientModel& model,
                       double T_U_prime = std::numeric_limits<double>::quiet_NaN());

/// theta kappa0 beta0^{-1/(p-1)} (1 - a(x0) T'(x0)^2)^{1/(p-1)} /
///   (T(x0) - t + T'(x0) sqrt(a(x0)) (phi(x) - phi(x0)))^{2/(p-1)}
double u_profile_prediction(const ProfileFit& fit, const CoefficientModel& model, double x0, double x, double t);

struct ExpansionFit {
  int k = 0;
  double xi0 = 0.0;
  double nu = 0.0;
  double residual = 0.0;
  bool accepted = false;
  std::vector<double> residual_by_k;  ///< k = 2..6
};

struct ExpansionOptions {
  double radius = 0.3;        ///< |x - x0| window
  double max_residual = 0.05;
  int k_min = 2;
  int k_max = 6;
};

/// Fits log(D / |X - X0|) = log nu - 2 theta xi0 - ((k-1)(p-1)/2) log|log|x - x0||,
/// D = T_U(X) - T_U(X0) + |X - X0|, with per-side intercepts, for k = 2..6.
ExpansionFit characteristic_expansion_fit(const BlowupCurve& curve, const CoefficientModel& model, double x0,
                                          const ExpansionOptions& opts = {});

/// Alternative form: T_U'(X) + theta against theta nu e^{-2 theta xi0} / L^{(k-1)(p-1)/2}.
ExpansionFit characteristic_slope_fit(const BlowupCurve& curve, const CoefficientModel& model, double x0,
                                      const ExpansionOptions& opts = {});

void write_fit_json(const ProfileFit& fit, const std::string& distance_file, const std::string& path);
void write_distance_csv(const ProfileFit& fit, const std::string& path);

}  // namespace blowup
