#pragma once

#include <string>
#include <utility>
#include <vector>

#include "blowup/coefficients.hpp"
#include "blowup/similarity.hpp"
#include "blowup/weighted_quadrature.hpp"

namespace blowup {

enum class NormKind { L2_rho, H1_rho, L2_rho0, H1_rho0, L2_rd, H1_rd, H1_plain };

/// Weighted norm of the frame's w; H1 kinds use int (w^2 + w_y^2) weight.
/// Frames on other nodes than the kind's rule are resampled by barycentric
/// interpolation.
double weighted_norm(const SimilarityFrame& frame, NormKind kind, int d = 1);

/// int (w_s^2/2 + w_y^2 (1-y^2)/2 + (p+1)/(p-1)^2 w^2 - beta0/(p+1) |w|^{p+1}) rho
double E0_functional(const SimilarityFrame& frame, double beta_at_X0);

struct EnergyReport {
  double s = 0.0;
  double E0 = 0.0;
  double I = 0.0;
  double J = 0.0;
  double K = 0.0;
  double E = 0.0;
  double H = 0.0;
  double mu = 1.0;
  double gamma = 0.5;
  double dissipation = 0.0;  ///< int w_s^2 rho / (1-y^2)
  double identity_residual_E0IJ = 0.0;
  double identity_residual_K = 0.0;
};

/// min(1/2, (p-q)/(p-1))
double energy_gamma(double p, double q);

EnergyReport full_energy(const SimilarityFrame& frame, const CoefficientModel& model, double mu = 1.0);

/// Right-hand sides of the two dissipation identities at one frame.
struct IdentityTerms {
  double dissipation = 0.0;
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0, I5 = 0.0;
  double rhs_E0IJ = 0.0;  ///< -4/(p-1) dissipation + I1 + ... + I5
  double K1 = 0.0, K2 = 0.0, K3 = 0.0, K4 = 0.0, K5 = 0.0, K6 = 0.0, K7 = 0.0, K8 = 0.0;
  double rhs_K = 0.0;     ///< predicted e^{gamma s} dK/ds
};

IdentityTerms identity_terms(const SimilarityFrame& frame, const CoefficientModel& model, const EnergyReport& report);

struct IdentityCheck {
  std::vector<double> s;
  std::vector<double> dE0IJ_ds;        ///< centered difference
  std::vector<double> residual_E0IJ;
  std::vector<double> eg_dK_ds;        ///< e^{gamma s} dK/ds, centered difference
  std::vector<double> residual_K;
  std::vector<IdentityTerms> terms;
};

/// Checks both identities at every interior frame (needs >= 3 equally spaced
/// frames) and stores the residuals back into the reports.
IdentityCheck dissipation_identity_check(std::vector<EnergyReport>& reports,
                                         const std::vector<SimilarityFrame>& frames,
                                         const CoefficientModel& model);

struct OriginEnergy {
  double E00 = 0.0;
  double dE00_ds_predicted = 0.0;
};

/// Origin functional with weight rho0 on (0, 1).
OriginEnergy origin_energy(const SimilarityFrame& frame, const CoefficientModel& model);
OriginEnergy origin_energy(const SimilarityFrame& frame, double p, int d, double beta0);

struct MonotonicityReport {
  std::size_t burn_in_index = 0;
  std::size_t violations_after = 0;
  std::size_t violations_before = 0;
  double worst_excess = 0.0;  ///< largest (H[k+1]-H[k]) - tol after burn-in, if positive
  bool pass = false;
};

/// Non-increase of H up to tol_rel (1 + |H|) per step after the first
/// burn_in_fraction of the series.
MonotonicityReport check_monotonicity(const std::vector<EnergyReport>& reports, double burn_in_fraction = 0.2,
                                      double tol_rel = 1e-3);

/// Least-squares fit E(s) = E_inf + C e^{-lambda s} over the tail of the series
/// (lambda scanned); returns E_inf, or the last value when the tail is flat.
double extrapolated_energy_limit(const std::vector<EnergyReport>& reports, double tail_fraction = 0.5);

/// Columns (s, E0, I, J, K, E, H, dissipation, res1, res2).
void write_energy_csv(const std::vector<EnergyReport>& reports, const std::string& path);

}  // namespace blowup
