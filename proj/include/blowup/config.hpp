#pragma once

#include <map>
#include <string>
#include <vector>

#include "blowup/coefficients.hpp"
#include "blowup/solver.hpp"

namespace blowup {

struct CoefficientConfig {
  std::string family = "constant";  ///< power_law | constant | tabulated
  double alpha = 0.0;
  int N = 1;
  int d = 1;  ///< constant and tabulated families only
  std::string table;
  ModelOptions options;
};

struct InitialConfig {
  std::string preset = "flat_ode";  ///< flat_ode | gaussian_bump | soliton_seed
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double T0 = 1.0;     ///< flat_ode and soliton_seed blow-up time
  double d_hat = 0.0;  ///< soliton_seed slope
};

struct GridConfig {
  double h = 1.0 / 512.0;
  double X_max = 1.0;
};

struct AnalysisConfig {
  std::vector<double> x0{0.5};
  double ds = 0.01;
  int n_y = 128;
  double s_offset = 0.5;
  double s_cap = 1e300;
  double mu = 1.0;
  double burn_in = 0.2;
  double c1 = 1.0;
  int soliton_k = 3;
  double soliton_s0 = 10.0;
  double soliton_s_end = 1e4;
  double soliton_tol = 1e-10;
  double soliton_perturbation = 0.5;
  std::vector<int> norm_d{2, 3};
  double norm_R = 25.0;
  double norm_h = 0.01;
};

struct RunConfig {
  CoefficientConfig coefficients;
  InitialConfig initial;
  GridConfig grid;
  SolverOptions solver;
  AnalysisConfig analysis;
  std::string output_dir = "out";
  /// Every key as read, "section.key" -> value, for hashing.
  std::map<std::string, std::string> raw;
};

/// INI text with [coefficients], [initial], [grid], [solver], [analysis], [output].
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Range checks; throws Error(Validation).
void validate(const RunConfig& config);

/// Canonical "section.key=value" lines in key order.
std::string canonical_text(const RunConfig& config);

CoefficientModel build_model(const RunConfig& config);
FieldState build_initial_state(const RunConfig& config, const CoefficientModel& model);

}  // namespace blowup
