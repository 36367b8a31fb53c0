#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "blowup/coefficients.hpp"
#include "blowup/trace.hpp"

namespace blowup {

/// Discretized (U, dU/dt) on the uniform grid X_j = j h, j = 0..n-1.
struct FieldState {
  double h = 0.0;
  std::vector<double> X;
  std::vector<double> U;
  std::vector<double> V;
  double t = 0.0;
  std::vector<std::uint8_t> alive;

  std::size_t size() const { return X.size(); }
};

enum class BoundaryMode {
  Neumann,   ///< mirror ghost at X_max
  Periodic,  ///< wrap-around, only for d = 1 test harnesses
};

struct SolverOptions {
  double cfl = 0.5;
  double c_nl = 0.02;              ///< dt <= c_nl * tau * grade(tau), tau the ODE time scale
  double t_max = 10.0;
  double first_threshold = 100.0;  ///< thresholds first_threshold * 2^k
  double overflow_guard = 1e12;
  double snapshot_eps = 0.04;
  int floor_cells = 16;            ///< snapshot spacing never drops below eps * floor_cells * h
  bool record_snapshots = true;
  bool nonlinear = true;           ///< switch off beta |U|^{p-1} U for linear tests
  BoundaryMode boundary = BoundaryMode::Neumann;
  double fit_tolerance = 1e-6;     ///< residual above this sets a poor-fit warning
  std::size_t max_steps = 50'000'000;
  /// Once tau <= handoff_cells * h the node finishes on the exact ODE; 0 disables.
  double handoff_cells = 1.0 / 32.0;
};

FieldState make_state(const CoefficientModel& model, double h, double X_max,
                      const std::function<double(double)>& U0,
                      const std::function<double(double)>& V0);

/// Per-node coefficients of the X-equation, computed once per grid.
class Stepper {
 public:
  Stepper(const CoefficientModel& model, const FieldState& layout, const SolverOptions& opts);

  /// One velocity-Verlet (leapfrog) step of size dt. Frozen nodes are left untouched.
  void advance(FieldState& state, double dt) const;

  /// U_tt at the current state (alive nodes; 0 elsewhere).
  std::vector<double> acceleration(const FieldState& state) const;

  /// Time scale (beta^{1/(p-1)} |U| / kappa0)^{-(p-1)/2}; +inf for U = 0.
  double ode_time_scale(std::size_t j, double U) const;
  double beta(std::size_t j) const { return beta_[j]; }

 private:
  void accelerate(const FieldState& state, const std::vector<double>& V, double t,
                  std::vector<double>& out) const;

  const CoefficientModel& model_;
  SolverOptions opts_;
  double h_ = 0.0;
  std::vector<double> X_;
  std::vector<double> x_;
  std::vector<double> beta_;
  std::vector<double> radial_;  ///< (d-1)/X, with X = 0 handled separately
  std::vector<double> drift_;
  std::vector<double> sqrt_a_;
  std::vector<double> amp_scale_;  ///< beta^{1/(p-1)} / kappa0
};

struct OdeCompletion {
  std::vector<double> crossing_times;  ///< one per level, in order
  double T = 0.0;
};

/// Exact continuation of u'' = beta |u|^{p-1} u from (U, V) at time t: the times at
/// which |u| reaches each level (all above |U|) and the blow-up time. Needs U V > 0.
OdeCompletion ode_completion(double p, double beta, double t, double U, double V,
                             const std::vector<double>& levels);

/// Single step from a freshly built Stepper; convenient for tests, slow in loops.
FieldState step(const FieldState& state, const CoefficientModel& model, double dt,
                const SolverOptions& opts = {});

struct BlowupFit {
  double T = std::numeric_limits<double>::infinity();
  double residual = 0.0;
  bool poor_fit = false;
};

/// Fits log|U_k| = log C - (2/(p-1)) log(T - t_k) through the crossing times t_k of
/// the thresholds U_k. Fewer than 3 crossings give T = +inf.
BlowupFit detect_blowup_time(const std::vector<double>& crossing_times,
                             const std::vector<double>& thresholds, double p,
                             double tolerance = 1e-6);

class Solver {
 public:
  Solver(const CoefficientModel& model, SolverOptions opts);

  /// Integrates until every node is frozen or t_max is reached.
  Trace run(FieldState state) const;

  const SolverOptions& options() const { return opts_; }

 private:
  const CoefficientModel& model_;
  SolverOptions opts_;
};

}  // namespace blowup
