#include "blowup/solver.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

namespace {

/// |u|^{p-1} u with exact products for the common integer exponents.
inline double power(double u, double p) {
  if (p == 3.0) return u * u * u;
  if (p == 2.0) return std::abs(u) * u;
  if (p == 5.0) {
    const double u2 = u * u;
    return u2 * u2 * u;
  }
  return std::pow(std::abs(u), p - 1.0) * u;
}

}  // namespace

FieldState make_state(const CoefficientModel& model, double h, double X_max,
                      const std::function<double(double)>& U0,
                      const std::function<double(double)>& V0) {
  if (!(h > 0.0)) throw Error(ErrorKind::Precondition, "grid spacing must be positive");
  if (!(X_max > h)) throw Error(ErrorKind::Precondition, "X_max must exceed h");
  if (X_max > model.X_max() * (1.0 + 1e-12))
    throw Error(ErrorKind::OutOfRange, "X_max exceeds phi(x_max) of the coefficient model");
  const auto n = static_cast<std::size_t>(std::llround(X_max / h)) + 1;
  FieldState s;
  s.h = h;
  s.X.resize(n);
  s.U.resize(n);
  s.V.resize(n);
  s.alive.assign(n, 1);
  for (std::size_t j = 0; j < n; ++j) {
    s.X[j] = h * static_cast<double>(j);
    s.U[j] = U0(s.X[j]);
    s.V[j] = V0(s.X[j]);
  }
  return s;
}

Stepper::Stepper(const CoefficientModel& model, const FieldState& layout, const SolverOptions& opts)
    : model_(model), opts_(opts), h_(layout.h), X_(layout.X) {
  const std::size_t n = X_.size();
  x_.resize(n);
  beta_.resize(n);
  radial_.assign(n, 0.0);
  drift_.assign(n, 0.0);
  sqrt_a_.resize(n);
  amp_scale_.resize(n);
  const bool periodic = opts_.boundary == BoundaryMode::Periodic;
  for (std::size_t j = 0; j < n; ++j) {
    const double X = X_[j];
    x_[j] = model.phi_inverse(std::min(X, model.X_max()));
    beta_[j] = model.b(x_[j]);
    sqrt_a_[j] = x_[j] > 0.0 ? std::sqrt(model.a(x_[j])) : 0.0;
    amp_scale_[j] = std::pow(beta_[j], 1.0 / (model.p() - 1.0)) / model.kappa0();
    if (X > 0.0 && !periodic) {
      radial_[j] = (model.d() - 1) / X;
      drift_[j] = model.drift(X);
    }
  }
}

double Stepper::ode_time_scale(std::size_t j, double U) const {
  if (U == 0.0 || !(beta_[j] > 0.0)) return std::numeric_limits<double>::infinity();
  const double p = model_.p();
  const double amp = amp_scale_[j] * std::abs(U);
  if (p == 3.0) return 1.0 / amp;
  return std::pow(amp, -(p - 1.0) / 2.0);
}

void Stepper::accelerate(const FieldState& state, const std::vector<double>& V, double t,
                         std::vector<double>& out) const {
  const std::size_t n = state.size();
  const auto& U = state.U;
  const auto& alive = state.alive;
  const double inv_h2 = 1.0 / (h_ * h_);
  const double p = model_.p();
  const bool periodic = opts_.boundary == BoundaryMode::Periodic;
  const bool source = model_.has_source();
  const bool gradient = model_.has_gradient_term();
  const int d = model_.d();
  out.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!alive[j]) continue;
    const double u = U[j];
    double uL;
    double uR;
    bool left_ok;
    bool right_ok;
    if (periodic) {
      const std::size_t l = j == 0 ? n - 1 : j - 1;
      const std::size_t r = j + 1 == n ? 0 : j + 1;
      uL = U[l];
      uR = U[r];
      left_ok = alive[l];
      right_ok = alive[r];
    } else {
      const std::size_t l = j == 0 ? 1 : j - 1;
      const std::size_t r = j + 1 == n ? n - 2 : j + 1;
      uL = U[l];
      uR = U[r];
      left_ok = alive[l];
      right_ok = alive[r];
    }
    // A frozen neighbour reflects the opposite one.
    if (!left_ok && !right_ok) {
      uL = uR = u;
    } else if (!left_ok) {
      uL = uR;
    } else if (!right_ok) {
      uR = uL;
    }
    double acc;
    double ux = 0.0;
    if (j == 0 && !periodic) {
      acc = d * (uR - 2.0 * u + uL) * inv_h2;
    } else {
      ux = (uR - uL) / (2.0 * h_);
      acc = (uR - 2.0 * u + uL) * inv_h2 + radial_[j] * ux;
    }
    if (opts_.nonlinear) acc += beta_[j] * power(u, p);
    if (source) acc += model_.f(u);
    acc += drift_[j] * ux;
    if (gradient) {
      const double v = sqrt_a_[j] > 0.0 ? ux / sqrt_a_[j] : 0.0;
      acc += model_.g(x_[j], t, v, V[j]);
    }
    out[j] = acc;
  }
}

std::vector<double> Stepper::acceleration(const FieldState& state) const {
  std::vector<double> out;
  accelerate(state, state.V, state.t, out);
  return out;
}

void Stepper::advance(FieldState& state, double dt) const {
  const std::size_t n = state.size();
  std::vector<double> acc;
  accelerate(state, state.V, state.t, acc);
  std::vector<double> half(state.V);
  for (std::size_t j = 0; j < n; ++j) {
    if (!state.alive[j]) continue;
    half[j] += 0.5 * dt * acc[j];
    state.U[j] += dt * half[j];
  }
  state.t += dt;
  accelerate(state, half, state.t, acc);
  for (std::size_t j = 0; j < n; ++j) {
    if (!state.alive[j]) continue;
    state.V[j] = half[j] + 0.5 * dt * acc[j];
  }
}

FieldState step(const FieldState& state, const CoefficientModel& model, double dt,
                const SolverOptions& opts) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Precondition, "dt must be positive");
  if (dt > opts.cfl * state.h * (1.0 + 1e-12))
    throw Error(ErrorKind::Precondition, "dt violates the CFL bound");
  if (std::none_of(state.alive.begin(), state.alive.end(), [](auto a) { return a != 0; }))
    throw Error(ErrorKind::Precondition, "no alive node");
  Stepper stepper(model, state, opts);
  FieldState next = state;
  stepper.advance(next, dt);
  for (std::size_t j = 0; j < next.size(); ++j) {
    if (!next.alive[j]) continue;
    if (!std::isfinite(next.U[j]) || !std::isfinite(next.V[j]))
      throw Error(ErrorKind::Instability, "non-finite value at X = " + std::to_string(next.X[j]));
    if (std::abs(next.U[j]) >= opts.overflow_guard) next.alive[j] = 0;
  }
  return next;
}

BlowupFit detect_blowup_time(const std::vector<double>& crossing_times,
                             const std::vector<double>& thresholds, double p, double tolerance) {
  BlowupFit fit;
  const std::size_t n = std::min(crossing_times.size(), thresholds.size());
  if (n < 3) return fit;
  const double m = 2.0 / (p - 1.0);
  const double t_first = crossing_times.front();
  const double t_last = crossing_times[n - 1];
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = std::log(std::abs(thresholds[k]));

  // Slope fixed, intercept in closed form; the residual is minimized over T only.
  const auto residual = [&](double log_gap) {
    const double T = t_last + std::exp(log_gap);
    double mean = 0.0;
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) {
      r[k] = y[k] + m * std::log(T - crossing_times[k]);
      mean += r[k];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n));
  };

  const double span = std::max(t_last - t_first, 1e-300);
  const double lo = std::log(span) - 12.0;
  const double hi = std::log(span) + 8.0;
  constexpr int scan = 400;
  int best = 0;
  double best_r = residual(lo);
  for (int i = 1; i <= scan; ++i) {
    const double r = residual(lo + (hi - lo) * i / scan);
    if (r < best_r) {
      best_r = r;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / scan;
  double b = lo + (hi - lo) * std::min(best + 1, scan) / scan;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double e = a + g * (b - a);
  double fc = residual(c);
  double fe = residual(e);
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - g * (b - a);
      fc = residual(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + g * (b - a);
      fe = residual(e);
    }
  }
  const double u = 0.5 * (a + b);
  fit.T = t_last + std::exp(u);
  fit.residual = residual(u);
  fit.poor_fit = fit.residual > tolerance;
  return fit;
}

OdeCompletion ode_completion(double p, double beta, double t, double U, double V,
                             const std::vector<double>& levels) {
  if (!(p > 1.0) || !(beta > 0.0)) throw Error(ErrorKind::Precondition, "need p > 1 and beta > 0");
  if (!(U * V > 0.0)) throw Error(ErrorKind::Precondition, "completion needs |U| increasing");
  const double A = std::abs(U);
  const double k = 2.0 / (p - 1.0);
  const double v2 = V * V / std::pow(A, p + 1.0);
  const double c = 2.0 * beta / (p + 1.0);
  const double scale = k * std::pow(A, 0.5 * (1.0 - p));
  // u = A w^{-k}; dt = k A^{(1-p)/2} dw / sqrt(v2 z + c (1 - z)), z = w^{k(p+1)}.
  const auto integrand = [&](double w) {
    const double z = std::pow(w, k * (p + 1.0));
    return scale / std::sqrt(v2 * z + c * (1.0 - z));
  };
  static const QuadratureRule rule = gauss_legendre(32);
  OdeCompletion out;
  double elapsed = 0.0;
  double w_prev = 1.0;
  for (double level : levels) {
    if (!(level > A)) throw Error(ErrorKind::Precondition, "completion levels must exceed |U|");
    const double w = std::pow(A / level, 1.0 / k);
    if (w > w_prev) throw Error(ErrorKind::Precondition, "completion levels must increase");
    elapsed += integrate_gl(integrand, w, w_prev, rule);
    out.crossing_times.push_back(t + elapsed);
    w_prev = w;
  }
  out.T = t + elapsed + integrate_gl(integrand, 0.0, w_prev, rule);
  return out;
}

Solver::Solver(const CoefficientModel& model, SolverOptions opts) : model_(model), opts_(opts) {
  if (!(opts_.cfl > 0.0 && opts_.cfl <= 0.9)) throw Error(ErrorKind::Validation, "CFL must lie in (0, 0.9]");
  if (!(opts_.c_nl > 0.0)) throw Error(ErrorKind::Validation, "c_nl must be positive");
  if (!(opts_.first_threshold > 0.0 && opts_.overflow_guard > opts_.first_threshold))
    throw Error(ErrorKind::Validation, "threshold sequence is empty");
}

namespace {

Snapshot take_snapshot(const FieldState& s, const std::vector<double>& acc) {
  return Snapshot{s.t, s.U, s.V, acc, s.alive};
}

}  // namespace

Trace Solver::run(FieldState state) const {
  const std::size_t n = state.size();
  Stepper stepper(model_, state, opts_);

  std::vector<double> thresholds;
  for (double u = opts_.first_threshold; u < opts_.overflow_guard; u *= 2.0) thresholds.push_back(u);

  Trace trace;
  trace.h = state.h;
  trace.p = model_.p();
  trace.d = model_.d();
  trace.floor_cells = opts_.floor_cells;
  trace.X = state.X;
  trace.T.assign(n, std::numeric_limits<double>::infinity());
  trace.T_residual.assign(n, 0.0);
  trace.poor_fit.assign(n, 0);
  trace.cone_frozen.assign(n, 0);

  std::vector<std::size_t> next_k(n, 0);
  std::vector<std::vector<double>> crossings(n);
  std::vector<double> kill_time(n, std::numeric_limits<double>::infinity());

  std::vector<double> acc = stepper.acceleration(state);
  if (opts_.record_snapshots) trace.snapshots.push_back(take_snapshot(state, acc));
  double last_snap = state.t;
  const double floor_tau = opts_.floor_cells * state.h;

  const auto fit_node = [&](std::size_t j) {
    const auto& c = crossings[j];
    if (c.size() < 3) return BlowupFit{};
    const std::size_t k0 = c.size() - 3;
    const std::vector<double> times(c.begin() + static_cast<long>(k0), c.end());
    const std::vector<double> thr(thresholds.begin() + static_cast<long>(k0),
                                  thresholds.begin() + static_cast<long>(c.size()));
    return detect_blowup_time(times, thr, model_.p(), opts_.fit_tolerance);
  };

  const auto kill = [&](std::size_t j, double T, bool by_cone) {
    state.alive[j] = 0;
    trace.T[j] = T;
    trace.cone_frozen[j] = by_cone ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i)
      if (state.alive[i]) kill_time[i] = std::min(kill_time[i], T + std::abs(state.X[i] - state.X[j]));
  };

  std::vector<double> U_old(n);
  std::vector<double> half(n);
  std::size_t steps = 0;
  while (state.t < opts_.t_max) {
    bool any_alive = false;
    double tau_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!state.alive[j]) continue;
      any_alive = true;
      if (opts_.nonlinear) tau_min = std::min(tau_min, stepper.ode_time_scale(j, state.U[j]));
    }
    if (!any_alive) break;
    if (++steps > opts_.max_steps) throw Error(ErrorKind::StepUnderflow, "step budget exhausted");

    // Graded: dt / tau ~ sqrt(tau) down to the resolution floor, relaxing back to 1 below it.
    const double grade = tau_min >= floor_tau ? std::sqrt(std::min(tau_min, 1.0))
                                              : std::min(1.0, floor_tau / std::sqrt(tau_min));
    double dt = std::min({opts_.cfl * state.h, opts_.c_nl * tau_min * grade, opts_.t_max - state.t});
    if (!(state.t + dt > state.t)) throw Error(ErrorKind::StepUnderflow, "time step underflow");

    const auto dead_before = std::count(state.alive.begin(), state.alive.end(), 0);
    U_old = state.U;
    // Velocity Verlet with the acceleration carried over from the previous step.
    for (std::size_t j = 0; j < n; ++j) {
      half[j] = state.V[j];
      if (!state.alive[j]) continue;
      half[j] += 0.5 * dt * acc[j];
      state.U[j] += dt * half[j];
    }
    const double t_old = state.t;
    state.t += dt;
    std::swap(state.V, half);
    acc = stepper.acceleration(state);
    std::swap(state.V, half);
    for (std::size_t j = 0; j < n; ++j) {
      if (!state.alive[j]) continue;
      state.V[j] = half[j] + 0.5 * dt * acc[j];
      if (!std::isfinite(state.U[j]) || !std::isfinite(state.V[j]))
        throw Error(ErrorKind::Instability, "non-finite value at X = " + std::to_string(state.X[j]));
    }

    for (std::size_t j = 0; j < n; ++j) {
      if (!state.alive[j]) continue;
      const double a_new = std::abs(state.U[j]);
      const double a_old = std::abs(U_old[j]);
      while (next_k[j] < thresholds.size() && a_new >= thresholds[next_k[j]]) {
        const double thr = thresholds[next_k[j]];
        double tc = state.t;
        if (a_old > 0.0 && a_new > a_old && a_old < thr) {
          const double w = (std::log(thr) - std::log(a_old)) / (std::log(a_new) - std::log(a_old));
          tc = t_old + w * dt;
        }
        crossings[j].push_back(tc);
        ++next_k[j];
      }
      if (opts_.nonlinear && opts_.handoff_cells > 0.0 && next_k[j] < thresholds.size() &&
          state.U[j] * state.V[j] > 0.0 &&
          stepper.ode_time_scale(j, state.U[j]) <= opts_.handoff_cells * state.h) {
        const std::vector<double> rest(thresholds.begin() + static_cast<long>(next_k[j]), thresholds.end());
        const OdeCompletion c = ode_completion(model_.p(), stepper.beta(j), state.t, state.U[j], state.V[j], rest);
        crossings[j].insert(crossings[j].end(), c.crossing_times.begin(), c.crossing_times.end());
        next_k[j] = thresholds.size();
      }
      if (next_k[j] == thresholds.size() || a_new >= opts_.overflow_guard) {
        const BlowupFit fit = fit_node(j);
        const double T = std::isfinite(fit.T) ? std::min(fit.T, kill_time[j]) : std::min(state.t, kill_time[j]);
        trace.T_residual[j] = fit.residual;
        trace.poor_fit[j] = fit.poor_fit ? 1 : 0;
        kill(j, T, T == kill_time[j] && kill_time[j] < fit.T);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!state.alive[j] || state.t < kill_time[j]) continue;
      const BlowupFit fit = fit_node(j);
      trace.T_residual[j] = fit.residual;
      trace.poor_fit[j] = fit.poor_fit ? 1 : 0;
      const bool by_cone = !(fit.T < kill_time[j]);
      kill(j, by_cone ? kill_time[j] : fit.T, by_cone);
    }

    // Carried accelerations of nodes next to a fresh death still see the dead value.
    if (std::count(state.alive.begin(), state.alive.end(), 0) != dead_before) acc = stepper.acceleration(state);

    if (opts_.record_snapshots &&
        state.t - last_snap >= opts_.snapshot_eps * std::max(tau_min, floor_tau)) {
      trace.snapshots.push_back(take_snapshot(state, acc));
      last_snap = state.t;
    }
  }
  if (opts_.record_snapshots && trace.snapshots.back().t < state.t)
    trace.snapshots.push_back(take_snapshot(state, acc));
  trace.t_end = state.t;
  trace.steps = steps;
  return trace;
}

}  // namespace blowup
