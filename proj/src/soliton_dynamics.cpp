#include "blowup/soliton_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "blowup/csv.hpp"
#include "blowup/error.hpp"

namespace blowup {

namespace {

void check_state(const SolitonState& st) {
  if (st.k() < 2) throw Error(ErrorKind::Precondition, "need at least two solitons");
  if (!(st.p > 1.0) || !(st.c1 > 0.0)) throw Error(ErrorKind::Precondition, "need p > 1 and c1 > 0");
  for (int i = 1; i < st.k(); ++i)
    if (!(st.xi[i] > st.xi[i - 1])) throw Error(ErrorKind::Precondition, "centers must be strictly increasing");
}

void rhs_into(const std::vector<double>& xi, double c1, double m, std::vector<double>& out) {
  const std::size_t k = xi.size();
  out.assign(k, 0.0);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double coupling = c1 * std::exp(-m * (xi[i + 1] - xi[i]));
    out[i] -= coupling;
    out[i + 1] += coupling;
  }
}

}  // namespace

std::vector<double> ode_rhs(const SolitonState& state) {
  check_state(state);
  std::vector<double> out;
  rhs_into(state.xi, state.c1, 2.0 / (state.p - 1.0), out);
  return out;
}

std::vector<SolitonState> integrate(const SolitonState& state, double s_end, double tol, int samples_per_decade) {
  check_state(state);
  if (!(s_end > state.s)) throw Error(ErrorKind::Precondition, "s_end must exceed the start time");
  if (!(state.s > 0.0)) throw Error(ErrorKind::Precondition, "start time must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::Precondition, "tolerance must be positive");

  std::vector<double> times{state.s};
  const double decades = std::log10(s_end / state.s);
  const int count = std::max(1, static_cast<int>(std::ceil(decades * samples_per_decade)));
  for (int i = 1; i < count; ++i) times.push_back(state.s * std::pow(10.0, decades * i / count));
  times.push_back(s_end);

  using Vec = std::vector<double>;
  namespace odeint = boost::numeric::odeint;
  const double m = 2.0 / (state.p - 1.0);
  const double c1 = state.c1;
  auto system = [c1, m](const Vec& x, Vec& dx, double) { rhs_into(x, c1, m, dx); };

  std::vector<SolitonState> series;
  Vec x = state.xi;
  auto observer = [&](const Vec& xi, double s) {
    for (std::size_t i = 1; i < xi.size(); ++i)
      if (!(xi[i] - xi[i - 1] > 1e-12))
        throw Error(ErrorKind::StepUnderflow, "soliton ordering collapsed");
    series.push_back(SolitonState{xi, s, state.c1, state.p});
  };
  try {
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<Vec>());
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), 1e-3 * state.s, observer);
  } catch (const odeint::step_adjustment_error& e) {
    throw Error(ErrorKind::StepUnderflow, e.what());
  } catch (const odeint::no_progress_error& e) {
    throw Error(ErrorKind::StepUnderflow, e.what());
  }
  return series;
}

std::vector<double> ansatz_offsets(int k, double p, double c1) {
  if (k < 2 || !(p > 1.0) || !(c1 > 0.0)) throw Error(ErrorKind::Precondition, "need k >= 2, p > 1, c1 > 0");
  // Gap constants from c1 e^{-(2/(p-1)) g_i} = (p-1) i (k-i) / 4.
  std::vector<double> alpha(k, 0.0);
  for (int i = 1; i < k; ++i) {
    const double gap = (p - 1.0) / 2.0 * std::log(4.0 * c1 / ((p - 1.0) * i * (k - i)));
    alpha[i] = alpha[i - 1] + gap;
  }
  double mean = 0.0;
  for (double a : alpha) mean += a;
  mean /= k;
  for (double& a : alpha) a -= mean;
  return alpha;
}

std::vector<double> explicit_ansatz(int k, double p, double c1, double s) {
  if (!(s > 1.0)) throw Error(ErrorKind::Precondition, "the explicit solution needs s > 1");
  std::vector<double> xi = ansatz_offsets(k, p, c1);
  const double ls = std::log(s);
  for (int i = 1; i <= k; ++i) xi[i - 1] += (i - (k + 1) / 2.0) * (p - 1.0) / 2.0 * ls;
  return xi;
}

double d_hat_value(double xi, double xi0_shift) {
  const double arg = xi + xi0_shift;
  if (std::abs(arg) >= std::numbers::pi / 2.0) throw Error(ErrorKind::Domain, "|xi + xi0| reached pi/2");
  return -std::tan(arg);
}

DHatSeries d_hat_trajectory(const std::vector<SolitonState>& series, double xi0_shift) {
  DHatSeries out;
  for (const auto& st : series) {
    std::vector<double> d;
    std::vector<bool> flag;
    for (double xi : st.xi) {
      const double v = d_hat_value(xi, xi0_shift);
      d.push_back(v);
      flag.push_back(std::abs(v) >= 1.0 - 1e-12);
    }
    out.s.push_back(st.s);
    out.d_hat.push_back(std::move(d));
    out.boundary.push_back(std::move(flag));
  }
  return out;
}

void write_soliton_series_csv(const std::vector<SolitonState>& series, const std::string& path) {
  if (series.empty()) throw Error(ErrorKind::Precondition, "empty soliton series");
  std::vector<std::string> header{"s"};
  for (int i = 1; i <= series.front().k(); ++i) header.push_back("xi_" + std::to_string(i));
  CsvWriter csv(path, header);
  for (const auto& st : series) {
    std::vector<double> row{st.s};
    row.insert(row.end(), st.xi.begin(), st.xi.end());
    csv.row(row);
  }
}

void write_ansatz_csv(const std::vector<SolitonState>& series, const std::string& path) {
  CsvWriter csv(path, {"s", "gap_index", "gap_observed", "gap_ansatz"});
  for (const auto& st : series) {
    if (!(st.s > 1.0)) continue;
    const auto ref = explicit_ansatz(st.k(), st.p, st.c1, st.s);
    for (int i = 1; i < st.k(); ++i)
      csv.row({st.s, static_cast<double>(i), st.xi[i] - st.xi[i - 1], ref[i] - ref[i - 1]});
  }
}

}  // namespace blowup
