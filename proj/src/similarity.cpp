#include "blowup/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "blowup/csv.hpp"
#include "blowup/error.hpp"
#include "blowup/weighted_quadrature.hpp"

namespace blowup {

namespace {

void check_cone(double X0, double e, double X_end, bool origin) {
  if (!origin && X0 - e < 0.0)
    throw Error(ErrorKind::ConeOutsideDomain, "backward cone reaches the origin; increase s");
  if (X0 + e > X_end * (1.0 + 1e-14)) throw Error(ErrorKind::ConeOutsideDomain, "backward cone leaves the grid");
}

void fill_frame(SimilarityFrame& f, const std::vector<FieldSample>& samples) {
  const double m = 2.0 / (f.p - 1.0);
  const double scale_w = std::exp(-m * f.s);
  const double scale_d = std::exp(-(m + 1.0) * f.s);
  const std::size_t n = f.y.size();
  f.w.resize(n);
  f.w_s.resize(n);
  f.w_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.w[i] = scale_w * samples[i].U;
    f.w_y[i] = scale_d * samples[i].U_X;
    f.w_s[i] = scale_d * samples[i].U_t - m * f.w[i] - f.y[i] * f.w_y[i];
  }
}

const std::vector<double>& default_nodes(const CoefficientModel& model, bool origin, int n_y) {
  if (!origin) return weighted_rule(WeightKind::Rho, model.p(), model.d(), n_y).nodes;
  if (rho0_exponent(model.p(), model.d()) > -1.0)
    return weighted_rule(WeightKind::Rho0, model.p(), model.d(), n_y).nodes;
  return weighted_rule(WeightKind::RPower, model.p(), model.d(), n_y).nodes;
}

}  // namespace

SimilarityFrame to_similarity(const TraceSampler& sampler, const Trace& trace, const CoefficientModel& model,
                              double x0, double s, const std::vector<double>& y_nodes, double T0) {
  SimilarityFrame f;
  f.x0 = x0;
  f.X0 = model.phi(x0);
  f.T0 = std::isnan(T0) ? trace.T_at(f.X0) : T0;
  f.s = s;
  f.p = model.p();
  f.origin = x0 == 0.0;
  f.y = y_nodes;
  if (!std::isfinite(f.T0)) throw Error(ErrorKind::Precondition, "no finite blow-up time at x0");
  const double e = std::exp(-s);
  if (e > f.T0 * (1.0 + 1e-12)) throw Error(ErrorKind::Precondition, "s is below -log T(x0)");
  if (s > trace.resolved_s_max() + 1e-12)
    throw Error(ErrorKind::Extrapolation, "s exceeds the resolved range of the trace");
  const double t = f.T0 - e;
  if (t > sampler.t_max()) throw Error(ErrorKind::Extrapolation, "frame time beyond the recorded trace");
  check_cone(f.X0, e, trace.X.back(), f.origin);
  std::vector<double> X(y_nodes.size());
  for (std::size_t i = 0; i < X.size(); ++i) X[i] = f.X0 + y_nodes[i] * e;
  fill_frame(f, sampler.sample(X, std::max(t, sampler.t_min())));
  return f;
}

SimilarityFrame to_similarity(const Trace& trace, const CoefficientModel& model, double x0, double s, int n_y) {
  const TraceSampler sampler(trace);
  return to_similarity(sampler, trace, model, x0, s, default_nodes(model, x0 == 0.0, n_y));
}

SimilarityFrame analytic_frame(const AnalyticField& field, double p, double x0, double X0, double T0, double s,
                               const std::vector<double>& y_nodes, bool origin) {
  SimilarityFrame f;
  f.x0 = x0;
  f.X0 = X0;
  f.T0 = T0;
  f.s = s;
  f.p = p;
  f.origin = origin;
  f.y = y_nodes;
  const double e = std::exp(-s);
  const double t = T0 - e;
  std::vector<FieldSample> samples(y_nodes.size());
  for (std::size_t i = 0; i < y_nodes.size(); ++i) {
    const double X = X0 + y_nodes[i] * e;
    samples[i] = {field.U(X, t), field.U_X ? field.U_X(X, t) : 0.0, field.U_t ? field.U_t(X, t) : 0.0};
  }
  fill_frame(f, samples);
  return f;
}

FrameSeries frame_series(const Trace& trace, const CoefficientModel& model, double x0, const SeriesOptions& opts) {
  if (!(opts.ds > 0.0)) throw Error(ErrorKind::Precondition, "ds must be positive");
  const TraceSampler sampler(trace);
  FrameSeries series;
  series.x0 = x0;
  series.X0 = model.phi(x0);
  series.T0 = trace.T_at(series.X0);
  series.ds = opts.ds;
  if (!std::isfinite(series.T0)) throw Error(ErrorKind::Precondition, "no finite blow-up time at x0");
  const bool origin = x0 == 0.0;
  double s_min = -std::log(series.T0) + opts.s_offset;
  if (!origin) s_min = std::max(s_min, -std::log(series.X0 / 2.0));
  s_min = std::max(s_min, -std::log(trace.X.back() - series.X0));
  double s_max = std::min(trace.resolved_s_max(), opts.s_cap);
  if (series.T0 > sampler.t_max()) s_max = std::min(s_max, -std::log(series.T0 - sampler.t_max()));
  if (!(s_max > s_min + 2.0 * opts.ds))
    throw Error(ErrorKind::InsufficientRange, "resolved s-range holds fewer than three frames");
  const auto count = static_cast<std::size_t>(std::floor((s_max - s_min) / opts.ds + 1e-9)) + 1;
  series.s_min = s_min;
  series.s_max = s_min + opts.ds * static_cast<double>(count - 1);
  const auto& nodes = default_nodes(model, origin, opts.n_y);
  series.frames.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    series.frames.push_back(
        to_similarity(sampler, trace, model, x0, s_min + opts.ds * static_cast<double>(k), nodes, series.T0));
  return series;
}

double frame_equation_residual(const SimilarityFrame& prev, const SimilarityFrame& mid, const SimilarityFrame& next,
                               const CoefficientModel& model) {
  const std::size_t n = mid.size();
  if (prev.size() != n || next.size() != n || n < 3)
    throw Error(ErrorKind::Precondition, "frames must share a y-grid with >= 3 nodes");
  const double ds = mid.s - prev.s;
  if (!(ds > 0.0) || std::abs((next.s - mid.s) - ds) > 1e-9 * (1.0 + ds))
    throw Error(ErrorKind::Precondition, "frames must be equally spaced in s");

  const double p = model.p();
  const double m = 2.0 / (p - 1.0);
  const double s = mid.s;
  const double e = std::exp(-s);
  const double beta0 = model.beta(mid.X0);
  const double src_scale = std::exp(-2.0 * p * s / (p - 1.0));
  const double up = std::exp(m * s);
  const double up_d = std::exp((m + 1.0) * s);
  const int d = model.d();
  const double t = mid.T0 - e;

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y = mid.y[i];
    const double h1 = y - mid.y[i - 1];
    const double h2 = mid.y[i + 1] - y;
    const double w_yy = -h2 / (h1 * (h1 + h2)) * mid.w_y[i - 1] + (h2 - h1) / (h1 * h2) * mid.w_y[i] +
                        h1 / (h2 * (h1 + h2)) * mid.w_y[i + 1];
    const double w_ss = (next.w_s[i] - prev.w_s[i]) / (2.0 * ds);
    const double w_ys = (next.w_y[i] - prev.w_y[i]) / (2.0 * ds);
    const double w = mid.w[i];
    const double ws = mid.w_s[i];
    const double wy = mid.w_y[i];
    const double X = mid.X0 + y * e;
    const double power = std::pow(std::abs(w), p - 1.0) * w;

    double rhs = (1.0 - y * y) * w_yy - 2.0 * (p + 1.0) / (p - 1.0) * y * wy -
                 2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)) * w + beta0 * power - (p + 3.0) / (p - 1.0) * ws -
                 2.0 * y * w_ys;
    if (d > 1) rhs += e * (d - 1) / X * wy;
    if (model.has_source()) rhs += src_scale * model.f(up * w);
    const double beta_X = model.beta(X);
    rhs += (beta_X - beta0) * power;
    if (X > 0.0) rhs += src_scale * model.G(X, t, up_d * wy, up_d * (ws + y * wy + m * w));
    worst = std::max(worst, std::abs(w_ss - rhs));
  }
  return worst;
}

void write_frames_csv(const FrameSeries& series, const std::string& path) {
  CsvWriter csv(path, {"s", "y", "w", "w_s", "w_y"});
  for (const auto& f : series.frames)
    for (std::size_t i = 0; i < f.size(); ++i) csv.row({f.s, f.y[i], f.w[i], f.w_s[i], f.w_y[i]});
}

}  // namespace blowup
