#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "blowup/coefficients.hpp"
#include "blowup/trace.hpp"

namespace blowup {

/// w(y, s) = (T0 - t)^{2/(p-1)} U(X0 + y e^{-s}, T0 - e^{-s}) and its first derivatives.
struct SimilarityFrame {
  double x0 = 0.0;
  double X0 = 0.0;
  double T0 = 0.0;
  double s = 0.0;
  double p = 3.0;
  bool origin = false;  ///< y in (0, 1) instead of (-1, 1)
  std::vector<double> y;
  std::vector<double> w;
  std::vector<double> w_s;
  std::vector<double> w_y;

  std::size_t size() const { return y.size(); }
};

/// Frame on the given y nodes. T0 defaults to the trace estimate at X0 when NaN.
SimilarityFrame to_similarity(const TraceSampler& sampler, const Trace& trace, const CoefficientModel& model,
                              double x0, double s, const std::vector<double>& y_nodes,
                              double T0 = std::numeric_limits<double>::quiet_NaN());

/// Frame on the default quadrature nodes: the rho rule for x0 > 0, the rho0 rule
/// (or the r^{d-1} rule when rho0 is not integrable) at the origin.
SimilarityFrame to_similarity(const Trace& trace, const CoefficientModel& model, double x0, double s, int n_y);

/// Frame of an analytic field U(X, t) with derivatives, for oracles and tests.
struct AnalyticField {
  std::function<double(double, double)> U;
  std::function<double(double, double)> U_X;
  std::function<double(double, double)> U_t;
};
SimilarityFrame analytic_frame(const AnalyticField& field, double p, double x0, double X0, double T0, double s,
                               const std::vector<double>& y_nodes, bool origin = false);

struct FrameSeries {
  double x0 = 0.0;
  double X0 = 0.0;
  double T0 = 0.0;
  double ds = 0.01;
  double s_min = 0.0;
  double s_max = 0.0;
  std::vector<SimilarityFrame> frames;
};

struct SeriesOptions {
  double ds = 0.01;
  int n_y = 128;
  double s_offset = 0.5;  ///< s_min = -log T0 + s_offset (and at least -log(X0/2))
  double s_cap = std::numeric_limits<double>::infinity();
};

/// Uniform s-ladder from s_min to the resolved s_max of the trace.
FrameSeries frame_series(const Trace& trace, const CoefficientModel& model, double x0,
                         const SeriesOptions& opts = {});

/// Max-norm residual of the full w-equation at the middle frame, with w_ss and w_ys
/// from centered differences of the neighbouring frames and w_yy from
/// three-point differences of w_y in y (interior nodes only).
double frame_equation_residual(const SimilarityFrame& prev, const SimilarityFrame& mid,
                               const SimilarityFrame& next, const CoefficientModel& model);

/// Rows (s, y, w, w_s, w_y).
void write_frames_csv(const FrameSeries& series, const std::string& path);

}  // namespace blowup
