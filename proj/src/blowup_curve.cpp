#include "blowup/blowup_curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "blowup/csv.hpp"
#include "blowup/error.hpp"

namespace blowup {

double BlowupCurve::lipschitz_constant() const {
  double L = 0.0;
  for (std::size_t i = 0; i + 1 < X.size(); ++i) {
    if (!std::isfinite(T[i]) || !std::isfinite(T[i + 1])) continue;
    L = std::max(L, std::abs(T[i + 1] - T[i]) / std::abs(X[i + 1] - X[i]));
  }
  return L;
}

BlowupCurve make_curve(const std::vector<double>& X, const std::vector<double>& T) {
  if (X.size() != T.size() || X.size() < 2) throw Error(ErrorKind::Precondition, "curve needs matching X and T of size >= 2");
  BlowupCurve c;
  c.X = X;
  c.T = T;
  c.T_prime.assign(X.size(), std::numeric_limits<double>::quiet_NaN());
  c.classes.assign(X.size(), Classification{});
  const std::size_t n = X.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(T[i])) continue;
    const bool left = i > 0 && std::isfinite(T[i - 1]);
    const bool right = i + 1 < n && std::isfinite(T[i + 1]);
    if (left && right)
      c.T_prime[i] = (T[i + 1] - T[i - 1]) / (X[i + 1] - X[i - 1]);
    else if (right)
      c.T_prime[i] = (T[i + 1] - T[i]) / (X[i + 1] - X[i]);
    else if (left)
      c.T_prime[i] = (T[i] - T[i - 1]) / (X[i] - X[i - 1]);
  }
  return c;
}

BlowupCurve curve_from_trace(const Trace& trace) { return make_curve(trace.X, trace.T); }

namespace {

double interpolate_T(const BlowupCurve& c, double X0) {
  const auto it = std::lower_bound(c.X.begin(), c.X.end(), X0);
  if (it == c.X.end()) throw Error(ErrorKind::OutOfRange, "X0 beyond the curve samples");
  const std::size_t j = static_cast<std::size_t>(it - c.X.begin());
  if (c.X[j] == X0 || j == 0) return c.T[j];
  const double w = (X0 - c.X[j - 1]) / (c.X[j] - c.X[j - 1]);
  return (1.0 - w) * c.T[j - 1] + w * c.T[j];
}

}  // namespace

Classification classify_point(const BlowupCurve& curve, double X0, const ClassifyOptions& opts) {
  const double T0 = interpolate_T(curve, X0);
  if (!std::isfinite(T0)) throw Error(ErrorKind::Precondition, "no finite blow-up time at X0");
  struct Sample {
    double dist;
    double slope;  // (T0 - T) / |X - X0|
    int side;
  };
  std::vector<Sample> samples;
  for (std::size_t j = 0; j < curve.X.size(); ++j) {
    const double dx = curve.X[j] - X0;
    if (std::abs(dx) <= 1e-12 * std::max(1.0, std::abs(X0))) continue;
    if (std::abs(dx) > opts.radius || !std::isfinite(curve.T[j])) continue;
    samples.push_back({std::abs(dx), (T0 - curve.T[j]) / std::abs(dx), dx < 0 ? -1 : 1});
  }
  if (samples.size() < 8) throw Error(ErrorKind::InsufficientResolution, "fewer than 8 curve samples near X0");

  double delta = opts.delta_min;
  for (const auto& s : samples) delta = std::max(delta, s.slope);

  // Local one-sided slope magnitude from the nearest samples on each side.
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.dist < b.dist; });
  bool steep_side = false;
  for (int side : {-1, 1}) {
    int used = 0;
    double sum = 0.0;
    for (const auto& s : samples) {
      if (s.side != side) continue;
      sum += std::abs(s.slope);
      if (++used == 4) break;
    }
    if (used > 0 && sum / used >= 1.0 - opts.tol) steep_side = true;
  }

  Classification c;
  if (steep_side) {
    c.kind = PointClass::Characteristic;
    c.delta = 1.0;
  } else if (delta < 1.0 - opts.tol) {
    c.kind = PointClass::NonCharacteristic;
    c.delta = delta;
  } else {
    c.kind = PointClass::Undetermined;
    c.delta = delta;
  }
  return c;
}

void classify_all(BlowupCurve& curve, const ClassifyOptions& opts) {
  for (std::size_t j = 0; j < curve.X.size(); ++j) {
    if (!std::isfinite(curve.T[j])) continue;
    try {
      curve.classes[j] = classify_point(curve, curve.X[j], opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientResolution) throw;
      curve.classes[j] = Classification{};
    }
  }
}

namespace {

const char* class_name(PointClass k) {
  switch (k) {
    case PointClass::NonCharacteristic: return "non_characteristic";
    case PointClass::Characteristic: return "characteristic";
    case PointClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

}  // namespace

void write_curve_csv(const BlowupCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << "X,T,T_prime,class,delta\n";
  for (std::size_t j = 0; j < curve.X.size(); ++j) {
    out << format_double(curve.X[j]) << ',' << format_double(curve.T[j]) << ',' << format_double(curve.T_prime[j])
        << ',' << class_name(curve.classes[j].kind) << ',' << format_double(curve.classes[j].delta) << '\n';
  }
}

}  // namespace blowup
