#pragma once

#include <string>
#include <vector>

#include "blowup/trace.hpp"

namespace blowup {

enum class PointClass { NonCharacteristic, Characteristic, Undetermined };

struct Classification {
  PointClass kind = PointClass::Undetermined;
  double delta = 0.0;  ///< cone slope, meaningful for NonCharacteristic
};

/// Sampled blow-up curve T_U(X).
struct BlowupCurve {
  std::vector<double> X;
  std::vector<double> T;
  std::vector<double> T_prime;
  std::vector<Classification> classes;

  /// Largest |T[i+1] - T[i]| / |X[i+1] - X[i]| over finite neighbours.
  double lipschitz_constant() const;
};

struct ClassifyOptions {
  double radius = 0.25;     ///< neighbourhood half-width in X
  double delta_min = 1e-3;
  double tol = 0.05;        ///< slopes >= 1 - tol count as characteristic
};

/// Centered differences for T_prime (one-sided at the ends and next to +inf).
BlowupCurve make_curve(const std::vector<double>& X, const std::vector<double>& T);
BlowupCurve curve_from_trace(const Trace& trace);

Classification classify_point(const BlowupCurve& curve, double X0, const ClassifyOptions& opts = {});

/// Fills curve.classes for every finite node.
void classify_all(BlowupCurve& curve, const ClassifyOptions& opts = {});

void write_curve_csv(const BlowupCurve& curve, const std::string& path);

}  // namespace blowup
