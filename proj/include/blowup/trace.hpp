#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace blowup {

struct Snapshot {
  double t = 0.0;
  std::vector<double> U;
  std::vector<double> V;
  std::vector<double> A;  ///< U_tt
  std::vector<std::uint8_t> alive;
};

/// Solver output: snapshot history plus per-node blow-up estimates.
struct Trace {
  double h = 0.0;
  double p = 3.0;
  int d = 1;
  int floor_cells = 16;
  std::vector<double> X;
  std::vector<Snapshot> snapshots;
  std::vector<double> T;           ///< +inf where the node never blew up
  std::vector<double> T_residual;
  std::vector<std::uint8_t> poor_fit;
  std::vector<std::uint8_t> cone_frozen;  ///< T taken from a neighbour's cone
  double t_end = 0.0;
  std::size_t steps = 0;

  /// -log(floor_cells * h): beyond this the backward cone spans fewer than
  /// 2 floor_cells grid cells.
  double resolved_s_max() const;

  /// Linear interpolation of T between grid nodes.
  double T_at(double X) const;
};

void save_trace(const Trace& trace, const std::string& path);
Trace load_trace(const std::string& path);

struct FieldSample {
  double U = 0.0;
  double U_X = 0.0;
  double U_t = 0.0;
};

/// Piecewise cubic Hermite reconstruction of U(X, t) from the snapshots:
/// in X with fourth-order finite-difference slopes and mirror ghosts at both
/// ends, in t with the stored time derivatives (U, V) and (V, A).
class TraceSampler {
 public:
  explicit TraceSampler(const Trace& trace);

  FieldSample sample(double X, double t) const;
  /// Batch version; X need not be sorted.
  std::vector<FieldSample> sample(const std::vector<double>& X, double t) const;

  double t_min() const;
  double t_max() const;

 private:
  struct Spatial {
    double value;
    double slope;
  };
  Spatial spatial(const std::vector<double>& field, double X) const;
  double slope_at(const std::vector<double>& field, long j) const;
  double ghost(const std::vector<double>& field, long j) const;

  const Trace& trace_;
};

}  // namespace blowup
