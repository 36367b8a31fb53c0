#include "blowup/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "blowup/error.hpp"

namespace blowup {

namespace {

constexpr char kMagic[8] = {'B', 'L', 'W', 'T', 'R', 'C', '0', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void put_vec(std::ofstream& out, const std::vector<T>& v) {
  put<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorKind::Io, "truncated trace file");
  return v;
}

template <typename T>
std::vector<T> get_vec(std::ifstream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (1ull << 34)) throw Error(ErrorKind::Io, "corrupt trace file");
  std::vector<T> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw Error(ErrorKind::Io, "truncated trace file");
  return v;
}

void hermite_basis(double s, double& h00, double& h10, double& h01, double& h11) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  h00 = 2 * s3 - 3 * s2 + 1;
  h10 = s3 - 2 * s2 + s;
  h01 = -2 * s3 + 3 * s2;
  h11 = s3 - s2;
}

}  // namespace

double Trace::resolved_s_max() const { return -std::log(floor_cells * h); }

double Trace::T_at(double Xq) const {
  if (X.empty()) throw Error(ErrorKind::Precondition, "empty trace");
  if (Xq < 0.0 || Xq > X.back() * (1.0 + 1e-14)) throw Error(ErrorKind::OutOfRange, "X outside the trace grid");
  const double r = Xq / h;
  auto j = static_cast<std::size_t>(std::floor(r));
  if (j >= X.size() - 1) return T.back();
  const double w = r - static_cast<double>(j);
  if (w == 0.0) return T[j];
  if (!std::isfinite(T[j]) || !std::isfinite(T[j + 1])) return std::numeric_limits<double>::infinity();
  return (1.0 - w) * T[j] + w * T[j + 1];
}

void save_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out.write(kMagic, sizeof kMagic);
  put(out, trace.h);
  put(out, trace.p);
  put<std::int32_t>(out, trace.d);
  put<std::int32_t>(out, trace.floor_cells);
  put(out, trace.t_end);
  put<std::uint64_t>(out, trace.steps);
  put_vec(out, trace.X);
  put_vec(out, trace.T);
  put_vec(out, trace.T_residual);
  put_vec(out, trace.poor_fit);
  put_vec(out, trace.cone_frozen);
  put<std::uint64_t>(out, trace.snapshots.size());
  for (const auto& s : trace.snapshots) {
    put(out, s.t);
    put_vec(out, s.U);
    put_vec(out, s.V);
    put_vec(out, s.A);
    put_vec(out, s.alive);
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(ErrorKind::Io, path + " is not a trace file");
  Trace t;
  t.h = get<double>(in);
  t.p = get<double>(in);
  t.d = get<std::int32_t>(in);
  t.floor_cells = get<std::int32_t>(in);
  t.t_end = get<double>(in);
  t.steps = get<std::uint64_t>(in);
  t.X = get_vec<double>(in);
  t.T = get_vec<double>(in);
  t.T_residual = get_vec<double>(in);
  t.poor_fit = get_vec<std::uint8_t>(in);
  t.cone_frozen = get_vec<std::uint8_t>(in);
  const auto ns = get<std::uint64_t>(in);
  t.snapshots.resize(ns);
  for (auto& s : t.snapshots) {
    s.t = get<double>(in);
    s.U = get_vec<double>(in);
    s.V = get_vec<double>(in);
    s.A = get_vec<double>(in);
    s.alive = get_vec<std::uint8_t>(in);
  }
  return t;
}

TraceSampler::TraceSampler(const Trace& trace) : trace_(trace) {
  if (trace_.snapshots.size() < 2) throw Error(ErrorKind::Precondition, "trace needs >= 2 snapshots");
  if (trace_.X.size() < 5) throw Error(ErrorKind::Precondition, "trace grid needs >= 5 nodes");
}

double TraceSampler::t_min() const { return trace_.snapshots.front().t; }
double TraceSampler::t_max() const { return trace_.snapshots.back().t; }

double TraceSampler::ghost(const std::vector<double>& field, long j) const {
  const long n = static_cast<long>(field.size());
  if (j < 0) j = -j;
  if (j > n - 1) j = 2 * (n - 1) - j;
  return field[static_cast<std::size_t>(j)];
}

double TraceSampler::slope_at(const std::vector<double>& field, long j) const {
  return (-ghost(field, j + 2) + 8.0 * ghost(field, j + 1) - 8.0 * ghost(field, j - 1) + ghost(field, j - 2)) /
         (12.0 * trace_.h);
}

TraceSampler::Spatial TraceSampler::spatial(const std::vector<double>& field, double X) const {
  const double h = trace_.h;
  const long n = static_cast<long>(field.size());
  long j = static_cast<long>(std::floor(X / h));
  j = std::clamp(j, 0L, n - 2);
  const double s = (X - static_cast<double>(j) * h) / h;
  const double f0 = field[static_cast<std::size_t>(j)];
  const double f1 = field[static_cast<std::size_t>(j + 1)];
  const double m0 = slope_at(field, j);
  const double m1 = slope_at(field, j + 1);
  double h00, h10, h01, h11;
  hermite_basis(s, h00, h10, h01, h11);
  const double value = h00 * f0 + h10 * h * m0 + h01 * f1 + h11 * h * m1;
  const double s2 = s * s;
  const double slope = ((6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * h * m0 + (-6 * s2 + 6 * s) * f1 +
                        (3 * s2 - 2 * s) * h * m1) / h;
  return {value, slope};
}

std::vector<FieldSample> TraceSampler::sample(const std::vector<double>& X, double t) const {
  const auto& snaps = trace_.snapshots;
  if (t < t_min() || t > t_max()) throw Error(ErrorKind::Extrapolation, "time outside the recorded trace");
  const auto it = std::upper_bound(snaps.begin(), snaps.end(), t, [](double v, const Snapshot& s) { return v < s.t; });
  std::size_t b = static_cast<std::size_t>(it - snaps.begin());
  if (b >= snaps.size()) b = snaps.size() - 1;
  const std::size_t a = b - 1;
  const Snapshot& A = snaps[a];
  const Snapshot& B = snaps[b];
  const double tau = B.t - A.t;
  const double theta = (t - A.t) / tau;
  double h00, h10, h01, h11;
  hermite_basis(theta, h00, h10, h01, h11);

  const double X_end = trace_.X.back();
  std::vector<FieldSample> out(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double Xi = X[i];
    if (Xi < -1e-14 || Xi > X_end * (1.0 + 1e-14))
      throw Error(ErrorKind::ConeOutsideDomain, "sample point outside the trace grid");
    const double Xc = std::clamp(Xi, 0.0, X_end);
    const Spatial ua = spatial(A.U, Xc);
    const Spatial ub = spatial(B.U, Xc);
    const Spatial va = spatial(A.V, Xc);
    const Spatial vb = spatial(B.V, Xc);
    const double aa = spatial(A.A, Xc).value;
    const double ab = spatial(B.A, Xc).value;
    FieldSample& f = out[i];
    f.U = h00 * ua.value + h10 * tau * va.value + h01 * ub.value + h11 * tau * vb.value;
    f.U_X = h00 * ua.slope + h10 * tau * va.slope + h01 * ub.slope + h11 * tau * vb.slope;
    f.U_t = h00 * va.value + h10 * tau * aa + h01 * vb.value + h11 * tau * ab;
  }
  return out;
}

FieldSample TraceSampler::sample(double X, double t) const { return sample(std::vector<double>{X}, t).front(); }

}  // namespace blowup
