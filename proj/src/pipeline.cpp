#include "blowup/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include <json.hpp>

#include "blowup/blowup_curve.hpp"
#include "blowup/csv.hpp"
#include "blowup/energy.hpp"
#include "blowup/error.hpp"
#include "blowup/normspaces.hpp"
#include "blowup/profiles.hpp"
#include "blowup/similarity.hpp"
#include "blowup/soliton_dynamics.hpp"
#include "blowup/trace.hpp"

namespace blowup {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kPipelineVersion = "blowup-pipeline-1";

struct StageSpec {
  std::string name;
  std::vector<std::string> upstream;
  std::vector<std::string> config_prefixes;
};

const std::vector<StageSpec>& stage_specs() {
  static const std::vector<StageSpec> specs = {
      {"simulate", {}, {"coefficients.", "initial.", "grid.", "solver."}},
      {"curve", {"simulate"}, {}},
      {"frames",
       {"simulate"},
       {"analysis.x0=", "analysis.ds=", "analysis.n_y=", "analysis.s_offset=", "analysis.s_cap="}},
      {"energy", {"frames"}, {"analysis.mu=", "analysis.burn_in="}},
      {"profile-fit", {"frames", "curve"}, {}},
      {"solitons", {}, {"coefficients.p=", "analysis.c1=", "analysis.soliton_"}},
      {"normcheck", {}, {"analysis.norm_"}},
      {"report", {"simulate", "curve", "frames", "energy", "profile-fit", "solitons", "normcheck"}, {}},
  };
  return specs;
}

const StageSpec& spec_of(const std::string& name) {
  for (const auto& s : stage_specs())
    if (s.name == name) return s;
  throw Error(ErrorKind::Validation, "unknown stage '" + name + "'");
}

std::string hex(const unsigned char* bytes, unsigned int n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (unsigned int i = 0; i < n; ++i) {
    out.push_back(digits[bytes[i] >> 4]);
    out.push_back(digits[bytes[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << text;
}

/// Runs fn(i) for i < n on up to `jobs` threads; rethrows the lowest-index failure.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string class_name(PointClass c) {
  switch (c) {
    case PointClass::NonCharacteristic: return "non_characteristic";
    case PointClass::Characteristic: return "characteristic";
    case PointClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

/// Linear interpolation of a sampled column at X.
double interpolate(const std::vector<double>& X, const std::vector<double>& v, double x) {
  if (X.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (x <= X.front()) return v.front();
  if (x >= X.back()) return v.back();
  const auto it = std::upper_bound(X.begin(), X.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - X.begin()) - 1;
  const double w = (x - X[j]) / (X[j + 1] - X[j]);
  return (1.0 - w) * v[j] + w * v[j + 1];
}

struct BasePointResult {
  FrameSeries series;
  std::vector<EnergyReport> energy;
  IdentityCheck identity;
  MonotonicityReport monotonicity;
  double energy_limit = std::numeric_limits<double>::quiet_NaN();
  std::optional<ProfileFit> fit;
  std::optional<ExpansionFit> expansion;
  Classification classification;
};

class Runner {
 public:
  Runner(const RunConfig& config, const PipelineOptions& opts)
      : config_(config), opts_(opts), out_(config.output_dir), cache_dir_(out_ / ".cache") {}

  RunManifest run() {
    fs::create_directories(cache_dir_);
    manifest_.output_dir = out_.string();
    manifest_.config_hash = sha256_hex(canonical_text(config_));

    std::set<std::string> wanted;
    const std::function<void(const std::string&)> add = [&](const std::string& n) {
      if (!wanted.insert(n).second) return;
      for (const auto& u : spec_of(n).upstream) add(u);
    };
    if (opts_.stages.empty())
      for (const auto& s : stage_specs()) add(s.name);
    else
      for (const auto& s : opts_.stages) add(s);

    const std::string canon = canonical_text(config_);
    for (const auto& spec : stage_specs()) {
      if (!wanted.count(spec.name)) continue;
      StageRecord rec;
      rec.name = spec.name;
      rec.key = stage_key(spec, canon);
      keys_[spec.name] = rec.key;

      std::string blocked;
      for (const auto& u : spec.upstream) {
        const auto* up = manifest_.stage(u);
        if (up && up->status != "ok" && up->status != "cached") blocked = u;
      }
      if (!blocked.empty()) {
        rec.status = "skipped";
        rec.message = "upstream stage '" + blocked + "' did not succeed";
        manifest_.stages.push_back(rec);
        continue;
      }
      const auto t0 = std::chrono::steady_clock::now();
      if (opts_.use_cache && cache_hit(rec)) {
        rec.status = "cached";
      } else {
        try {
          std::vector<std::string> files = execute(spec.name);
          for (const auto& f : files) rec.files.push_back({f, sha256_file((out_ / f).string())});
          rec.status = "ok";
          store_cache(rec);
        } catch (const std::exception& e) {
          rec.status = "failed";
          rec.message = e.what();
          rec.files.clear();
          fs::remove(cache_dir_ / (spec.name + ".json"));
        }
      }
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      manifest_.stages.push_back(rec);
    }
    write_manifest(manifest_, (out_ / "manifest.json").string());
    return manifest_;
  }

 private:
  std::string stage_key(const StageSpec& spec, const std::string& canon) const {
    std::string text = std::string(kPipelineVersion) + "\nstage=" + spec.name + "\n";
    std::istringstream lines(canon);
    for (std::string line; std::getline(lines, line);)
      for (const auto& prefix : spec.config_prefixes)
        if (line.rfind(prefix, 0) == 0) {
          text += line + "\n";
          break;
        }
    if (spec.name == "simulate" && config_.coefficients.family == "tabulated")
      text += "table_sha256=" + sha256_file(config_.coefficients.table) + "\n";
    for (const auto& u : spec.upstream) text += "upstream." + u + "=" + keys_.at(u) + "\n";
    return sha256_hex(text);
  }

  bool cache_hit(StageRecord& rec) const {
    const fs::path path = cache_dir_ / (rec.name + ".json");
    if (!fs::exists(path)) return false;
    json j;
    try {
      j = json::parse(read_file(path.string()));
    } catch (const std::exception&) {
      return false;
    }
    if (j.value("key", std::string()) != rec.key) return false;
    std::vector<FileRecord> files;
    for (const auto& f : j.at("files")) {
      FileRecord r{f.at("path").get<std::string>(), f.at("sha256").get<std::string>()};
      const fs::path p = out_ / r.path;
      if (!fs::exists(p) || sha256_file(p.string()) != r.sha256) return false;
      files.push_back(r);
    }
    rec.files = std::move(files);
    return true;
  }

  void store_cache(const StageRecord& rec) const {
    json j;
    j["key"] = rec.key;
    j["files"] = json::array();
    for (const auto& f : rec.files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}});
    write_text((cache_dir_ / (rec.name + ".json")).string(), j.dump(2) + "\n");
  }

  std::vector<std::string> execute(const std::string& name) {
    if (name == "simulate") return stage_simulate();
    if (name == "curve") return stage_curve();
    if (name == "frames") return stage_frames();
    if (name == "energy") return stage_energy();
    if (name == "profile-fit") return stage_profile_fit();
    if (name == "solitons") return stage_solitons();
    if (name == "normcheck") return stage_normcheck();
    if (name == "report") return stage_report();
    throw Error(ErrorKind::Validation, "unknown stage '" + name + "'");
  }

  std::string path(const std::string& file) const { return (out_ / file).string(); }

  const CoefficientModel& model() {
    if (!model_) model_ = std::make_unique<CoefficientModel>(build_model(config_));
    return *model_;
  }

  const Trace& trace() {
    if (!trace_) trace_ = std::make_unique<Trace>(load_trace(path("trace.bin")));
    return *trace_;
  }

  const BlowupCurve& curve() {
    if (!curve_) {
      curve_ = std::make_unique<BlowupCurve>(curve_from_trace(trace()));
      classify_all(*curve_);
    }
    return *curve_;
  }

  std::vector<BasePointResult>& base_points() {
    if (base_.empty()) {
      const auto& x0 = config_.analysis.x0;
      base_.resize(x0.size());
      SeriesOptions so;
      so.ds = config_.analysis.ds;
      so.n_y = config_.analysis.n_y;
      so.s_offset = config_.analysis.s_offset;
      so.s_cap = config_.analysis.s_cap;
      const Trace& tr = trace();
      const CoefficientModel& m = model();
      try {
        parallel_for(x0.size(), opts_.jobs, [&](std::size_t i) { base_[i].series = frame_series(tr, m, x0[i], so); });
      } catch (...) {
        base_.clear();
        throw;
      }
    }
    return base_;
  }

  void ensure_energy() {
    auto& bp = base_points();
    if (energy_done_) return;
    const CoefficientModel& m = model();
    parallel_for(bp.size(), opts_.jobs, [&](std::size_t i) {
      auto& r = bp[i];
      r.energy.clear();
      for (const auto& f : r.series.frames) r.energy.push_back(full_energy(f, m, config_.analysis.mu));
      r.identity = dissipation_identity_check(r.energy, r.series.frames, m);
      r.monotonicity = check_monotonicity(r.energy, config_.analysis.burn_in);
      r.energy_limit = extrapolated_energy_limit(r.energy);
    });
    energy_done_ = true;
  }

  void ensure_fits() {
    auto& bp = base_points();
    if (fits_done_) return;
    const BlowupCurve& c = curve();
    const CoefficientModel& m = model();
    parallel_for(bp.size(), opts_.jobs, [&](std::size_t i) {
      auto& r = bp[i];
      const double X0 = r.series.X0;
      try {
        r.classification = classify_point(c, X0);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientResolution) throw;
        r.classification = {};
      }
      if (r.classification.kind == PointClass::Characteristic) {
        r.expansion = characteristic_expansion_fit(c, m, config_.analysis.x0[i]);
      }
      r.fit = fit_profile(r.series.frames, m, interpolate(c.X, c.T_prime, X0));
    });
    fits_done_ = true;
  }

  std::vector<std::string> stage_simulate() {
    const CoefficientModel& m = model();
    FieldState state = build_initial_state(config_, m);
    SolverOptions so = config_.solver;
    so.record_snapshots = true;
    trace_ = std::make_unique<Trace>(Solver(m, so).run(std::move(state)));
    save_trace(*trace_, path("trace.bin"));
    curve_.reset();
    base_.clear();
    return {"trace.bin"};
  }

  std::vector<std::string> stage_curve() {
    write_curve_csv(curve(), path("curve.csv"));
    return {"curve.csv"};
  }

  std::vector<std::string> stage_frames() {
    auto& bp = base_points();
    std::vector<std::string> files;
    json man = json::array();
    for (std::size_t i = 0; i < bp.size(); ++i) {
      const auto& s = bp[i].series;
      const std::string name = "frames_" + std::to_string(i) + ".csv";
      write_frames_csv(s, path(name));
      files.push_back(name);
      man.push_back({{"index", i},
                     {"x0", s.x0},
                     {"X0", s.X0},
                     {"T0", s.T0},
                     {"s_min", s.s_min},
                     {"s_max", s.s_max},
                     {"ds", s.ds},
                     {"frames", s.frames.size()},
                     {"file", name}});
    }
    write_text(path("frames_manifest.json"), man.dump(2) + "\n");
    files.push_back("frames_manifest.json");
    return files;
  }

  std::vector<std::string> stage_energy() {
    ensure_energy();
    std::vector<std::string> files;
    for (std::size_t i = 0; i < base_.size(); ++i) {
      const std::string name = "energy_" + std::to_string(i) + ".csv";
      write_energy_csv(base_[i].energy, path(name));
      files.push_back(name);
    }
    return files;
  }

  std::vector<std::string> stage_profile_fit() {
    ensure_fits();
    std::vector<std::string> files;
    for (std::size_t i = 0; i < base_.size(); ++i) {
      const std::string dist = "distance_" + std::to_string(i) + ".csv";
      const std::string fit = "fit_" + std::to_string(i) + ".json";
      write_distance_csv(*base_[i].fit, path(dist));
      write_fit_json(*base_[i].fit, dist, path(fit));
      files.push_back(fit);
      files.push_back(dist);
    }
    return files;
  }

  std::vector<SolitonState>& soliton_series() {
    if (solitons_.empty()) {
      const auto& an = config_.analysis;
      const double p = config_.coefficients.options.p;
      SolitonState st;
      st.xi = explicit_ansatz(an.soliton_k, p, an.c1, an.soliton_s0);
      st.s = an.soliton_s0;
      st.c1 = an.c1;
      st.p = p;
      const double centre = 0.5 * (an.soliton_k - 1);
      for (int i = 0; i < an.soliton_k; ++i)
        st.xi[i] += an.soliton_perturbation * (i - centre) / std::max(1.0, centre);
      solitons_ = integrate(st, an.soliton_s_end, an.soliton_tol);
    }
    return solitons_;
  }

  std::vector<std::string> stage_solitons() {
    const auto& series = soliton_series();
    write_soliton_series_csv(series, path("solitons.csv"));
    write_ansatz_csv(series, path("ansatz.csv"));
    return {"solitons.csv", "ansatz.csv"};
  }

  std::vector<EquivalenceReport>& norm_reports() {
    if (norms_.empty()) {
      const auto& an = config_.analysis;
      norms_.resize(an.norm_d.size());
      parallel_for(an.norm_d.size(), opts_.jobs, [&](std::size_t i) {
        const int d = an.norm_d[i];
        norms_[i] = equivalence_check(stress_family(d, an.norm_R, an.norm_h), d);
      });
    }
    return norms_;
  }

  std::vector<std::string> stage_normcheck() {
    write_norms_json(norm_reports(), path("norms.json"));
    return {"norms.json"};
  }

  std::vector<std::string> stage_report() {
    ensure_energy();
    ensure_fits();
    json r;
    r["config_hash"] = manifest_.config_hash;
    const Trace& tr = trace();
    double T_min = std::numeric_limits<double>::infinity();
    for (double T : tr.T) T_min = std::min(T_min, T);
    r["simulation"] = {{"nodes", tr.X.size()},
                       {"steps", tr.steps},
                       {"t_end", tr.t_end},
                       {"T_min", T_min},
                       {"snapshots", tr.snapshots.size()},
                       {"lipschitz_constant", curve().lipschitz_constant()}};
    json points = json::array();
    for (std::size_t i = 0; i < base_.size(); ++i) {
      const auto& b = base_[i];
      json p;
      p["x0"] = b.series.x0;
      p["X0"] = b.series.X0;
      p["T0"] = b.series.T0;
      p["class"] = class_name(b.classification.kind);
      p["delta"] = b.classification.delta;
      p["s_range"] = {b.series.s_min, b.series.s_max};
      p["frames"] = b.series.frames.size();
      p["H_first"] = b.energy.front().H;
      p["H_last"] = b.energy.back().H;
      p["energy_limit"] = b.energy_limit;
      p["monotone"] = b.monotonicity.pass;
      p["violations_after_burn_in"] = b.monotonicity.violations_after;
      double worst = 0.0;
      for (std::size_t k = 0; k < b.identity.residual_E0IJ.size(); ++k)
        worst = std::max(worst, std::abs(b.identity.residual_E0IJ[k]) / (1.0 + std::abs(b.identity.dE0IJ_ds[k])));
      p["identity_relative_residual"] = worst;
      const auto& f = *b.fit;
      p["theta"] = f.theta;
      p["d_hat_star"] = f.d_hat_star;
      p["d_hat_expected"] = f.d_hat_expected;
      p["distance"] = f.distance;
      p["rate"] = f.rate;
      p["converged"] = f.converged;
      if (b.expansion) {
        p["expansion"] = {{"k", b.expansion->k},
                          {"xi0", b.expansion->xi0},
                          {"nu", b.expansion->nu},
                          {"residual", b.expansion->residual},
                          {"accepted", b.expansion->accepted}};
      }
      points.push_back(p);
    }
    r["base_points"] = points;
    const auto& sol = soliton_series();
    const auto& last = sol.back();
    const auto ref = explicit_ansatz(last.k(), last.p, last.c1, last.s);
    json gaps = json::array();
    for (int i = 1; i < last.k(); ++i)
      gaps.push_back({{"observed", last.xi[i] - last.xi[i - 1]}, {"ansatz", ref[i] - ref[i - 1]}});
    r["solitons"] = {{"k", last.k()}, {"s_end", last.s}, {"gaps", gaps}};
    json norms = json::array();
    for (const auto& n : norm_reports())
      norms.push_back({{"d", n.d}, {"ratio_min", n.ratio_min}, {"ratio_max", n.ratio_max},
                       {"spread", n.ratio_max / n.ratio_min}});
    r["norms"] = norms;
    write_text(path("report.json"), r.dump(2) + "\n");
    return {"report.json"};
  }

  RunConfig config_;
  PipelineOptions opts_;
  fs::path out_;
  fs::path cache_dir_;
  RunManifest manifest_;
  std::map<std::string, std::string> keys_;
  std::unique_ptr<CoefficientModel> model_;
  std::unique_ptr<Trace> trace_;
  std::unique_ptr<BlowupCurve> curve_;
  std::vector<BasePointResult> base_;
  bool energy_done_ = false;
  bool fits_done_ = false;
  std::vector<SolitonState> solitons_;
  std::vector<EquivalenceReport> norms_;
};

/// Header plus rows of a CSV file as raw text cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorKind::Io, "column '" + name + "' missing");
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  CsvTable t;
  std::string line;
  const auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    return cells;
  };
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, path + " is empty");
  t.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

}  // namespace

const StageRecord* RunManifest::stage(const std::string& name) const {
  for (const auto& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

bool RunManifest::ok() const {
  return std::all_of(stages.begin(), stages.end(),
                     [](const StageRecord& s) { return s.status == "ok" || s.status == "cached"; });
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : stage_specs()) n.push_back(s.name);
    return n;
  }();
  return names;
}

RunManifest run_pipeline(const RunConfig& config, const PipelineOptions& opts) {
  validate(config);
  for (const auto& s : opts.stages) spec_of(s);
  if (opts.jobs < 1) throw Error(ErrorKind::Validation, "--jobs must be at least 1");
  return Runner(config, opts).run();
}

void write_manifest(const RunManifest& m, const std::string& path) {
  json j;
  j["config_hash"] = m.config_hash;
  j["output_dir"] = m.output_dir;
  j["stages"] = json::array();
  for (const auto& s : m.stages) {
    json st;
    st["name"] = s.name;
    st["status"] = s.status;
    st["seconds"] = s.seconds;
    st["key"] = s.key;
    st["files"] = json::array();
    for (const auto& f : s.files) st["files"].push_back({{"path", f.path}, {"sha256", f.sha256}});
    st["message"] = s.message;
    j["stages"].push_back(st);
  }
  write_text(path, j.dump(2) + "\n");
}

RunManifest load_manifest(const std::string& path) {
  RunManifest m;
  try {
    const json j = json::parse(read_file(path));
    m.config_hash = j.at("config_hash").get<std::string>();
    m.output_dir = j.at("output_dir").get<std::string>();
    for (const auto& st : j.at("stages")) {
      StageRecord s;
      s.name = st.at("name").get<std::string>();
      s.status = st.at("status").get<std::string>();
      s.seconds = st.at("seconds").get<double>();
      s.key = st.at("key").get<std::string>();
      s.message = st.at("message").get<std::string>();
      for (const auto& f : st.at("files"))
        s.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
      m.stages.push_back(s);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "malformed manifest " + path + ": " + e.what());
  }
  return m;
}

std::string emit_plot_data(const RunManifest& manifest, const std::string& kind, std::size_t index) {
  std::string stage, source, xcol, ycol, tag;
  const std::string idx = std::to_string(index);
  if (kind == "energy") {
    stage = "energy", source = "energy_" + idx + ".csv", xcol = "s", ycol = "H", tag = "energy_" + idx;
  } else if (kind == "curve") {
    stage = "curve", source = "curve.csv", xcol = "X", ycol = "T", tag = "curve";
  } else if (kind == "profile") {
    stage = "profile-fit", source = "distance_" + idx + ".csv", xcol = "s", ycol = "distance",
    tag = "profile_" + idx;
  } else if (kind == "solitons") {
    stage = "solitons", source = "solitons.csv", xcol = "s", ycol = "gap", tag = "solitons";
  } else {
    throw Error(ErrorKind::Validation, "unknown plot kind '" + kind + "'");
  }
  const StageRecord* rec = manifest.stage(stage);
  if (!rec || (rec->status != "ok" && rec->status != "cached"))
    throw Error(ErrorKind::MissingStage, "stage '" + stage + "' has not succeeded");
  const fs::path out(manifest.output_dir);
  const CsvTable t = read_csv((out / source).string());
  const std::string target = (out / ("plot_" + tag + ".dat")).string();
  std::ostringstream text;
  text << xcol << ' ' << ycol << '\n';
  const std::size_t cx = t.column(xcol);
  if (kind == "solitons") {
    const std::size_t c1 = t.column("xi_1");
    const std::size_t c2 = t.column("xi_2");
    for (const auto& row : t.rows)
      text << row[cx] << ' ' << format_double(std::stod(row[c2]) - std::stod(row[c1])) << '\n';
  } else {
    const std::size_t cy = t.column(ycol);
    for (const auto& row : t.rows) text << row[cx] << ' ' << row[cy] << '\n';
  }
  write_text(target, text.str());
  return target;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Evaluation, "sha256 failed");
  return hex(digest, len);
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

}  // namespace blowup
