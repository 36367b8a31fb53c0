#pragma once

#include <string>
#include <vector>

#include "blowup/config.hpp"

namespace blowup {

struct FileRecord {
  std::string path;  ///< relative to the output directory
  std::string sha256;
};

struct StageRecord {
  std::string name;
  std::string status;  ///< ok | cached | failed | skipped
  double seconds = 0.0;
  std::string key;
  std::vector<FileRecord> files;
  std::string message;
};

struct RunManifest {
  std::string config_hash;
  std::string output_dir;
  std::vector<StageRecord> stages;

  const StageRecord* stage(const std::string& name) const;
  bool ok() const;
};

/// simulate, curve, frames, energy, profile-fit, solitons, normcheck, report
const std::vector<std::string>& stage_names();

struct PipelineOptions {
  /// Requested stages; their upstream stages are added. Empty runs everything.
  std::vector<std::string> stages;
  int jobs = 1;
  bool use_cache = true;
};

/// Validates, then runs stages in order with content-hash caching; writes manifest.json.
RunManifest run_pipeline(const RunConfig& config, const PipelineOptions& opts = {});

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

/// kind: energy | curve | profile | solitons. Returns the written file path.
std::string emit_plot_data(const RunManifest& manifest, const std::string& kind, std::size_t index = 0);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

}  // namespace blowup
