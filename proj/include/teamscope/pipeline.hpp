#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teamscope/stages.hpp"

namespace teamscope {

struct PipelineSeeds {
  std::uint64_t cluster = 1;
  std::uint64_t train = 2;
  std::uint64_t bootstrap = 3;
  std::uint64_t embedding = 4;
};

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> lexicon;  // built-in lexicon when absent
  std::filesystem::path output_dir = "out";
  std::size_t threads = 1;
  IngestOptions ingest;
  PipelineSeeds seeds;
  stages::ClusterStageOptions cluster;
  Promotion promote = Promotion::None;
  ClassifierConfig classifier;
  Unevenness unevenness = Unevenness::Gini;
  EmbeddingConfig embedding;
  stages::MetricsOptions metrics;
  std::vector<stages::RegressSpec> regressions;
  std::vector<stages::CurveSpec> curves;

  // Relative paths are resolved against `base_dir`. Every key is optional;
  // unknown keys are rejected. Seeds must be explicit integers.
  static PipelineConfig from_json_text(const std::string& text, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);

  // Canonical JSON of every setting (paths as given after resolution).
  std::string canonical_json() const;
  std::string hash() const;

  // Throws ConfigError when an input or the lexicon does not exist.
  void validate() const;
};

struct StageRecord {
  std::string name;
  std::string params_hash;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // path -> sha256
  double seconds = 0.0;
  std::size_t warnings = 0;
  bool skipped = false;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  std::vector<StageRecord> stages;

  std::string to_json() const;
  static RunManifest from_json_text(const std::string& text);
  const StageRecord* find(const std::string& name) const;
};

// Runs ingest, parse, cluster, roles, lratio, train-roles, predict, embed,
// metrics, then each configured regression and curve. A stage is skipped when
// the previous manifest in the output directory shows the same parameters and
// input digests and its recorded outputs are still present and unchanged.
// Writes <output_dir>/manifest.json. A failing stage throws an Error whose
// message names the stage.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace teamscope
