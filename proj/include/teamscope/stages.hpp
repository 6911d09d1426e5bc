#pragma once

// File-to-file pipeline stages. Each CLI subcommand and each step of
// `run_pipeline` calls exactly one of these.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teamscope/activity_graph.hpp"
#include "teamscope/corpus.hpp"
#include "teamscope/econometrics.hpp"
#include "teamscope/embeddings.hpp"
#include "teamscope/metrics.hpp"
#include "teamscope/records.hpp"
#include "teamscope/role_predictor.hpp"
#include "teamscope/roles.hpp"
#include "teamscope/statement_parser.hpp"
#include "teamscope/synth.hpp"

namespace teamscope::stages {

namespace fs = std::filesystem;

IngestReport ingest(std::span<const fs::path> inputs, const IngestOptions& options, const fs::path& snapshot_out,
                    const std::optional<fs::path>& report_out = std::nullopt);

ActivityLexicon load_lexicon(const std::optional<fs::path>& path);

CoverageReport parse(const fs::path& snapshot, const std::optional<fs::path>& lexicon, const fs::path& profiles_out,
                     const std::optional<fs::path>& coverage_out = std::nullopt, std::size_t threads = 1);

struct ClusterStageOptions {
  ClusterOptions cluster;
  CooccurrenceUnit unit = CooccurrenceUnit::AuthorPaper;
  // Role map written for role assignment: "reference" or "detected".
  std::string assignment = "reference";
};

std::optional<CooccurrenceUnit> unit_from_name(std::string_view name);
std::string_view unit_name(CooccurrenceUnit u);

PartitionArtifact cluster(const fs::path& profiles, const fs::path& partition_out, const ClusterStageOptions& options);

std::optional<Promotion> promotion_from_name(std::string_view name);
std::string_view promotion_name(Promotion p);

std::vector<RoleAssignment> roles(const fs::path& profiles, const fs::path& partition, const fs::path& roles_out,
                                  Promotion promotion = Promotion::None);

struct LRatioSummary {
  std::size_t papers = 0;
  std::size_t defined = 0;
  std::size_t no_lead = 0;
  std::size_t incomplete = 0;
};

LRatioSummary lratio(const fs::path& roles, const fs::path& csv_out);

struct TrainStageResult {
  TrainingReport report;
  LRatioHead head;
  std::optional<double> test_lratio_pearson;
  std::size_t test_lratio_papers = 0;
};

TrainStageResult train_roles(const fs::path& snapshot, const fs::path& roles, const fs::path& model_out,
                             const ClassifierConfig& config, Unevenness unevenness,
                             const std::optional<fs::path>& report_out = std::nullopt, std::size_t threads = 1);

// Predicted L-ratio for every paper in the snapshot.
std::vector<LRatio> predict(const fs::path& snapshot, const fs::path& model, const fs::path& csv_out,
                            std::size_t threads = 1);

EmbeddingModel embed(const fs::path& snapshot, const fs::path& embeddings_out, const EmbeddingConfig& config);

struct MetricsOptions {
  double novelty_quantile = 0.9;
  DisruptionOptions disruption;
  WindowOptions windows;
};

// Sibling of a metrics CSV holding one row per (paper, byline author).
fs::path authors_table_path(const fs::path& metrics_csv);

// Writes metrics_out and authors_table_path(metrics_out).
std::size_t metrics(const fs::path& snapshot, const fs::path& roles, const std::optional<fs::path>& predicted,
                    const fs::path& embeddings, const fs::path& metrics_out, const MetricsOptions& options,
                    std::size_t threads = 1);

struct RegressSpec {
  std::string outcome;
  std::string fe = "none";  // none | author
  std::vector<std::string> controls;  // size, age_mean, age_sd
  std::string sample = "all";         // all | parsed
  bool cluster_se = false;            // cluster by author (FE) or by paper
};

std::string regress_result_json(const RegressSpec& spec, const RegressionResult& result);

RegressionResult regress(const fs::path& metrics_csv, const std::optional<fs::path>& authors_csv,
                         const RegressSpec& spec, const fs::path& result_out);

struct CurveSpec {
  std::string x = "lratio";
  std::string y;
  CurveOptions options;
};

std::vector<CurveBin> curve(const fs::path& metrics_csv, const CurveSpec& spec, const fs::path& curve_out);

void synth(const fs::path& out_dir, const SynthConfig& config);

}  // namespace teamscope::stages
