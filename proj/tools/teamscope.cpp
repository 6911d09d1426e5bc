#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>

#include "teamscope/error.hpp"
#include "teamscope/pipeline.hpp"
#include "teamscope/simd/kernels.hpp"
#include "teamscope/stages.hpp"

namespace fs = std::filesystem;
using namespace teamscope;

namespace {

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

template <typename T, typename F>
T parse_enum(const std::string& value, F from_name, const std::string& flag) {
  const auto v = from_name(value);
  if (!v) throw ConfigError(fmt::format("invalid value '{}' for {}", value, flag));
  return *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teamscope: team hierarchy and outcome metrics from contribution statements"};
  app.set_version_flag("--version", std::string(TEAMSCOPE_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::size_t threads = 0;
  std::string log_level = "info";
  std::string simd_level;
  app.add_option("--config", config_path, "Pipeline config (JSON); supplies defaults for seeds and options");
  app.add_option("--threads", threads, "Thread cap for parallel stages (default: config value or 1)");
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")->capture_default_str();
  app.add_option("--simd", simd_level, "Force a kernel level: scalar|avx2|neon");

  // ingest
  auto* c_ingest = app.add_subcommand("ingest", "Read NDJSON paper records into a snapshot");
  std::vector<std::string> ingest_inputs;
  std::string ingest_out, ingest_report;
  IngestOptions ingest_opts;
  c_ingest->add_option("--input", ingest_inputs, "NDJSON files")->required();
  c_ingest->add_option("--out", ingest_out, "Snapshot path")->required();
  c_ingest->add_option("--report", ingest_report, "Ingest report (JSON)");
  c_ingest->add_option("--min-year", ingest_opts.min_year);
  c_ingest->add_option("--max-year", ingest_opts.max_year);

  // parse
  auto* c_parse = app.add_subcommand("parse", "Extract per-author activity profiles");
  std::string parse_snapshot, parse_lexicon, parse_out, parse_report;
  c_parse->add_option("--snapshot", parse_snapshot)->required();
  c_parse->add_option("--lexicon", parse_lexicon, "Lexicon TSV (default: built-in)");
  c_parse->add_option("--out", parse_out)->required();
  c_parse->add_option("--report", parse_report, "Coverage report (JSON)");

  // cluster
  auto* c_cluster = app.add_subcommand("cluster", "Cluster the activity co-occurrence network");
  std::string cluster_profiles, cluster_out, cluster_unit = "author_paper", cluster_assignment = "reference";
  std::optional<std::uint64_t> cluster_seed;
  std::optional<double> cluster_resolution;
  std::optional<std::size_t> cluster_restarts;
  c_cluster->add_option("--profiles", cluster_profiles)->required();
  c_cluster->add_option("--out", cluster_out)->required();
  c_cluster->add_option("--seed", cluster_seed);
  c_cluster->add_option("--resolution", cluster_resolution);
  c_cluster->add_option("--restarts", cluster_restarts);
  c_cluster->add_option("--unit", cluster_unit, "author_paper|paper")->capture_default_str();
  c_cluster->add_option("--assignment", cluster_assignment, "reference|detected")->capture_default_str();

  // roles
  auto* c_roles = app.add_subcommand("roles", "Assign roles from activity profiles");
  std::string roles_profiles, roles_partition, roles_out, roles_promote = "none";
  c_roles->add_option("--profiles", roles_profiles)->required();
  c_roles->add_option("--partition", roles_partition)->required();
  c_roles->add_option("--out", roles_out)->required();
  c_roles->add_option("--promote", roles_promote, "none|corresponding|first")->capture_default_str();

  // lratio
  auto* c_lratio = app.add_subcommand("lratio", "Compute per-paper L-ratios");
  std::string lratio_roles, lratio_out;
  c_lratio->add_option("--roles", lratio_roles)->required();
  c_lratio->add_option("--out", lratio_out)->required();

  // train-roles
  auto* c_train = app.add_subcommand("train-roles", "Train the lead/support classifier");
  std::string train_snapshot, train_roles_path, train_out, train_report, train_unevenness;
  std::optional<std::uint64_t> train_seed;
  c_train->add_option("--snapshot", train_snapshot)->required();
  c_train->add_option("--roles", train_roles_path)->required();
  c_train->add_option("--out", train_out)->required();
  c_train->add_option("--report", train_report, "Training report (JSON)");
  c_train->add_option("--seed", train_seed);
  c_train->add_option("--unevenness", train_unevenness, "gini|variance|range");

  // predict
  auto* c_predict = app.add_subcommand("predict", "Predict L-ratios for every paper");
  std::string predict_snapshot, predict_model, predict_out;
  c_predict->add_option("--snapshot", predict_snapshot)->required();
  c_predict->add_option("--model", predict_model)->required();
  c_predict->add_option("--out", predict_out)->required();

  // embed
  auto* c_embed = app.add_subcommand("embed", "Train keyword embeddings");
  std::string embed_snapshot, embed_out;
  std::optional<std::uint64_t> embed_seed;
  std::optional<std::size_t> embed_dim, embed_epochs, embed_min_count;
  c_embed->add_option("--snapshot", embed_snapshot)->required();
  c_embed->add_option("--out", embed_out)->required();
  c_embed->add_option("--seed", embed_seed);
  c_embed->add_option("--dimension", embed_dim);
  c_embed->add_option("--epochs", embed_epochs);
  c_embed->add_option("--min-count", embed_min_count);

  // metrics
  auto* c_metrics = app.add_subcommand("metrics", "Compute per-paper outcome metrics");
  std::string metrics_snapshot, metrics_roles, metrics_predicted, metrics_embeddings, metrics_out;
  c_metrics->add_option("--snapshot", metrics_snapshot)->required();
  c_metrics->add_option("--roles", metrics_roles)->required();
  c_metrics->add_option("--predicted", metrics_predicted, "Predicted L-ratio CSV for papers without statements");
  c_metrics->add_option("--embeddings", metrics_embeddings)->required();
  c_metrics->add_option("--out", metrics_out)->required();

  // regress
  auto* c_regress = app.add_subcommand("regress", "Regress an outcome on the L-ratio");
  std::string regress_metrics, regress_authors, regress_out;
  stages::RegressSpec regress_spec;
  c_regress->add_option("--metrics", regress_metrics)->required();
  c_regress->add_option("--authors", regress_authors, "Author table (default: beside the metrics CSV)");
  c_regress->add_option("--outcome", regress_spec.outcome)->required();
  c_regress->add_option("--fe", regress_spec.fe, "none|author")->capture_default_str();
  c_regress->add_option("--controls", regress_spec.controls, "size,age_mean,age_sd")->delimiter(',');
  c_regress->add_option("--sample", regress_spec.sample, "all|parsed")->capture_default_str();
  c_regress->add_flag("--cluster-se", regress_spec.cluster_se, "Cluster-robust standard errors");
  c_regress->add_option("--out", regress_out)->required();

  // curve
  auto* c_curve = app.add_subcommand("curve", "Binned outcome curve with bootstrap CIs");
  std::string curve_metrics, curve_out;
  stages::CurveSpec curve_spec;
  std::optional<std::uint64_t> curve_seed;
  c_curve->add_option("--metrics", curve_metrics)->required();
  c_curve->add_option("--x", curve_spec.x)->capture_default_str();
  c_curve->add_option("--y", curve_spec.y)->required();
  c_curve->add_option("--bins", curve_spec.options.bins)->capture_default_str();
  c_curve->add_option("--replicates", curve_spec.options.replicates)->capture_default_str();
  c_curve->add_option("--alpha", curve_spec.options.alpha)->capture_default_str();
  c_curve->add_option("--seed", curve_seed);
  c_curve->add_option("--out", curve_out)->required();

  // synth
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  std::string synth_out;
  SynthConfig synth_cfg;
  c_synth->add_option("--out", synth_out, "Output directory")->required();
  c_synth->add_option("--papers", synth_cfg.papers)->capture_default_str();
  c_synth->add_option("--authors", synth_cfg.authors)->capture_default_str();
  c_synth->add_option("--seed", synth_cfg.seed)->capture_default_str();
  c_synth->add_option("--first-year", synth_cfg.first_year)->capture_default_str();
  c_synth->add_option("--last-year", synth_cfg.last_year)->capture_default_str();

  // run
  auto* c_run = app.add_subcommand("run", "Run the whole pipeline from --config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorClass::Usage);
  }

  auto logger = spdlog::stderr_color_mt("teamscope");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const auto level = spdlog::level::from_str(log_level);
  if (level == spdlog::level::off && log_level != "off") {
    std::cerr << "invalid --log-level '" << log_level << "'\n";
    return static_cast<int>(ErrorClass::Usage);
  }
  spdlog::set_level(level);

  try {
    if (!simd_level.empty()) {
      try {
        simd::set_level(simd::parse_level(simd_level));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("--simd {}: {}", simd_level, e.what()));
      }
    }
    std::optional<PipelineConfig> cfg;
    if (!config_path.empty()) cfg = PipelineConfig::load(config_path);
    const std::size_t nthreads = threads ? threads : (cfg ? cfg->threads : 1);
    spdlog::debug("simd kernels: {}", simd::level_name(simd::kernels().level));

    if (c_ingest->parsed()) {
      std::vector<fs::path> in(ingest_inputs.begin(), ingest_inputs.end());
      if (cfg) {
        if (c_ingest->count("--min-year") == 0) ingest_opts.min_year = cfg->ingest.min_year;
        if (c_ingest->count("--max-year") == 0) ingest_opts.max_year = cfg->ingest.max_year;
      }
      const auto r = stages::ingest(in, ingest_opts, ingest_out, opt_path(ingest_report));
      spdlog::info("ingested {} records ({} skipped, {} duplicates)", r.records, r.skipped, r.duplicates);
    } else if (c_parse->parsed()) {
      std::optional<fs::path> lex = opt_path(parse_lexicon);
      if (!lex && cfg) lex = cfg->lexicon;
      const auto r = stages::parse(parse_snapshot, lex, parse_out, opt_path(parse_report), nthreads);
      spdlog::info("parsed {} statements, coverage {}", r.papers_parsed,
                   r.coverage() ? fmt::format("{:.4f}", *r.coverage()) : "undefined");
    } else if (c_cluster->parsed()) {
      stages::ClusterStageOptions o = cfg ? cfg->cluster : stages::ClusterStageOptions{};
      if (cluster_seed) o.cluster.seed = *cluster_seed;
      if (cluster_resolution) o.cluster.resolution = *cluster_resolution;
      if (cluster_restarts) o.cluster.restarts = *cluster_restarts;
      if (c_cluster->count("--unit") || !cfg) {
        o.unit = parse_enum<CooccurrenceUnit>(cluster_unit, stages::unit_from_name, "--unit");
      }
      if (c_cluster->count("--assignment") || !cfg) o.assignment = cluster_assignment;
      const auto a = stages::cluster(cluster_profiles, cluster_out, o);
      spdlog::info("{} clusters, Q = {}, agreement with reference = {}", a.partition.cluster_count(),
                   a.partition.q ? fmt::format("{:.6f}", *a.partition.q) : "undefined",
                   a.agreement ? fmt::format("{:.4f}", *a.agreement) : "undefined");
    } else if (c_roles->parsed()) {
      Promotion p = cfg ? cfg->promote : Promotion::None;
      if (c_roles->count("--promote") || !cfg) {
        p = parse_enum<Promotion>(roles_promote, stages::promotion_from_name, "--promote");
      }
      const auto r = stages::roles(roles_profiles, roles_partition, roles_out, p);
      spdlog::info("assigned {} roles", r.size());
    } else if (c_lratio->parsed()) {
      const auto s = stages::lratio(lratio_roles, lratio_out);
      spdlog::info("{} papers, {} defined, {} without a lead, {} incomplete", s.papers, s.defined, s.no_lead,
                   s.incomplete);
    } else if (c_train->parsed()) {
      ClassifierConfig cc = cfg ? cfg->classifier : ClassifierConfig{};
      if (train_seed) cc.seed = *train_seed;
      Unevenness u = cfg ? cfg->unevenness : Unevenness::Gini;
      if (!train_unevenness.empty()) u = parse_enum<Unevenness>(train_unevenness, unevenness_from_name, "--unevenness");
      const auto r = stages::train_roles(train_snapshot, train_roles_path, train_out, cc, u, opt_path(train_report),
                                         nthreads);
      spdlog::info("test precision {}, recall {}",
                   r.report.test.precision ? fmt::format("{:.4f}", *r.report.test.precision) : "undefined",
                   r.report.test.recall ? fmt::format("{:.4f}", *r.report.test.recall) : "undefined");
    } else if (c_predict->parsed()) {
      const auto r = stages::predict(predict_snapshot, predict_model, predict_out, nthreads);
      spdlog::info("predicted {} L-ratios", r.size());
    } else if (c_embed->parsed()) {
      EmbeddingConfig ec = cfg ? cfg->embedding : EmbeddingConfig{};
      if (embed_seed) ec.seed = *embed_seed;
      if (embed_dim) ec.dimension = *embed_dim;
      if (embed_epochs) ec.epochs = *embed_epochs;
      if (embed_min_count) ec.min_count = *embed_min_count;
      if (threads) ec.threads = threads;
      const auto m = stages::embed(embed_snapshot, embed_out, ec);
      spdlog::info("embedded {} keywords", m.vocab_size());
    } else if (c_metrics->parsed()) {
      const stages::MetricsOptions mo = cfg ? cfg->metrics : stages::MetricsOptions{};
      const auto rows = stages::metrics(metrics_snapshot, metrics_roles, opt_path(metrics_predicted),
                                        metrics_embeddings, metrics_out, mo, nthreads);
      spdlog::info("wrote {} metric rows", rows);
    } else if (c_regress->parsed()) {
      const auto r = stages::regress(regress_metrics, opt_path(regress_authors), regress_spec, regress_out);
      if (const auto* c = r.find("lratio")) {
        spdlog::info("lratio coefficient {:.6g} (se {:.6g}), n = {}", c->estimate, c->se, r.n);
      }
    } else if (c_curve->parsed()) {
      curve_spec.options.seed = curve_seed ? *curve_seed : (cfg ? cfg->seeds.bootstrap : 0);
      curve_spec.options.threads = nthreads;
      const auto bins = stages::curve(curve_metrics, curve_spec, curve_out);
      spdlog::info("wrote {} bins", bins.size());
    } else if (c_synth->parsed()) {
      stages::synth(synth_out, synth_cfg);
      spdlog::info("wrote synthetic corpus to {}", synth_out);
    } else if (c_run->parsed()) {
      if (!cfg) throw ConfigError("run requires --config");
      if (threads) {
        cfg->threads = threads;
        for (auto& c : cfg->curves) c.options.threads = threads;
      }
      const auto m = run_pipeline(*cfg);
      std::size_t skipped = 0;
      for (const auto& s : m.stages) skipped += s.skipped ? 1 : 0;
      spdlog::info("pipeline finished: {} stages, {} skipped", m.stages.size(), skipped);
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(ErrorClass::Data);
  }
  return 0;
}
