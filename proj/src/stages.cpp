#include "teamscope/stages.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>

#include "teamscope/error.hpp"
#include "teamscope/parallel.hpp"

namespace teamscope::stages {

using nlohmann::ordered_json;

namespace {

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

IngestReport ingest(std::span<const fs::path> inputs, const IngestOptions& options, const fs::path& snapshot_out,
                    const std::optional<fs::path>& report_out) {
  IngestReport report;
  Corpus corpus = ingest_files(inputs, options, report);
  const auto graph = CitationGraph::build(corpus);
  if (snapshot_out.has_parent_path()) fs::create_directories(snapshot_out.parent_path());
  save_snapshot(snapshot_out, corpus, graph);
  const auto stats = summarize(corpus, graph);
  spdlog::info("ingest: {} papers ({} records, {} skipped, {} duplicates), {} graph nodes, {} edges, {} timestamp anomalies",
               corpus.size(), report.records, report.skipped, report.duplicates, graph.node_count(),
               graph.edge_count(), graph.timestamp_anomalies());
  if (report_out) {
    ordered_json j;
    j["papers"] = stats.papers;
    j["records"] = report.records;
    j["skipped"] = report.skipped;
    j["duplicates"] = report.duplicates;
    j["self_refs_dropped"] = report.self_refs_dropped;
    j["duplicate_refs_dropped"] = report.duplicate_refs_dropped;
    j["graph_nodes"] = graph.node_count();
    j["dangling_nodes"] = graph.node_count() - graph.paper_count();
    j["edges"] = graph.edge_count();
    j["timestamp_anomalies"] = graph.timestamp_anomalies();
    j["mean_team_size"] = opt_json(stats.mean_team_size);
    j["mean_topics"] = opt_json(stats.mean_topics);
    j["mean_references"] = opt_json(stats.mean_references);
    j["mean_citations"] = opt_json(stats.mean_citations);
    j["warnings"] = report.warnings;
    write_text_file(*report_out, j.dump(2) + "\n");
  }
  return report;
}

ActivityLexicon load_lexicon(const std::optional<fs::path>& path) {
  return path ? ActivityLexicon::load(*path) : ActivityLexicon::builtin();
}

CoverageReport parse(const fs::path& snapshot, const std::optional<fs::path>& lexicon, const fs::path& profiles_out,
                     const std::optional<fs::path>& coverage_out, std::size_t threads) {
  const auto lex = load_lexicon(lexicon);
  const Snapshot snap = load_snapshot(snapshot);
  auto extraction = extract_profiles(snap.corpus, lex, threads);
  write_profiles(profiles_out, extraction.profiles);
  if (coverage_out) write_text_file(*coverage_out, coverage_to_json(extraction.report));
  const auto& r = extraction.report;
  spdlog::info("parse: {} statements, {} profiles, coverage {}, {} unattributed, {} ambiguous mentions",
               r.papers_parsed, extraction.profiles.size(), r.coverage() ? fmt::format("{:.4f}", *r.coverage()) : "n/a",
               r.unattributed, r.ambiguous_mentions);
  return extraction.report;
}

std::optional<CooccurrenceUnit> unit_from_name(std::string_view name) {
  if (name == "author_paper") return CooccurrenceUnit::AuthorPaper;
  if (name == "paper") return CooccurrenceUnit::Paper;
  return std::nullopt;
}

std::string_view unit_name(CooccurrenceUnit u) { return u == CooccurrenceUnit::Paper ? "paper" : "author_paper"; }

PartitionArtifact cluster(const fs::path& profiles, const fs::path& partition_out, const ClusterStageOptions& options) {
  if (options.assignment != "reference" && options.assignment != "detected") {
    throw ConfigError("role assignment must be 'reference' or 'detected'");
  }
  const auto prof = read_profiles(profiles);
  if (prof.empty()) throw DataError("no activity profiles in " + profiles.string());
  const auto graph = build_cooccurrence(prof, options.unit);
  PartitionArtifact a;
  a.partition = cluster_modularity(graph, options.cluster);
  const auto ref = reference_labels();
  a.agreement = rand_agreement(a.partition.labels, ref);
  a.reference_q = modularity(graph, ref, options.cluster.resolution);
  a.seed = options.cluster.seed;
  a.resolution = options.cluster.resolution;
  a.unit = std::string(unit_name(options.unit));
  a.assignment = options.assignment;
  a.roles = options.assignment == "detected" ? role_map_from_partition(a.partition.labels) : reference_role_map();
  write_partition(partition_out, a);
  spdlog::info("cluster: {} clusters, Q = {}, agreement with reference = {:.4f}", a.partition.cluster_count(),
               a.partition.q ? fmt::format("{:.6f}", *a.partition.q) : "undefined", *a.agreement);
  return a;
}

std::optional<Promotion> promotion_from_name(std::string_view name) {
  if (name == "none") return Promotion::None;
  if (name == "corresponding") return Promotion::Corresponding;
  if (name == "first") return Promotion::First;
  return std::nullopt;
}

std::string_view promotion_name(Promotion p) {
  switch (p) {
    case Promotion::None:
      return "none";
    case Promotion::Corresponding:
      return "corresponding";
    case Promotion::First:
      return "first";
  }
  return "none";
}

std::vector<RoleAssignment> roles(const fs::path& profiles, const fs::path& partition, const fs::path& roles_out,
                                  Promotion promotion) {
  const auto prof = read_profiles(profiles);
  const RoleMap map = read_partition_roles(partition);
  auto out = assign_roles(prof, map, promotion);
  write_roles(roles_out, out);
  const auto promoted = std::count_if(out.begin(), out.end(), [](const auto& r) { return r.promoted; });
  spdlog::info("roles: {} assignments ({} promoted)", out.size(), promoted);
  return out;
}

LRatioSummary lratio(const fs::path& roles_path, const fs::path& csv_out) {
  const auto assignments = read_roles(roles_path);
  const auto lr = compute_lratios(assignments);
  write_lratio_csv(csv_out, lr);
  LRatioSummary s;
  s.papers = lr.size();
  for (const auto& l : lr) {
    switch (l.status) {
      case LRatioStatus::Ok:
        ++s.defined;
        break;
      case LRatioStatus::NoLead:
        ++s.no_lead;
        break;
      case LRatioStatus::Incomplete:
        ++s.incomplete;
        break;
    }
  }
  spdlog::info("lratio: {} papers, {} defined, {} without a lead, {} incomplete", s.papers, s.defined, s.no_lead,
               s.incomplete);
  return s;
}

namespace {

struct PaperRoles {
  std::vector<Role> roles;  // byline order
  std::size_t assigned = 0;
};

std::map<std::string, PaperRoles> group_roles(std::span<const RoleAssignment> assignments, const Corpus& corpus) {
  std::map<std::string, PaperRoles> out;
  for (const auto& a : assignments) {
    const auto idx = corpus.find(a.paper_id);
    if (!idx) continue;
    const auto& paper = corpus.paper(*idx);
    auto& pr = out[a.paper_id];
    if (pr.roles.empty()) pr.roles.assign(paper.team_size(), Role::Unknown);
    const auto pos = paper.position_of(a.author_id);
    if (!pos) continue;
    if (pr.roles[*pos] == Role::Unknown && a.role != Role::Unknown) ++pr.assigned;
    pr.roles[*pos] = a.role;
  }
  return out;
}

}  // namespace

TrainStageResult train_roles(const fs::path& snapshot, const fs::path& roles_path, const fs::path& model_out,
                             const ClassifierConfig& config, Unevenness kind, const std::optional<fs::path>& report_out,
                             std::size_t threads) {
  const Snapshot snap = load_snapshot(snapshot);
  const auto assignments = read_roles(roles_path);
  const auto by_paper = group_roles(assignments, snap.corpus);

  // Labeled examples from papers whose roles are fully known.
  std::vector<std::string> papers;
  for (const auto& [id, pr] : by_paper) {
    if (pr.assigned == pr.roles.size()) papers.push_back(id);
  }
  std::vector<std::vector<AuthorPaperFeatures>> feats(papers.size());
  parallel_for(papers.size(), threads, [&](std::size_t i) {
    feats[i] = paper_features(snap.corpus.paper(*snap.corpus.find(papers[i])), snap.authors);
  });
  std::vector<LabeledExample> examples;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    const auto& roles = by_paper.at(papers[i]).roles;
    for (std::size_t a = 0; a < roles.size(); ++a) {
      examples.push_back({papers[i], feats[i][a].x, roles[a] == Role::Lead ? 1 : 0});
    }
  }
  spdlog::info("train-roles: {} labeled authors on {} papers", examples.size(), papers.size());
  const TrainedClassifier trained = train_role_classifier(examples, config);

  // Fit the L-ratio head on training and validation papers; report on test papers.
  const std::set<std::string> test(trained.report.test_papers.begin(), trained.report.test_papers.end());
  std::vector<LRatioTarget> fit_targets;
  std::vector<std::pair<std::vector<double>, double>> test_targets;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    const auto& roles = by_paper.at(papers[i]).roles;
    const auto n_lead = static_cast<std::size_t>(std::count(roles.begin(), roles.end(), Role::Lead));
    if (n_lead == 0) continue;
    LRatioTarget t;
    for (const auto& f : feats[i]) t.probabilities.push_back(trained.model.probability(f.x));
    t.lratio = static_cast<double>(n_lead) / static_cast<double>(roles.size());
    if (test.count(papers[i])) {
      test_targets.emplace_back(t.probabilities, t.lratio);
    } else {
      fit_targets.push_back(std::move(t));
    }
  }
  TrainStageResult result;
  result.report = trained.report;
  result.head = fit_lratio_head(fit_targets, kind);
  std::vector<double> pred, truth;
  for (const auto& [p, l] : test_targets) {
    pred.push_back(predict_lratio(p, result.head));
    truth.push_back(l);
  }
  result.test_lratio_papers = pred.size();
  if (pred.size() >= 2) result.test_lratio_pearson = pearson(pred, truth);

  save_role_model(model_out, RoleModel{trained.model, result.head});
  const auto& r = trained.report;
  spdlog::info("train-roles: threshold {:.4f}, test precision {}, recall {}, L-ratio r = {}", r.threshold,
               r.test.precision ? fmt::format("{:.4f}", *r.test.precision) : "undefined",
               r.test.recall ? fmt::format("{:.4f}", *r.test.recall) : "undefined",
               result.test_lratio_pearson ? fmt::format("{:.4f}", *result.test_lratio_pearson) : "undefined");
  if (report_out) {
    ordered_json j;
    j["config_hash"] = config.hash();
    j["examples"] = examples.size();
    j["papers"] = papers.size();
    j["train_examples"] = r.train_examples;
    j["validation_examples"] = r.validation_examples;
    j["test_examples"] = r.test_examples;
    j["train_papers"] = r.train_papers.size();
    j["validation_papers"] = r.validation_papers.size();
    j["test_papers"] = r.test_papers.size();
    j["best_epoch"] = r.best_epoch;
    j["threshold"] = r.threshold;
    j["test_base_rate"] = r.test_base_rate;
    j["test_precision"] = opt_json(r.test.precision);
    j["test_recall"] = opt_json(r.test.recall);
    j["test_lratio_pearson"] = opt_json(result.test_lratio_pearson);
    j["unevenness"] = std::string(unevenness_name(result.head.kind));
    j["head"] = result.head.coef;
    write_text_file(*report_out, j.dump(2) + "\n");
  }
  return result;
}

std::vector<LRatio> predict(const fs::path& snapshot, const fs::path& model_path, const fs::path& csv_out,
                            std::size_t threads) {
  const Snapshot snap = load_snapshot(snapshot);
  const RoleModel model = load_role_model(model_path);
  std::vector<LRatio> out(snap.corpus.size());
  parallel_for(snap.corpus.size(), threads, [&](std::size_t i) {
    const auto& paper = snap.corpus.paper(i);
    const auto feats = paper_features(paper, snap.authors);
    std::vector<double> p;
    for (const auto& f : feats) p.push_back(model.classifier.probability(f.x));
    LRatio& l = out[i];
    l.paper_id = paper.id;
    l.n = paper.team_size();
    l.n_lead = static_cast<std::size_t>(
        std::count_if(p.begin(), p.end(), [&](double v) { return v >= model.classifier.threshold(); }));
    l.value = predict_lratio(p, model.head);
    l.tall = l.value < 0.5;
    l.source = RoleSource::Predicted;
  });
  write_lratio_csv(csv_out, out);
  spdlog::info("predict: {} papers", out.size());
  return out;
}

EmbeddingModel embed(const fs::path& snapshot, const fs::path& embeddings_out, const EmbeddingConfig& config) {
  const Snapshot snap = load_snapshot(snapshot);
  std::vector<std::vector<std::string>> bags;
  bags.reserve(snap.corpus.size());
  for (const auto& p : snap.corpus.papers()) bags.push_back(p.topics);
  auto model = train_embeddings(bags, config);
  save_embeddings(embeddings_out, model);
  spdlog::info("embed: {} keywords, dimension {}", model.vocab_size(), model.dimension());
  return model;
}

fs::path authors_table_path(const fs::path& metrics_csv) {
  fs::path p = metrics_csv;
  p.replace_filename(metrics_csv.stem().string() + ".authors.csv");
  return p;
}

std::size_t metrics(const fs::path& snapshot, const fs::path& roles_path, const std::optional<fs::path>& predicted,
                    const fs::path& embeddings, const fs::path& metrics_out, const MetricsOptions& options,
                    std::size_t threads) {
  const Snapshot snap = load_snapshot(snapshot);
  const auto& corpus = snap.corpus;
  const auto assignments = read_roles(roles_path);
  const auto by_paper = group_roles(assignments, corpus);
  std::unordered_map<std::string, LRatio> parsed;
  for (auto& l : compute_lratios(assignments)) parsed.emplace(l.paper_id, std::move(l));
  std::unordered_map<std::string, LRatio> pred;
  if (predicted) {
    for (auto& l : read_lratio_csv(*predicted)) pred.emplace(l.paper_id, std::move(l));
  }
  const EmbeddingModel model = load_embeddings(embeddings);
  const auto novelty = compute_novelty(corpus, model, options.novelty_quantile, threads);
  const auto disrupt = compute_disruption(corpus, snap.graph, options.disruption, threads);
  const auto horizon = corpus.horizon();

  std::string table = "paper_id,year,n,lratio,novelty_score,top_novel,D,development_pct,prod_lead,prod_support,c10,c20plus,flags\n";
  std::string authors = "paper_id,author_id,role,career_age,productivity\n";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& paper = corpus.paper(i);
    std::vector<std::string> flags;
    std::optional<double> lr;
    const PaperRoles* pr = nullptr;
    if (auto it = by_paper.find(paper.id); it != by_paper.end()) pr = &it->second;
    if (auto it = parsed.find(paper.id); it != parsed.end()) {
      if (it->second.defined()) {
        lr = it->second.value;
      } else {
        flags.push_back(it->second.status == LRatioStatus::NoLead ? "no_lead" : "incomplete");
      }
    }
    if (!lr) {
      if (auto it = pred.find(paper.id); it != pred.end()) {
        lr = it->second.value;
        flags.push_back("lratio_predicted");
      } else {
        flags.push_back("lratio_missing");
      }
    }
    const auto& nov = novelty[i];
    if (!nov.score) flags.push_back("novelty_undefined");
    const auto& dis = disrupt[i];
    if (!dis.d) flags.push_back("disruption_undefined");

    ProductivitySplit split;
    if (pr && pr->assigned == paper.team_size()) split = team_productivity_split(paper, pr->roles, snap.authors);
    const auto win = citation_windows(snap.graph, static_cast<CitationGraph::Node>(i), horizon, options.windows);
    if (win && !win->long_observable) flags.push_back("c20plus_unobservable");

    std::string flag_text;
    for (std::size_t f = 0; f < flags.size(); ++f) flag_text += (f ? ";" : "") + flags[f];
    const std::vector<std::string> row = {
        paper.id,
        std::to_string(paper.year),
        std::to_string(paper.team_size()),
        format_optional(lr),
        format_optional(nov.score),
        nov.score ? (nov.top_decile ? "1" : "0") : "",
        format_optional(dis.d),
        format_optional(dis.development_percentile),
        format_optional(split.lead),
        format_optional(split.support),
        win ? std::to_string(win->c_short) : "",
        win ? std::to_string(win->c_long) : "",
        flag_text,
    };
    table += csv_row(row);

    for (std::size_t a = 0; a < paper.team_size(); ++a) {
      const std::string& author = paper.authors[a];
      const bool known = pr && pr->roles[a] != Role::Unknown;
      const std::vector<std::string> arow = {
          paper.id, author, known ? std::string(role_name(pr->roles[a])) : "",
          std::to_string(snap.authors.career_age(author, paper.year)),
          std::to_string(productivity(snap.authors, author, paper.year))};
      authors += csv_row(arow);
    }
  }
  write_text_file(metrics_out, table);
  write_text_file(authors_table_path(metrics_out), authors);
  spdlog::info("metrics: {} papers", corpus.size());
  return corpus.size();
}

namespace {

const std::set<std::string> kOutcomes = {"novelty_score", "top_novel", "D", "development_pct",
                                         "prod_lead", "prod_support", "c10", "c20plus"};

struct PaperRow {
  std::string id;
  double y = 0.0;
  double lratio = 0.0;
  double n = 0.0;
  bool predicted = false;
};

struct AgeStats {
  double mean = 0.0;
  double sd = 0.0;
};

std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + v[i];
  return out;
}

}  // namespace

std::string regress_result_json(const RegressSpec& spec, const RegressionResult& r) {
  ordered_json j;
  j["outcome"] = spec.outcome;
  j["fe"] = spec.fe;
  j["controls"] = spec.controls;
  j["sample"] = spec.sample;
  j["n"] = r.n;
  j["dof"] = r.dof;
  j["r2"] = r.r2;
  j["sigma2"] = r.sigma2;
  j["entities"] = r.entities;
  j["singletons_dropped"] = r.singletons_dropped;
  j["se_type"] = r.se_type;
  auto coefs = ordered_json::array();
  for (const auto& c : r.coefficients) {
    ordered_json e;
    e["name"] = c.name;
    e["estimate"] = c.estimate;
    e["se"] = c.se;
    e["t"] = c.t;
    coefs.push_back(e);
  }
  j["coefficients"] = coefs;
  return j.dump(2) + "\n";
}

RegressionResult regress(const fs::path& metrics_csv, const std::optional<fs::path>& authors_csv,
                         const RegressSpec& spec, const fs::path& result_out) {
  if (!kOutcomes.count(spec.outcome)) {
    throw ConfigError(fmt::format("unknown outcome '{}'; choose one of {}", spec.outcome,
                                  join(std::vector<std::string>(kOutcomes.begin(), kOutcomes.end()), ',')));
  }
  if (spec.fe != "none" && spec.fe != "author") throw ConfigError("fixed effect must be 'none' or 'author'");
  if (spec.sample != "all" && spec.sample != "parsed") throw ConfigError("sample must be 'all' or 'parsed'");
  bool need_ages = false;
  for (const auto& c : spec.controls) {
    if (c != "size" && c != "age_mean" && c != "age_sd") throw ConfigError("unknown control '" + c + "'");
    need_ages = need_ages || c != "size";
  }
  if (std::set<std::string>(spec.controls.begin(), spec.controls.end()).size() != spec.controls.size()) {
    throw ConfigError("duplicate control");
  }

  const CsvTable t = read_csv(metrics_csv);
  const auto c_id = t.column("paper_id"), c_y = t.column(spec.outcome), c_l = t.column("lratio"), c_n = t.column("n"),
             c_f = t.column("flags");
  std::vector<PaperRow> rows;
  for (const auto& row : t.rows) {
    const auto y = parse_cell(row[c_y], spec.outcome);
    const auto l = parse_cell(row[c_l], "lratio");
    const auto n = parse_cell(row[c_n], "n");
    if (!y || !l || !n) continue;
    const bool predicted = row[c_f].find("lratio_predicted") != std::string::npos;
    if (spec.sample == "parsed" && predicted) continue;
    rows.push_back({row[c_id], *y, *l, *n, predicted});
  }

  std::map<std::string, std::vector<std::pair<std::string, double>>> members;  // paper -> (author, career age)
  if (need_ages || spec.fe == "author") {
    const fs::path path = authors_csv.value_or(authors_table_path(metrics_csv));
    const CsvTable a = read_csv(path);
    const auto a_p = a.column("paper_id"), a_a = a.column("author_id"), a_age = a.column("career_age");
    for (const auto& row : a.rows) {
      const auto age = parse_cell(row[a_age], "career_age");
      if (!age) throw FormatError(path.string() + ": missing career age");
      members[row[a_p]].emplace_back(row[a_a], *age);
    }
  }
  auto ages = [&](const std::string& paper) {
    AgeStats s;
    const auto it = members.find(paper);
    if (it == members.end() || it->second.empty()) throw DataError("no author rows for paper " + paper);
    const auto& m = it->second;
    for (const auto& [_, a] : m) s.mean += a;
    s.mean /= static_cast<double>(m.size());
    for (const auto& [_, a] : m) s.sd += (a - s.mean) * (a - s.mean);
    s.sd = std::sqrt(s.sd / static_cast<double>(m.size()));
    return s;
  };

  std::vector<double> y;
  std::vector<Regressor> xs{{"lratio", {}}};
  for (const auto& c : spec.controls) xs.push_back({c, {}});
  std::vector<std::string> entity, cluster;
  auto push = [&](const PaperRow& r, const std::string& ent) {
    y.push_back(r.y);
    xs[0].values.push_back(r.lratio);
    const AgeStats s = need_ages ? ages(r.id) : AgeStats{};
    for (std::size_t c = 0; c < spec.controls.size(); ++c) {
      const auto& name = spec.controls[c];
      xs[c + 1].values.push_back(name == "size" ? r.n : (name == "age_mean" ? s.mean : s.sd));
    }
    entity.push_back(ent);
    cluster.push_back(spec.fe == "author" ? ent : r.id);
  };
  for (const auto& r : rows) {
    if (spec.fe == "author") {
      const auto it = members.find(r.id);
      if (it == members.end()) continue;
      for (const auto& [author, _] : it->second) push(r, author);
    } else {
      push(r, r.id);
    }
  }
  SeOptions se;
  if (spec.cluster_se) se.clusters = cluster;
  const RegressionResult result =
      spec.fe == "author" ? within_fixed_effects(y, xs, entity, se) : ols(y, xs, true, se);
  write_text_file(result_out, regress_result_json(spec, result));
  const auto* b = result.find("lratio");
  spdlog::info("regress: {} ~ lratio (fe={}): b = {:.6g}, se = {:.6g}, N = {}", spec.outcome, spec.fe, b->estimate,
               b->se, result.n);
  return result;
}

std::vector<CurveBin> curve(const fs::path& metrics_csv, const CurveSpec& spec, const fs::path& curve_out) {
  const CsvTable t = read_csv(metrics_csv);
  const auto cx = t.column(spec.x), cy = t.column(spec.y);
  std::vector<double> x, y;
  for (const auto& row : t.rows) {
    const auto a = parse_cell(row[cx], spec.x);
    const auto b = parse_cell(row[cy], spec.y);
    if (!a || !b) continue;
    x.push_back(*a);
    y.push_back(*b);
  }
  CurveOptions opts = spec.options;
  if (spec.x == "lratio") {
    if (!opts.lo) opts.lo = 0.0;
    if (!opts.hi) opts.hi = 1.0;
  }
  const auto bins = bootstrap_binned_curve(x, y, opts);
  std::string out = "bin,x_lo,x_hi,n,mean_x,mean_y,ci_low,ci_high\n";
  for (const auto& b : bins) {
    const std::vector<std::string> row = {std::to_string(b.bin), format_number(b.x_lo), format_number(b.x_hi),
                                          std::to_string(b.n),   format_number(b.mean_x), format_number(b.mean_y),
                                          format_number(b.ci_low), format_number(b.ci_high)};
    out += csv_row(row);
  }
  write_text_file(curve_out, out);
  spdlog::info("curve: {} vs {}: {} occupied bins from {} points", spec.y, spec.x, bins.size(), x.size());
  return bins;
}

void synth(const fs::path& out_dir, const SynthConfig& config) {
  const auto corpus = generate_synthetic_corpus(config);
  write_synthetic_corpus(out_dir, corpus, config.seed);
  spdlog::info("synth: {} papers written to {}", corpus.papers.size(), out_dir.string());
}

}  // namespace teamscope::stages
