#include "teamscope/pipeline.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <set>

#include "teamscope/digest.hpp"
#include "teamscope/error.hpp"

namespace teamscope {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Accessor that records which keys were read so unknown keys can be reported.
class ConfigObject {
 public:
  ConfigObject(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }
  ~ConfigObject() = default;

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& at(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return where_ + "." + key; }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(key) + " has the wrong type");
    }
  }

  void read_seed(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(path(key) + " must be a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }

  void finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (!used_.count(k)) throw ConfigError(fmt::format("unknown config key '{}'", path(k)));
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  ConfigObject o(root, "config");
  if (o.has("inputs")) {
    const auto& in = o.at("inputs");
    if (!in.is_array()) throw ConfigError("config.inputs must be an array of paths");
    for (const auto& p : in) {
      if (!p.is_string()) throw ConfigError("config.inputs must be an array of paths");
      c.inputs.push_back(resolve(base_dir, p.get<std::string>()));
    }
  }
  if (o.has("lexicon")) c.lexicon = resolve(base_dir, o.at("lexicon").get<std::string>());
  std::string out_dir = "out";
  o.read("output_dir", out_dir);
  c.output_dir = resolve(base_dir, out_dir);
  o.read("threads", c.threads);
  if (o.has("years")) {
    ConfigObject y(o.at("years"), "config.years");
    y.read("min", c.ingest.min_year);
    y.read("max", c.ingest.max_year);
    y.finish();
  }
  if (o.has("seeds")) {
    ConfigObject s(o.at("seeds"), "config.seeds");
    s.read_seed("cluster", c.seeds.cluster);
    s.read_seed("train", c.seeds.train);
    s.read_seed("bootstrap", c.seeds.bootstrap);
    s.read_seed("embedding", c.seeds.embedding);
    s.finish();
  }
  if (o.has("cluster")) {
    ConfigObject s(o.at("cluster"), "config.cluster");
    s.read("resolution", c.cluster.cluster.resolution);
    s.read("restarts", c.cluster.cluster.restarts);
    std::string unit = "author_paper";
    s.read("unit", unit);
    const auto u = stages::unit_from_name(unit);
    if (!u) throw ConfigError("config.cluster.unit must be 'author_paper' or 'paper'");
    c.cluster.unit = *u;
    s.read("assignment", c.cluster.assignment);
    s.finish();
  }
  if (o.has("roles")) {
    ConfigObject s(o.at("roles"), "config.roles");
    std::string promote = "none";
    s.read("promote", promote);
    const auto p = stages::promotion_from_name(promote);
    if (!p) throw ConfigError("config.roles.promote must be none, corresponding or first");
    c.promote = *p;
    s.finish();
  }
  if (o.has("classifier")) {
    ConfigObject s(o.at("classifier"), "config.classifier");
    s.read("hidden", c.classifier.hidden);
    s.read("epochs", c.classifier.epochs);
    s.read("batch_size", c.classifier.batch_size);
    s.read("learning_rate", c.classifier.learning_rate);
    s.read("l2", c.classifier.l2);
    s.read("validation_fraction", c.classifier.validation_fraction);
    s.read("test_fraction", c.classifier.test_fraction);
    std::string u = "gini";
    s.read("unevenness", u);
    const auto kind = unevenness_from_name(u);
    if (!kind) throw ConfigError("config.classifier.unevenness must be gini, variance or range");
    c.unevenness = *kind;
    s.finish();
  }
  if (o.has("embedding")) {
    ConfigObject s(o.at("embedding"), "config.embedding");
    s.read("dimension", c.embedding.dimension);
    s.read("epochs", c.embedding.epochs);
    s.read("negatives", c.embedding.negatives);
    s.read("learning_rate", c.embedding.learning_rate);
    s.read("min_learning_rate", c.embedding.min_learning_rate);
    s.read("min_count", c.embedding.min_count);
    s.read("threads", c.embedding.threads);
    s.finish();
  }
  if (o.has("metrics")) {
    ConfigObject s(o.at("metrics"), "config.metrics");
    s.read("novelty_quantile", c.metrics.novelty_quantile);
    s.read("short_window", c.metrics.windows.short_years);
    s.read("long_after", c.metrics.windows.long_after);
    s.read("include_publication_year", c.metrics.windows.include_publication_year);
    bool same_year = false;
    s.read("disruption_same_year", same_year);
    c.metrics.disruption.strictly_after = !same_year;
    s.finish();
  }
  if (o.has("regress")) {
    const auto& arr = o.at("regress");
    if (!arr.is_array()) throw ConfigError("config.regress must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ConfigObject s(arr[i], fmt::format("config.regress[{}]", i));
      stages::RegressSpec r;
      s.read("outcome", r.outcome);
      s.read("fe", r.fe);
      s.read("controls", r.controls);
      s.read("sample", r.sample);
      s.read("cluster_se", r.cluster_se);
      s.finish();
      if (r.outcome.empty()) throw ConfigError(s.path("outcome") + " is required");
      c.regressions.push_back(std::move(r));
    }
  }
  if (o.has("curves")) {
    const auto& arr = o.at("curves");
    if (!arr.is_array()) throw ConfigError("config.curves must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ConfigObject s(arr[i], fmt::format("config.curves[{}]", i));
      stages::CurveSpec cs;
      s.read("x", cs.x);
      s.read("y", cs.y);
      s.read("bins", cs.options.bins);
      s.read("replicates", cs.options.replicates);
      s.read("alpha", cs.options.alpha);
      if (s.has("lo")) cs.options.lo = s.at("lo").get<double>();
      if (s.has("hi")) cs.options.hi = s.at("hi").get<double>();
      s.finish();
      if (cs.y.empty()) throw ConfigError(s.path("y") + " is required");
      c.curves.push_back(std::move(cs));
    }
  }
  o.finish();

  c.cluster.cluster.seed = c.seeds.cluster;
  c.classifier.seed = c.seeds.train;
  c.embedding.seed = c.seeds.embedding;
  for (auto& cs : c.curves) {
    cs.options.seed = c.seeds.bootstrap;
    cs.options.threads = c.threads;
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

std::string PipelineConfig::canonical_json() const {
  ordered_json j;
  auto paths = ordered_json::array();
  for (const auto& p : inputs) paths.push_back(p.string());
  j["inputs"] = paths;
  j["lexicon"] = lexicon ? ordered_json(lexicon->string()) : ordered_json(nullptr);
  j["output_dir"] = output_dir.string();
  j["years"] = {{"min", ingest.min_year}, {"max", ingest.max_year}};
  j["seeds"] = {{"cluster", seeds.cluster}, {"train", seeds.train}, {"bootstrap", seeds.bootstrap},
                {"embedding", seeds.embedding}};
  j["cluster"] = {{"resolution", cluster.cluster.resolution},
                  {"restarts", cluster.cluster.restarts},
                  {"unit", std::string(stages::unit_name(cluster.unit))},
                  {"assignment", cluster.assignment}};
  j["roles"] = {{"promote", std::string(stages::promotion_name(promote))}};
  j["classifier"] = {{"hash", classifier.hash()}, {"unevenness", std::string(unevenness_name(unevenness))}};
  j["embedding"] = {{"hash", embedding.hash()}, {"threads", embedding.threads}};
  j["metrics"] = {{"novelty_quantile", metrics.novelty_quantile},
                  {"short_window", metrics.windows.short_years},
                  {"long_after", metrics.windows.long_after},
                  {"include_publication_year", metrics.windows.include_publication_year},
                  {"disruption_same_year", !metrics.disruption.strictly_after}};
  auto regs = ordered_json::array();
  for (const auto& r : regressions) {
    regs.push_back({{"outcome", r.outcome}, {"fe", r.fe}, {"controls", r.controls}, {"sample", r.sample},
                    {"cluster_se", r.cluster_se}});
  }
  j["regress"] = regs;
  auto curves_j = ordered_json::array();
  for (const auto& c : curves) {
    curves_j.push_back({{"x", c.x},
                        {"y", c.y},
                        {"bins", c.options.bins},
                        {"replicates", c.options.replicates},
                        {"alpha", c.options.alpha},
                        {"lo", c.options.lo ? ordered_json(*c.options.lo) : ordered_json(nullptr)},
                        {"hi", c.options.hi ? ordered_json(*c.options.hi) : ordered_json(nullptr)}});
  }
  j["curves"] = curves_j;
  return j.dump();
}

std::string PipelineConfig::hash() const { return sha256_hex(canonical_json()); }

void PipelineConfig::validate() const {
  if (inputs.empty()) throw ConfigError("config lists no input files");
  for (const auto& p : inputs) {
    if (!fs::is_regular_file(p)) throw ConfigError("input file does not exist: " + p.string());
  }
  if (lexicon && !fs::is_regular_file(*lexicon)) throw ConfigError("lexicon file does not exist: " + lexicon->string());
  if (ingest.min_year > ingest.max_year) throw ConfigError("config.years.min exceeds config.years.max");
  if (threads == 0) throw ConfigError("config.threads must be positive");
}

// ---------------------------------------------------------------------------

std::string RunManifest::to_json() const {
  ordered_json j;
  j["config_hash"] = config_hash;
  j["tool_version"] = tool_version;
  auto arr = ordered_json::array();
  for (const auto& s : stages) {
    ordered_json e;
    e["name"] = s.name;
    e["params_hash"] = s.params_hash;
    e["inputs"] = s.inputs;
    e["outputs"] = s.outputs;
    e["seconds"] = s.seconds;
    e["warnings"] = s.warnings;
    e["skipped"] = s.skipped;
    arr.push_back(e);
  }
  j["stages"] = arr;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json_text(const std::string& text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.config_hash = j.at("config_hash").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& e : j.at("stages")) {
      StageRecord s;
      s.name = e.at("name").get<std::string>();
      s.params_hash = e.at("params_hash").get<std::string>();
      s.inputs = e.at("inputs").get<std::map<std::string, std::string>>();
      s.outputs = e.at("outputs").get<std::map<std::string, std::string>>();
      s.seconds = e.value("seconds", 0.0);
      s.warnings = e.value("warnings", std::size_t{0});
      s.skipped = e.value("skipped", false);
      m.stages.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  return m;
}

const StageRecord* RunManifest::find(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

struct StageDef {
  std::string name;
  std::string params;  // canonical parameter text
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::function<std::size_t()> run;  // returns a warning count
};

class StageError : public Error {
 public:
  StageError(ErrorClass cls, const std::string& what) : Error(cls, what) {}
};

bool up_to_date(const StageRecord* prev, const StageRecord& now) {
  if (!prev || prev->params_hash != now.params_hash || prev->inputs != now.inputs) return false;
  if (prev->outputs.empty()) return false;
  for (const auto& [path, digest] : prev->outputs) {
    if (!fs::is_regular_file(path) || file_sha256(path) != digest) return false;
  }
  return true;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  const fs::path manifest_path = out / "manifest.json";
  std::optional<RunManifest> previous;
  if (fs::is_regular_file(manifest_path)) {
    try {
      previous = RunManifest::from_json_text(read_text_file(manifest_path));
    } catch (const FormatError& e) {
      spdlog::warn("ignoring unreadable manifest: {}", e.what());
    }
  }

  const fs::path snapshot = out / "snapshot.bin", ingest_report = out / "ingest_report.json",
                 profiles = out / "profiles.ndjson", coverage = out / "coverage.json",
                 partition = out / "partition.json", roles = out / "roles.ndjson", lratio = out / "lratio.csv",
                 model = out / "model.bin", training = out / "training.json", predicted = out / "lratio_pred.csv",
                 embeddings = out / "embeddings.vec", metrics = out / "metrics.csv";
  const std::size_t threads = cfg.threads;
  const auto j = [](const ordered_json& v) { return v.dump(); };

  std::vector<StageDef> defs;
  defs.push_back({"ingest", j({{"min_year", cfg.ingest.min_year}, {"max_year", cfg.ingest.max_year}}), cfg.inputs,
                  {snapshot, ingest_report}, [&] {
                    const auto r = stages::ingest(cfg.inputs, cfg.ingest, snapshot, ingest_report);
                    return r.skipped + r.self_refs_dropped;
                  }});
  std::vector<fs::path> parse_inputs{snapshot};
  if (cfg.lexicon) parse_inputs.push_back(*cfg.lexicon);
  defs.push_back({"parse", j({{"lexicon", cfg.lexicon ? "file" : "builtin"}}), parse_inputs, {profiles, coverage}, [&] {
                    const auto r = stages::parse(snapshot, cfg.lexicon, profiles, coverage, threads);
                    return r.unattributed + r.unmatched_mentions + r.ambiguous_mentions;
                  }});
  defs.push_back({"cluster",
                  j({{"seed", cfg.cluster.cluster.seed},
                     {"resolution", cfg.cluster.cluster.resolution},
                     {"restarts", cfg.cluster.cluster.restarts},
                     {"unit", std::string(stages::unit_name(cfg.cluster.unit))},
                     {"assignment", cfg.cluster.assignment}}),
                  {profiles},
                  {partition},
                  [&] {
                    stages::cluster(profiles, partition, cfg.cluster);
                    return std::size_t{0};
                  }});
  defs.push_back({"roles", j({{"promote", std::string(stages::promotion_name(cfg.promote))}}), {profiles, partition},
                  {roles}, [&] {
                    stages::roles(profiles, partition, roles, cfg.promote);
                    return std::size_t{0};
                  }});
  defs.push_back({"lratio", "{}", {roles}, {lratio}, [&] {
                    const auto s = stages::lratio(roles, lratio);
                    return s.no_lead + s.incomplete;
                  }});
  defs.push_back({"train-roles",
                  j({{"classifier", cfg.classifier.hash()}, {"unevenness", std::string(unevenness_name(cfg.unevenness))}}),
                  {snapshot, roles},
                  {model, training},
                  [&] {
                    stages::train_roles(snapshot, roles, model, cfg.classifier, cfg.unevenness, training, threads);
                    return std::size_t{0};
                  }});
  defs.push_back({"predict", "{}", {snapshot, model}, {predicted}, [&] {
                    stages::predict(snapshot, model, predicted, threads);
                    return std::size_t{0};
                  }});
  defs.push_back({"embed", j({{"embedding", cfg.embedding.hash()}, {"threads", cfg.embedding.threads}}), {snapshot},
                  {embeddings}, [&] {
                    stages::embed(snapshot, embeddings, cfg.embedding);
                    return std::size_t{0};
                  }});
  defs.push_back({"metrics",
                  j({{"novelty_quantile", cfg.metrics.novelty_quantile},
                     {"short_window", cfg.metrics.windows.short_years},
                     {"long_after", cfg.metrics.windows.long_after},
                     {"include_publication_year", cfg.metrics.windows.include_publication_year},
                     {"strictly_after", cfg.metrics.disruption.strictly_after}}),
                  {snapshot, roles, predicted, embeddings},
                  {metrics, stages::authors_table_path(metrics)},
                  [&] {
                    stages::metrics(snapshot, roles, predicted, embeddings, metrics, cfg.metrics, threads);
                    return std::size_t{0};
                  }});
  for (const auto& r : cfg.regressions) {
    std::string name = fmt::format("regress_{}_{}", r.outcome, r.fe);
    if (!r.controls.empty()) {
      for (const auto& c : r.controls) name += "_" + c;
    }
    if (r.sample != "all") name += "_" + r.sample;
    const fs::path result = out / (name + ".json");
    defs.push_back({name,
                    j({{"outcome", r.outcome}, {"fe", r.fe}, {"controls", r.controls}, {"sample", r.sample},
                       {"cluster_se", r.cluster_se}}),
                    {metrics, stages::authors_table_path(metrics)},
                    {result},
                    [&, r, result] {
                      stages::regress(metrics, std::nullopt, r, result);
                      return std::size_t{0};
                    }});
  }
  for (const auto& c : cfg.curves) {
    const std::string name = fmt::format("curve_{}_{}", c.y, c.x);
    const fs::path result = out / (name + ".csv");
    defs.push_back({name,
                    j({{"x", c.x},
                       {"y", c.y},
                       {"bins", c.options.bins},
                       {"replicates", c.options.replicates},
                       {"alpha", c.options.alpha},
                       {"seed", c.options.seed},
                       {"lo", c.options.lo ? ordered_json(*c.options.lo) : ordered_json(nullptr)},
                       {"hi", c.options.hi ? ordered_json(*c.options.hi) : ordered_json(nullptr)}}),
                    {metrics},
                    {result},
                    [&, c, result] {
                      stages::curve(metrics, c, result);
                      return std::size_t{0};
                    }});
  }

  RunManifest manifest;
  manifest.config_hash = cfg.hash();
  manifest.tool_version = TEAMSCOPE_VERSION;
  for (auto& def : defs) {
    StageRecord rec;
    rec.name = def.name;
    rec.params_hash = sha256_hex(def.params);
    for (const auto& p : def.inputs) rec.inputs[p.string()] = file_sha256(p);
    const StageRecord* prev = previous ? previous->find(def.name) : nullptr;
    if (up_to_date(prev, rec)) {
      rec.outputs = prev->outputs;
      rec.warnings = prev->warnings;
      rec.skipped = true;
      spdlog::info("stage {}: up to date, skipped", def.name);
      manifest.stages.push_back(std::move(rec));
      continue;
    }
    spdlog::info("stage {}: running", def.name);
    const auto start = std::chrono::steady_clock::now();
    try {
      rec.warnings = def.run();
    } catch (const Error& e) {
      throw StageError(e.error_class(), fmt::format("stage '{}' failed: {}", def.name, e.what()));
    } catch (const std::exception& e) {
      throw StageError(ErrorClass::Data, fmt::format("stage '{}' failed: {}", def.name, e.what()));
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& p : def.outputs) rec.outputs[p.string()] = file_sha256(p);
    manifest.stages.push_back(std::move(rec));
    // Persist progress so an interrupted run can resume.
    write_text_file(manifest_path, manifest.to_json());
  }
  write_text_file(manifest_path, manifest.to_json());
  return manifest;
}

}  // namespace teamscope
