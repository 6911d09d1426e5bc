#include "teamscope/corpus.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_set>

#include "teamscope/binary_io.hpp"
#include "teamscope/error.hpp"

namespace teamscope {

using nlohmann::json;

bool PaperRecord::is_corresponding(std::string_view author) const {
  return std::find(corresponding.begin(), corresponding.end(), author) != corresponding.end();
}

std::optional<std::size_t> PaperRecord::position_of(std::string_view author) const {
  auto it = std::find(authors.begin(), authors.end(), author);
  if (it == authors.end()) return std::nullopt;
  return static_cast<std::size_t>(it - authors.begin());
}

namespace {

std::vector<std::string> string_array(const json& obj, const char* field) {
  std::vector<std::string> out;
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw FormatError(std::string("field '") + field + "' must be an array");
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string()) throw FormatError(std::string("field '") + field + "' must contain strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void note(IngestReport* report, std::size_t limit, std::string msg) {
  if (report == nullptr) return;
  if (report->warnings.size() < limit) {
    spdlog::warn("{}", msg);
    report->warnings.push_back(std::move(msg));
  }
}

}  // namespace

PaperRecord parse_paper_line(std::string_view line, const IngestOptions& options, IngestReport* report) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw FormatError("record is not a JSON object");

  PaperRecord p;
  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    throw FormatError("missing or empty 'id'");
  }
  p.id = id->get<std::string>();

  auto year = obj.find("year");
  if (year == obj.end() || !year->is_number_integer()) throw FormatError(p.id + ": 'year' must be an integer");
  p.year = year->get<int>();
  if (p.year < options.min_year || p.year > options.max_year) {
    throw FormatError(p.id + ": year " + std::to_string(p.year) + " outside configured range");
  }

  if (auto venue = obj.find("venue"); venue != obj.end() && !venue->is_null()) {
    if (!venue->is_string()) throw FormatError(p.id + ": 'venue' must be a string");
    p.venue = venue->get<std::string>();
  }

  auto authors = obj.find("authors");
  if (authors == obj.end() || !authors->is_array() || authors->empty()) {
    throw FormatError(p.id + ": 'authors' must be a non-empty array");
  }
  for (const auto& a : *authors) {
    if (a.is_string()) {
      p.authors.push_back(a.get<std::string>());
      p.author_names.push_back(p.authors.back());
    } else if (a.is_object() && a.contains("id") && a["id"].is_string()) {
      p.authors.push_back(a["id"].get<std::string>());
      auto name = a.find("name");
      p.author_names.push_back(name != a.end() && name->is_string() ? name->get<std::string>() : p.authors.back());
    } else {
      throw FormatError(p.id + ": author entries must be strings or {id, name} objects");
    }
    if (p.authors.back().empty()) throw FormatError(p.id + ": empty author id");
  }
  if (std::set<std::string>(p.authors.begin(), p.authors.end()).size() != p.authors.size()) {
    throw FormatError(p.id + ": duplicate author in byline");
  }

  p.corresponding = string_array(obj, "corresponding");
  for (const auto& c : p.corresponding) {
    if (!p.position_of(c)) throw FormatError(p.id + ": corresponding author '" + c + "' not in byline");
  }

  const std::size_t limit = options.max_logged_warnings;
  std::unordered_set<std::string> seen_refs;
  for (auto& r : string_array(obj, "refs")) {
    if (r == p.id) {
      if (report) ++report->self_refs_dropped;
      note(report, limit, p.id + ": self-reference dropped");
      continue;
    }
    if (!seen_refs.insert(r).second) {
      if (report) ++report->duplicate_refs_dropped;
      continue;
    }
    p.refs.push_back(std::move(r));
  }
  p.topics = string_array(obj, "topics");

  if (auto st = obj.find("statement"); st != obj.end() && !st->is_null()) {
    if (!st->is_string()) throw FormatError(p.id + ": 'statement' must be a string");
    p.statement = st->get<std::string>();
  }
  return p;
}

std::string to_json_line(const PaperRecord& p) {
  json authors = json::array();
  for (std::size_t i = 0; i < p.authors.size(); ++i) {
    if (p.author_names[i] == p.authors[i]) {
      authors.push_back(p.authors[i]);
    } else {
      authors.push_back(json{{"id", p.authors[i]}, {"name", p.author_names[i]}});
    }
  }
  json obj = json::object();
  obj["id"] = p.id;
  obj["year"] = p.year;
  obj["venue"] = p.venue;
  obj["authors"] = std::move(authors);
  obj["corresponding"] = p.corresponding;
  obj["refs"] = p.refs;
  obj["topics"] = p.topics;
  if (p.statement) obj["statement"] = *p.statement;
  return obj.dump();
}

Corpus::Corpus(std::vector<PaperRecord> papers) : papers_(std::move(papers)) {
  std::sort(papers_.begin(), papers_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  by_id_.reserve(papers_.size());
  for (std::size_t i = 0; i < papers_.size(); ++i) {
    if (!by_id_.emplace(papers_[i].id, i).second) throw DataError("duplicate paper id " + papers_[i].id);
  }
}

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Corpus::horizon() const {
  if (papers_.empty()) return std::nullopt;
  int y = papers_.front().year;
  for (const auto& p : papers_) y = std::max(y, p.year);
  return y;
}

namespace {

void ingest_stream(std::istream& in, const IngestOptions& options, IngestReport& report,
                   std::map<std::string, PaperRecord>& out) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++report.records;
    try {
      PaperRecord p = parse_paper_line(line, options, &report);
      auto [it, inserted] = out.try_emplace(p.id);
      if (!inserted) ++report.duplicates;
      it->second = std::move(p);
    } catch (const FormatError& e) {
      ++report.skipped;
      note(&report, options.max_logged_warnings, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("read error while ingesting records");
}

Corpus finish(std::map<std::string, PaperRecord>& papers) {
  std::vector<PaperRecord> v;
  v.reserve(papers.size());
  for (auto& [_, p] : papers) v.push_back(std::move(p));
  return Corpus(std::move(v));
}

}  // namespace

Corpus ingest_papers(std::istream& in, const IngestOptions& options, IngestReport& report) {
  std::map<std::string, PaperRecord> papers;
  ingest_stream(in, options, report, papers);
  return finish(papers);
}

Corpus ingest_files(std::span<const std::filesystem::path> paths, const IngestOptions& options,
                    IngestReport& report) {
  std::map<std::string, PaperRecord> papers;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read input " + path.string());
    ingest_stream(in, options, report, papers);
  }
  return finish(papers);
}

// ---------------------------------------------------------------------------
// CitationGraph

CitationGraph CitationGraph::build(const Corpus& corpus) {
  CitationGraph g;
  g.paper_count_ = corpus.size();
  g.ids_.reserve(corpus.size());
  g.years_.reserve(corpus.size());
  for (const auto& p : corpus.papers()) {
    g.ids_.push_back(p.id);
    g.years_.push_back(p.year);
  }

  // Dangling references get node ids after all papers, in id order.
  std::set<std::string> dangling;
  for (const auto& p : corpus.papers()) {
    for (const auto& r : p.refs) {
      if (!corpus.find(r)) dangling.insert(r);
    }
  }
  for (const auto& d : dangling) {
    g.ids_.push_back(d);
    g.years_.push_back(kUnknownYear);
  }
  g.index_ids();

  const std::size_t n = g.ids_.size();
  g.out_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    g.out_offsets_[i + 1] = g.out_offsets_[i] + static_cast<std::uint32_t>(corpus.paper(i).refs.size());
  }
  for (std::size_t i = corpus.size(); i < n; ++i) g.out_offsets_[i + 1] = g.out_offsets_[i];
  g.out_targets_.resize(g.out_offsets_[n]);

  std::vector<std::uint32_t> indegree(n, 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::uint32_t k = g.out_offsets_[i];
    for (const auto& r : corpus.paper(i).refs) {
      const Node t = g.by_id_.at(r);
      g.out_targets_[k++] = t;
      ++indegree[t];
      if (g.years_[t] != kUnknownYear && g.years_[i] < g.years_[t]) ++g.anomalies_;
    }
  }

  // Transpose by counting sort; sources are visited in ascending order so
  // each citer list comes out sorted.
  g.in_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.in_offsets_[v + 1] = g.in_offsets_[v] + indegree[v];
  g.in_sources_.resize(g.in_offsets_[n]);
  std::vector<std::uint32_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (std::size_t u = 0; u < n; ++u) {
    for (Node t : g.references(static_cast<Node>(u))) g.in_sources_[cursor[t]++] = static_cast<Node>(u);
  }
  if (g.anomalies_ > 0) spdlog::warn("{} citation edges point forward in time", g.anomalies_);
  return g;
}

void CitationGraph::index_ids() {
  by_id_.clear();
  by_id_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) by_id_.emplace(ids_[i], static_cast<Node>(i));
}

std::optional<int> CitationGraph::year(Node v) const {
  if (years_[v] == kUnknownYear) return std::nullopt;
  return years_[v];
}

std::optional<CitationGraph::Node> CitationGraph::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

void CitationGraph::save(BinaryWriter& w) const {
  w.u64(paper_count_);
  w.u64(ids_.size());
  for (const auto& id : ids_) w.str(id);
  std::vector<std::uint32_t> years(years_.begin(), years_.end());
  w.u32s(years);
  w.u32s(out_offsets_);
  w.u32s(out_targets_);
  w.u32s(in_offsets_);
  w.u32s(in_sources_);
  w.u64(anomalies_);
}

CitationGraph CitationGraph::load(BinaryReader& r) {
  CitationGraph g;
  g.paper_count_ = r.u64();
  const std::uint64_t n = r.u64();
  g.ids_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) g.ids_.push_back(r.str());
  for (std::uint32_t y : r.u32s()) g.years_.push_back(static_cast<std::int32_t>(y));
  g.out_offsets_ = r.u32s();
  g.out_targets_ = r.u32s();
  g.in_offsets_ = r.u32s();
  g.in_sources_ = r.u32s();
  g.anomalies_ = r.u64();
  if (g.years_.size() != n || g.out_offsets_.size() != n + 1 || g.in_offsets_.size() != n + 1 ||
      g.out_targets_.size() != g.in_sources_.size() || g.paper_count_ > n) {
    throw FormatError("inconsistent citation graph in snapshot");
  }
  g.index_ids();
  return g;
}

// ---------------------------------------------------------------------------
// AuthorIndex

AuthorIndex AuthorIndex::build(const Corpus& corpus, const CitationGraph& graph) {
  AuthorIndex idx;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& p = corpus.paper(i);
    const auto node = static_cast<CitationGraph::Node>(i);
    for (const auto& a : p.authors) {
      History& h = idx.histories_[a];
      h.paper_years.push_back(p.year);
      for (CitationGraph::Node c : graph.citers(node)) {
        h.citation_years.push_back(std::max(p.year, *graph.year(c)));
      }
      for (const auto& t : p.topics) {
        auto [it, fresh] = h.topic_first.try_emplace(t, p.year);
        if (!fresh) it->second = std::min(it->second, p.year);
      }
      auto [own, fresh] = h.ref_first.try_emplace(p.id, p.year);
      if (!fresh) own->second = std::min(own->second, p.year);
      for (const auto& r : p.refs) {
        auto [it, f] = h.ref_first.try_emplace(r, p.year);
        if (!f) it->second = std::min(it->second, p.year);
      }
    }
  }
  for (auto& [_, h] : idx.histories_) {
    std::sort(h.paper_years.begin(), h.paper_years.end());
    std::sort(h.citation_years.begin(), h.citation_years.end());
    h.topic_first_sorted.reserve(h.topic_first.size());
    for (const auto& [t, y] : h.topic_first) h.topic_first_sorted.push_back(y);
    std::sort(h.topic_first_sorted.begin(), h.topic_first_sorted.end());
  }
  return idx;
}

const AuthorIndex::History* AuthorIndex::lookup(std::string_view author) const {
  auto it = histories_.find(std::string(author));
  return it == histories_.end() ? nullptr : &it->second;
}

namespace {
std::size_t count_below(const std::vector<int>& sorted, int year) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), year) - sorted.begin());
}
}  // namespace

bool AuthorIndex::contains(std::string_view author) const { return lookup(author) != nullptr; }

std::optional<int> AuthorIndex::first_year(std::string_view author) const {
  const History* h = lookup(author);
  if (h == nullptr) return std::nullopt;
  return h->paper_years.front();
}

int AuthorIndex::career_age(std::string_view author, int year) const {
  const History* h = lookup(author);
  if (h == nullptr) return 0;
  return std::max(0, year - h->paper_years.front());
}

std::size_t AuthorIndex::papers_in_year(std::string_view author, int year) const {
  const History* h = lookup(author);
  if (h == nullptr) return 0;
  auto [lo, hi] = std::equal_range(h->paper_years.begin(), h->paper_years.end(), year);
  return static_cast<std::size_t>(hi - lo);
}

std::size_t AuthorIndex::prior_papers(std::string_view author, int year) const {
  const History* h = lookup(author);
  return h == nullptr ? 0 : count_below(h->paper_years, year);
}

std::size_t AuthorIndex::prior_citations(std::string_view author, int year) const {
  const History* h = lookup(author);
  return h == nullptr ? 0 : count_below(h->citation_years, year);
}

std::size_t AuthorIndex::prior_topic_count(std::string_view author, int year) const {
  const History* h = lookup(author);
  return h == nullptr ? 0 : count_below(h->topic_first_sorted, year);
}

bool AuthorIndex::knew_topic(std::string_view author, std::string_view topic, int year) const {
  const History* h = lookup(author);
  if (h == nullptr) return false;
  auto it = h->topic_first.find(std::string(topic));
  return it != h->topic_first.end() && it->second < year;
}

bool AuthorIndex::knew_reference(std::string_view author, std::string_view paper_id, int year) const {
  const History* h = lookup(author);
  if (h == nullptr) return false;
  auto it = h->ref_first.find(std::string(paper_id));
  return it != h->ref_first.end() && it->second < year;
}

std::vector<std::string> AuthorIndex::prior_topics(std::string_view author, int year) const {
  std::vector<std::string> out;
  if (const History* h = lookup(author)) {
    for (const auto& [t, y] : h->topic_first) {
      if (y < year) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> AuthorIndex::prior_references(std::string_view author, int year) const {
  std::vector<std::string> out;
  if (const History* h = lookup(author)) {
    for (const auto& [r, y] : h->ref_first) {
      if (y < year) out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

CorpusStats summarize(const Corpus& corpus, const CitationGraph& graph) {
  CorpusStats s;
  s.papers = corpus.size();
  if (corpus.empty()) return s;
  double team = 0, topics = 0, refs = 0, cites = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& p = corpus.paper(i);
    team += static_cast<double>(p.team_size());
    topics += static_cast<double>(p.topics.size());
    refs += static_cast<double>(p.refs.size());
    cites += static_cast<double>(graph.citers(static_cast<CitationGraph::Node>(i)).size());
  }
  const double n = static_cast<double>(corpus.size());
  s.mean_team_size = team / n;
  s.mean_topics = topics / n;
  s.mean_references = refs / n;
  s.mean_citations = cites / n;
  return s;
}

Snapshot Snapshot::from_corpus(Corpus corpus) {
  Snapshot s{std::move(corpus), {}, {}};
  s.graph = CitationGraph::build(s.corpus);
  s.authors = AuthorIndex::build(s.corpus, s.graph);
  return s;
}

namespace {
constexpr std::string_view kSnapshotMagic = "TSSN";

void write_paper(BinaryWriter& w, const PaperRecord& p) {
  auto strs = [&w](const std::vector<std::string>& v) {
    w.u64(v.size());
    for (const auto& s : v) w.str(s);
  };
  w.str(p.id);
  w.i32(p.year);
  w.str(p.venue);
  strs(p.authors);
  strs(p.author_names);
  strs(p.corresponding);
  strs(p.refs);
  strs(p.topics);
  w.u8(p.statement ? 1 : 0);
  if (p.statement) w.str(*p.statement);
}

PaperRecord read_paper(BinaryReader& r) {
  auto strs = [&r]() {
    std::vector<std::string> v(r.u64());
    for (auto& s : v) s = r.str();
    return v;
  };
  PaperRecord p;
  p.id = r.str();
  p.year = r.i32();
  p.venue = r.str();
  p.authors = strs();
  p.author_names = strs();
  p.corresponding = strs();
  p.refs = strs();
  p.topics = strs();
  if (r.u8() != 0) p.statement = r.str();
  return p;
}
}  // namespace

void save_snapshot(const std::filesystem::path& path, const Corpus& corpus, const CitationGraph& graph) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write snapshot " + path.string());
  BinaryWriter w(out);
  w.header(kSnapshotMagic, kSnapshotVersion);
  w.u64(corpus.size());
  for (const auto& p : corpus.papers()) write_paper(w, p);
  graph.save(w);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read snapshot " + path.string());
  BinaryReader r(in, path.string());
  r.expect_header(kSnapshotMagic, kSnapshotVersion);
  std::vector<PaperRecord> papers(r.u64());
  for (auto& p : papers) p = read_paper(r);
  Snapshot s{Corpus(std::move(papers)), CitationGraph::load(r), {}};
  if (s.graph.paper_count() != s.corpus.size()) throw FormatError(path.string() + ": graph/corpus size mismatch");
  s.authors = AuthorIndex::build(s.corpus, s.graph);
  return s;
}

}  // namespace teamscope
