#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace teamscope {

class BinaryWriter;
class BinaryReader;

struct PaperRecord {
  std::string id;
  int year = 0;
  std::string venue;
  std::vector<std::string> authors;       // byline order
  std::vector<std::string> author_names;  // parallel to `authors`; the id when no name was given
  std::vector<std::string> corresponding;
  std::vector<std::string> refs;
  std::vector<std::string> topics;
  std::optional<std::string> statement;

  std::size_t team_size() const { return authors.size(); }
  bool is_corresponding(std::string_view author) const;
  // Byline position, or nullopt if the author is not on this paper.
  std::optional<std::size_t> position_of(std::string_view author) const;
};

struct IngestOptions {
  int min_year = 1900;
  int max_year = 2100;
  std::size_t max_logged_warnings = 50;
};

struct IngestReport {
  std::size_t records = 0;  // non-blank lines seen
  std::size_t skipped = 0;  // malformed records
  std::size_t duplicates = 0;
  std::size_t self_refs_dropped = 0;
  std::size_t duplicate_refs_dropped = 0;
  std::vector<std::string> warnings;  // first `max_logged_warnings` only
};

// Parses one NDJSON line. Throws FormatError on any schema violation.
// Self-references and repeated references are dropped and counted in `report`.
PaperRecord parse_paper_line(std::string_view line, const IngestOptions& options, IngestReport* report = nullptr);

// Inverse of parse_paper_line; emits the canonical field order.
std::string to_json_line(const PaperRecord& paper);

// Papers keyed and ordered by id. Immutable after ingestion.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<PaperRecord> papers);

  const std::vector<PaperRecord>& papers() const { return papers_; }
  const PaperRecord& paper(std::size_t i) const { return papers_[i]; }
  std::size_t size() const { return papers_.size(); }
  bool empty() const { return papers_.empty(); }
  std::optional<std::size_t> find(std::string_view id) const;

  // Last calendar year present, or nullopt for an empty corpus.
  std::optional<int> horizon() const;

 private:
  std::vector<PaperRecord> papers_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Reads records, deduplicating by id (last record wins). Malformed records are
// counted and skipped. Throws IoError only if the stream itself is bad.
Corpus ingest_papers(std::istream& in, const IngestOptions& options, IngestReport& report);
Corpus ingest_files(std::span<const std::filesystem::path> paths, const IngestOptions& options, IngestReport& report);

// Directed paper -> reference adjacency in CSR form plus its transpose.
// Nodes [0, corpus.size()) are corpus papers in corpus order; references to
// papers outside the corpus become dangling sink nodes with unknown year.
class CitationGraph {
 public:
  using Node = std::uint32_t;

  static CitationGraph build(const Corpus& corpus);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t paper_count() const { return paper_count_; }
  std::size_t edge_count() const { return out_targets_.size(); }
  bool is_dangling(Node v) const { return v >= paper_count_; }

  std::span<const Node> references(Node v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  // Citing nodes in ascending node order.
  std::span<const Node> citers(Node v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::optional<int> year(Node v) const;
  const std::string& id(Node v) const { return ids_[v]; }
  std::optional<Node> find(std::string_view id) const;

  // Edges whose citing paper is dated before the cited paper.
  std::size_t timestamp_anomalies() const { return anomalies_; }

  void save(BinaryWriter& w) const;
  static CitationGraph load(BinaryReader& r);

 private:
  static constexpr std::int32_t kUnknownYear = INT32_MIN;
  void index_ids();

  std::size_t paper_count_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::int32_t> years_;
  std::vector<std::uint32_t> out_offsets_{0};
  std::vector<Node> out_targets_;
  std::vector<std::uint32_t> in_offsets_{0};
  std::vector<Node> in_sources_;
  std::size_t anomalies_ = 0;
  std::unordered_map<std::string, Node> by_id_;
};

// Per-author career history. Every "prior" quantity for year y covers only
// papers dated strictly before y; the focal year is excluded entirely.
class AuthorIndex {
 public:
  static AuthorIndex build(const Corpus& corpus, const CitationGraph& graph);

  bool contains(std::string_view author) const;
  std::size_t author_count() const { return histories_.size(); }

  std::optional<int> first_year(std::string_view author) const;
  // y - first_year, floored at 0.
  int career_age(std::string_view author, int year) const;
  // Papers dated exactly `year` (productivity).
  std::size_t papers_in_year(std::string_view author, int year) const;
  std::size_t prior_papers(std::string_view author, int year) const;
  // Citation edges from papers dated < year into the author's papers dated < year.
  std::size_t prior_citations(std::string_view author, int year) const;
  std::size_t prior_topic_count(std::string_view author, int year) const;
  bool knew_topic(std::string_view author, std::string_view topic, int year) const;
  // True if the author cited or authored `paper_id` in a year < `year`.
  bool knew_reference(std::string_view author, std::string_view paper_id, int year) const;

  std::vector<std::string> prior_topics(std::string_view author, int year) const;
  std::vector<std::string> prior_references(std::string_view author, int year) const;

 private:
  struct History {
    std::vector<int> paper_years;       // sorted
    std::vector<int> citation_years;    // sorted; max(cited year, citing year) per edge
    std::vector<int> topic_first_sorted;
    std::unordered_map<std::string, int> topic_first;
    std::unordered_map<std::string, int> ref_first;
  };
  const History* lookup(std::string_view author) const;

  std::unordered_map<std::string, History> histories_;
};

struct CorpusStats {
  std::size_t papers = 0;
  // nullopt for an empty corpus.
  std::optional<double> mean_team_size;
  std::optional<double> mean_topics;
  std::optional<double> mean_references;
  std::optional<double> mean_citations;  // in-corpus citations received
};

CorpusStats summarize(const Corpus& corpus, const CitationGraph& graph);

// Corpus + citation graph; the author index is rebuilt on load.
struct Snapshot {
  Corpus corpus;
  CitationGraph graph;
  AuthorIndex authors;

  static Snapshot from_corpus(Corpus corpus);
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void save_snapshot(const std::filesystem::path& path, const Corpus& corpus, const CitationGraph& graph);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace teamscope
