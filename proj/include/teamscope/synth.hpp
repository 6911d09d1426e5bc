#pragma once

// Synthetic corpora with known ground truth: planted roles rendered into
// contribution statements, topic clusters, and planted citation patterns.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "teamscope/activity.hpp"
#include "teamscope/corpus.hpp"
#include "teamscope/rng.hpp"
#include "teamscope/roles.hpp"
#include "teamscope/statement_parser.hpp"

namespace teamscope {

struct SynthConfig {
  std::size_t papers = 200;
  std::size_t authors = 120;  // at most 676, so every author has distinct initials
  int first_year = 1990;
  int last_year = 2015;
  std::size_t min_team = 2;
  std::size_t max_team = 8;
  double statement_fraction = 0.7;
  double colon_fraction = 0.5;
  std::size_t topic_clusters = 4;
  std::size_t keywords_per_cluster = 12;
  std::size_t min_keywords = 3;
  std::size_t max_keywords = 6;
  std::size_t min_refs = 3;
  std::size_t max_refs = 10;
  std::uint64_t seed = 42;
};

enum class StatementGenre { Plain, Colon };

// How later papers treat this paper's references when citing it.
enum class CitationPattern { Neutral, Disruptive, Developmental };

std::string_view pattern_name(CitationPattern p);

struct PlantedAuthor {
  std::string author_id;
  Role role = Role::Unknown;
  ActivitySet activities;
};

struct PlantedPaper {
  std::string paper_id;
  std::vector<PlantedAuthor> authors;  // byline order
  std::size_t n_lead = 0;
  double lratio = 0.0;
  bool has_statement = false;
  StatementGenre genre = StatementGenre::Plain;
  CitationPattern pattern = CitationPattern::Neutral;
};

struct SyntheticCorpus {
  std::vector<PaperRecord> papers;  // ordered by id, which is chronological
  std::vector<PlantedPaper> truth;  // parallel to `papers`

  std::string papers_ndjson() const;
  std::string truth_json(std::uint64_t seed) const;
};

// Deterministic under config.seed.
SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config);

// Writes papers.ndjson and truth.json into `dir`.
void write_synthetic_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus, std::uint64_t seed);

// A non-empty activity set whose role under the reference clusters is `role`.
ActivitySet plant_activities(Role role, Rng& rng);

// Renders a statement attributing activities[i] to byline[i]. Authors with an
// empty set are not mentioned. Names must give distinct initials.
std::string render_statement(std::span<const BylineEntry> byline, std::span<const ActivitySet> activities,
                             StatementGenre genre, Rng& rng);

}  // namespace teamscope
