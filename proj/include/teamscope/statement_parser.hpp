#pragma once

// Rule-based extraction of (author, activity) pairs from contribution
// statements. Two statement genres are recognised:
//
//   "M.R. and K.S. designed research; M.R. performed research."
//   "Conceived and designed the experiments: MR KS. Wrote the paper: KS."
//
// In the first, the leading run of author mentions in each clause is the
// subject and the verb after it (plus any verbs coordinated with "and" or ",")
// are the predicates. In the second, the verbs before the colon are the
// predicates and the mentions after it are the subject.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamscope/activity.hpp"

namespace teamscope {

class Corpus;
struct PaperRecord;

struct BylineEntry {
  std::string id;
  std::string name;  // "Given Family"; hyphenated parts contribute one initial each
};

// "Maria Rossi" -> "MR", "Jean-Paul Sartre" -> "JPS".
std::string initials_of(std::string_view full_name);

// Letters of an initials-style token, uppercased: "M.-R." -> "MR".
std::string normalize_initials(std::string_view token);

// True for tokens that look like author initials: dotted forms such as
// "M.R." or "Ch.W.", or 2-4 capital letters such as "MR".
bool looks_like_initials(std::string_view token);

struct MentionMap {
  // Surface token (trailing ',;:' removed) or lowercased collective phrase ->
  // matching author ids in byline order.
  std::map<std::string, std::vector<std::string>> mentions;
  // Dotted initials with no byline match.
  std::vector<std::string> unmatched;
  // Tokens matching more than one author.
  std::vector<std::string> ambiguous;
  // Byline author ids in order.
  std::vector<std::string> order;

  const std::vector<std::string>* find(const std::string& token) const;
};

MentionMap resolve_author_mentions(std::string_view statement, std::span<const BylineEntry> byline,
                                   std::span<const std::string> collective_phrases);

struct ParsedClause {
  std::vector<std::string> authors;  // byline order, unique
  std::string verb;                  // surface form as written
};

struct StatementParse {
  std::vector<ParsedClause> clauses;
  std::size_t unattributed = 0;  // clauses or predicates with no recognisable subject
};

// Deterministic; never throws on odd input.
StatementParse parse_statement(std::string_view statement, const MentionMap& mentions);

struct ActivityProfile {
  std::string paper_id;
  std::string author_id;
  std::size_t position = 0;  // byline index
  std::size_t team_size = 0;
  bool corresponding = false;
  ActivitySet activities;
  std::vector<std::string> unmatched_verbs;
};

struct PaperCoverage {
  std::string paper_id;
  std::size_t verb_tokens = 0;
  std::size_t matched_tokens = 0;
  std::optional<double> match_fraction() const;
};

struct CoverageReport {
  std::size_t papers_parsed = 0;
  std::size_t verb_tokens = 0;
  std::size_t matched_tokens = 0;
  std::size_t unattributed = 0;
  std::size_t unmatched_mentions = 0;
  std::size_t ambiguous_mentions = 0;
  std::size_t unique_activity_total = 0;  // sum over papers of distinct activities
  std::vector<PaperCoverage> papers;

  std::optional<double> coverage() const;
  std::optional<double> mean_unique_activities() const;
};

struct ProfileExtraction {
  std::vector<ActivityProfile> profiles;  // paper order, then byline order
  CoverageReport report;
};

// Profiles for one paper: exactly one per byline author.
ProfileExtraction extract_paper_profiles(const PaperRecord& paper, const ActivityLexicon& lexicon);

// One profile per (paper, byline author) for every paper with a statement.
ProfileExtraction extract_profiles(const Corpus& corpus, const ActivityLexicon& lexicon, std::size_t threads = 1);

}  // namespace teamscope
