#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamscope/corpus.hpp"
#include "teamscope/roles.hpp"

namespace teamscope {

class EmbeddingModel;

struct NoveltyResult {
  std::string paper_id;
  int year = 0;
  std::size_t embedded_keywords = 0;
  std::vector<double> pairwise;  // novelty of each distinct embedded keyword pair
  std::optional<double> score;   // quantile of `pairwise`; needs >= 2 embedded keywords
  bool top_decile = false;
};

NoveltyResult paper_novelty(const PaperRecord& paper, const EmbeddingModel& model, double quantile = 0.9);

// Within each year cohort of defined scores, flags the N/10 (integer division)
// highest-scoring papers. Ties are ranked by paper id.
void flag_top_decile(std::span<NoveltyResult> results);

std::vector<NoveltyResult> compute_novelty(const Corpus& corpus, const EmbeddingModel& model, double quantile,
                                           std::size_t threads = 1);

struct DisruptionOptions {
  // Citers must be dated after the focal year; when false, same-year citers count too.
  bool strictly_after = true;
};

struct DisruptionResult {
  std::string paper_id;
  std::size_t n_i = 0;  // cite the focal paper only
  std::size_t n_j = 0;  // cite the focal paper and at least one of its references
  std::size_t n_k = 0;  // cite a reference but not the focal paper
  std::optional<double> d;
  std::optional<double> development;             // -d
  std::optional<double> development_percentile;  // within the year cohort
};

DisruptionResult disruption(const CitationGraph& graph, CitationGraph::Node focal,
                            const DisruptionOptions& options = {});

// 100 * (below + equal / 2) / N over defined values of the same cohort;
// `equal` includes the value itself.
std::vector<std::optional<double>> cohort_percentiles(std::span<const std::optional<double>> values,
                                                      std::span<const int> cohorts);

// All corpus papers in corpus order, with development percentiles filled in.
std::vector<DisruptionResult> compute_disruption(const Corpus& corpus, const CitationGraph& graph,
                                                 const DisruptionOptions& options = {}, std::size_t threads = 1);

// Papers by `author` dated exactly `year`.
std::size_t productivity(const AuthorIndex& index, std::string_view author, int year);

struct ProductivitySplit {
  std::optional<double> lead;
  std::optional<double> support;  // Direct and Indirect support authors
};

// `roles` is parallel to the byline.
ProductivitySplit team_productivity_split(const PaperRecord& paper, std::span<const Role> roles,
                                          const AuthorIndex& index);

struct WindowOptions {
  int short_years = 10;
  int long_after = 20;
  bool include_publication_year = true;
};

struct CitationWindows {
  std::size_t c_short = 0;  // citers dated in [y, y + short_years]
  std::size_t c_long = 0;   // citers dated after y + long_after
  bool long_observable = true;
};

// nullopt for a node with unknown year. `horizon` is the corpus's last year.
std::optional<CitationWindows> citation_windows(const CitationGraph& graph, CitationGraph::Node node,
                                                std::optional<int> horizon, const WindowOptions& options = {});

}  // namespace teamscope
