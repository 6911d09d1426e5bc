#include "teamscope/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "teamscope/embeddings.hpp"
#include "teamscope/parallel.hpp"
#include "teamscope/stats.hpp"

namespace teamscope {

NoveltyResult paper_novelty(const PaperRecord& paper, const EmbeddingModel& model, double quantile) {
  NoveltyResult r;
  r.paper_id = paper.id;
  r.year = paper.year;
  std::vector<std::string> kws;
  for (const auto& t : paper.topics) {
    if (model.contains(t) && std::find(kws.begin(), kws.end(), t) == kws.end()) kws.push_back(t);
  }
  r.embedded_keywords = kws.size();
  for (std::size_t a = 0; a < kws.size(); ++a) {
    for (std::size_t b = a + 1; b < kws.size(); ++b) r.pairwise.push_back(*novelty(model, kws[a], kws[b]));
  }
  if (!r.pairwise.empty()) r.score = quantile_sorted_copy(r.pairwise, quantile);
  return r;
}

void flag_top_decile(std::span<NoveltyResult> results) {
  std::map<int, std::vector<std::size_t>> cohorts;
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].top_decile = false;
    if (results[i].score) cohorts[results[i].year].push_back(i);
  }
  for (auto& [_, idx] : cohorts) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (*results[a].score != *results[b].score) return *results[a].score > *results[b].score;
      return results[a].paper_id < results[b].paper_id;
    });
    const std::size_t top = idx.size() / 10;
    for (std::size_t k = 0; k < top; ++k) results[idx[k]].top_decile = true;
  }
}

std::vector<NoveltyResult> compute_novelty(const Corpus& corpus, const EmbeddingModel& model, double quantile,
                                           std::size_t threads) {
  std::vector<NoveltyResult> out(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) { out[i] = paper_novelty(corpus.paper(i), model, quantile); });
  flag_top_decile(out);
  return out;
}

DisruptionResult disruption(const CitationGraph& graph, CitationGraph::Node focal, const DisruptionOptions& options) {
  DisruptionResult r;
  r.paper_id = graph.id(focal);
  const auto fy = graph.year(focal);
  if (!fy) return r;
  auto eligible = [&](CitationGraph::Node c) {
    if (c == focal) return false;
    const auto y = graph.year(c);
    return y && (options.strictly_after ? *y > *fy : *y >= *fy);
  };
  std::vector<CitationGraph::Node> f, refs;
  for (auto c : graph.citers(focal)) {
    if (eligible(c)) f.push_back(c);
  }
  for (auto ref : graph.references(focal)) {
    for (auto c : graph.citers(ref)) {
      if (eligible(c)) refs.push_back(c);
    }
  }
  std::sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
  // Both lists are sorted: citers() spans are ascending.
  std::size_t both = 0;
  for (std::size_t a = 0, b = 0; a < f.size() && b < refs.size();) {
    if (f[a] == refs[b]) {
      ++both;
      ++a;
      ++b;
    } else if (f[a] < refs[b]) {
      ++a;
    } else {
      ++b;
    }
  }
  r.n_i = f.size() - both;
  r.n_j = both;
  r.n_k = refs.size() - both;
  const std::size_t denom = r.n_i + r.n_j + r.n_k;
  if (denom > 0) {
    r.d = (static_cast<double>(r.n_i) - static_cast<double>(r.n_j)) / static_cast<double>(denom);
    r.development = -*r.d;
  }
  return r;
}

std::vector<std::optional<double>> cohort_percentiles(std::span<const std::optional<double>> values,
                                                      std::span<const int> cohorts) {
  if (values.size() != cohorts.size()) throw std::invalid_argument("values and cohorts differ in length");
  std::map<int, std::vector<double>> sorted;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) sorted[cohorts[i]].push_back(*values[i]);
  }
  for (auto& [_, v] : sorted) std::sort(v.begin(), v.end());
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) continue;
    const auto& v = sorted[cohorts[i]];
    const auto lo = std::lower_bound(v.begin(), v.end(), *values[i]);
    const auto hi = std::upper_bound(v.begin(), v.end(), *values[i]);
    const double below = static_cast<double>(lo - v.begin());
    const double equal = static_cast<double>(hi - lo);
    out[i] = 100.0 * (below + 0.5 * equal) / static_cast<double>(v.size());
  }
  return out;
}

std::vector<DisruptionResult> compute_disruption(const Corpus& corpus, const CitationGraph& graph,
                                                 const DisruptionOptions& options, std::size_t threads) {
  std::vector<DisruptionResult> out(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    out[i] = disruption(graph, static_cast<CitationGraph::Node>(i), options);
  });
  std::vector<std::optional<double>> dev(out.size());
  std::vector<int> years(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    dev[i] = out[i].development;
    years[i] = corpus.paper(i).year;
  }
  const auto pct = cohort_percentiles(dev, years);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].development_percentile = pct[i];
  return out;
}

std::size_t productivity(const AuthorIndex& index, std::string_view author, int year) {
  return index.papers_in_year(author, year);
}

ProductivitySplit team_productivity_split(const PaperRecord& paper, std::span<const Role> roles,
                                          const AuthorIndex& index) {
  if (roles.size() != paper.team_size()) throw std::invalid_argument("roles must be parallel to the byline");
  double lead = 0.0, support = 0.0;
  std::size_t n_lead = 0, n_support = 0;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const auto p = static_cast<double>(productivity(index, paper.authors[i], paper.year));
    if (roles[i] == Role::Lead) {
      lead += p;
      ++n_lead;
    } else if (is_support(roles[i])) {
      support += p;
      ++n_support;
    }
  }
  ProductivitySplit s;
  if (n_lead) s.lead = lead / static_cast<double>(n_lead);
  if (n_support) s.support = support / static_cast<double>(n_support);
  return s;
}

std::optional<CitationWindows> citation_windows(const CitationGraph& graph, CitationGraph::Node node,
                                                std::optional<int> horizon, const WindowOptions& options) {
  const auto y = graph.year(node);
  if (!y) return std::nullopt;
  CitationWindows w;
  const int short_lo = options.include_publication_year ? *y : *y + 1;
  const int short_hi = *y + options.short_years;
  const int long_lo = *y + options.long_after;
  for (auto c : graph.citers(node)) {
    const auto cy = graph.year(c);
    if (!cy) continue;
    if (*cy >= short_lo && *cy <= short_hi) ++w.c_short;
    if (*cy > long_lo) ++w.c_long;
  }
  w.long_observable = horizon && *horizon > long_lo;
  return w;
}

}  // namespace teamscope
