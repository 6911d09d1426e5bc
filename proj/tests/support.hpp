#pragma once

// Fixtures and brute-force oracles shared by the unit and acceptance tests.
// Oracles work from raw records and plain loops, never from the library's
// indexed structures.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teamscope/activity_graph.hpp"
#include "teamscope/corpus.hpp"
#include "teamscope/rng.hpp"

namespace testsupport {

using teamscope::PaperRecord;

inline PaperRecord paper(std::string id, int year, std::vector<std::string> authors,
                         std::vector<std::string> refs = {}, std::vector<std::string> topics = {},
                         std::optional<std::string> statement = std::nullopt,
                         std::vector<std::string> corresponding = {}) {
  PaperRecord p;
  p.id = std::move(id);
  p.year = year;
  p.author_names = authors;
  p.authors = std::move(authors);
  p.refs = std::move(refs);
  p.topics = std::move(topics);
  p.statement = std::move(statement);
  p.corresponding = std::move(corresponding);
  return p;
}

inline std::string pid(std::size_t i) {
  return fmt::format("p{:03d}", i);
}

// Random citation corpus: n papers over a few years, each citing a random
// subset of any other papers (time order not enforced) plus occasional
// references to papers outside the corpus.
inline std::vector<PaperRecord> random_citation_records(teamscope::Rng& rng, std::size_t n, double density) {
  std::vector<PaperRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int year = 2000 + static_cast<int>(teamscope::uniform_index(rng, 8));
    std::vector<std::string> refs;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && teamscope::bernoulli(rng, density)) refs.push_back(pid(j));
    }
    if (teamscope::bernoulli(rng, 0.3)) refs.push_back("x" + std::to_string(teamscope::uniform_index(rng, 5)));
    out.push_back(paper(pid(i), year, {"a" + std::to_string(teamscope::uniform_index(rng, 6))}, refs));
  }
  return out;
}

struct BruteDisruption {
  std::size_t n_i = 0, n_j = 0, n_k = 0;
  std::optional<double> d;
};

// Enumerates every record as a potential citer and buckets it directly.
inline BruteDisruption brute_disruption(const std::vector<PaperRecord>& records, const std::string& focal_id,
                                        bool strictly_after = true) {
  const PaperRecord* focal = nullptr;
  for (const auto& p : records) {
    if (p.id == focal_id) focal = &p;
  }
  BruteDisruption out;
  if (!focal) return out;
  const std::set<std::string> focal_refs(focal->refs.begin(), focal->refs.end());
  for (const auto& c : records) {
    if (c.id == focal_id) continue;
    if (strictly_after ? c.year <= focal->year : c.year < focal->year) continue;
    bool cites_focal = false, cites_ref = false;
    for (const auto& r : c.refs) {
      if (r == focal_id) cites_focal = true;
      if (focal_refs.count(r)) cites_ref = true;
    }
    if (cites_focal && cites_ref) {
      ++out.n_j;
    } else if (cites_focal) {
      ++out.n_i;
    } else if (cites_ref) {
      ++out.n_k;
    }
  }
  const std::size_t total = out.n_i + out.n_j + out.n_k;
  if (total) out.d = (double(out.n_i) - double(out.n_j)) / double(total);
  return out;
}

// Q evaluated pair by pair from its definition.
inline std::optional<double> brute_modularity(const teamscope::WeightedGraph& g, const std::vector<std::uint32_t>& c,
                                              double gamma = 1.0) {
  const std::size_t n = g.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += g.weight(i, j);
      two_m += g.weight(i, j);
    }
  }
  if (two_m <= 0.0) return std::nullopt;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (c[i] == c[j]) q += g.weight(i, j) - gamma * k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

// Calls visit(labels) for every set partition of n nodes (restricted growth strings).
template <typename Visit>
void for_each_partition(std::size_t n, Visit&& visit) {
  std::vector<std::uint32_t> a(n, 0), maxv(n, 0);
  if (n == 0) return;
  while (true) {
    visit(a);
    std::size_t i = n - 1;
    while (i > 0 && a[i] == maxv[i - 1] + 1) --i;
    if (i == 0) return;
    ++a[i];
    maxv[i] = std::max(maxv[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      maxv[j] = maxv[i];
    }
  }
}

inline double exhaustive_best_modularity(const teamscope::WeightedGraph& g) {
  double best = -1e300;
  for_each_partition(g.size(), [&](const std::vector<std::uint32_t>& labels) {
    best = std::max(best, *brute_modularity(g, labels));
  });
  return best;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("teamscope_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
