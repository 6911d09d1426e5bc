#include "teamscope/activity_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "teamscope/rng.hpp"
#include "teamscope/statement_parser.hpp"

namespace teamscope {

void WeightedGraph::set_weight(std::size_t i, std::size_t j, double w) {
  w_[i * n_ + j] = w;
  w_[j * n_ + i] = w;
}

void WeightedGraph::add_weight(std::size_t i, std::size_t j, double w) {
  w_[i * n_ + j] += w;
  if (i != j) w_[j * n_ + i] += w;
}

double WeightedGraph::strength(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) s += w_[i * n_ + j];
  return s;
}

double WeightedGraph::total_weight() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

bool WeightedGraph::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (w_[i * n_ + j] != w_[j * n_ + i]) return false;
    }
  }
  return true;
}

WeightedGraph build_cooccurrence(std::span<const ActivityProfile> profiles, CooccurrenceUnit unit) {
  WeightedGraph g(kActivityCount);
  auto count_pairs = [&g](ActivitySet set) {
    const auto items = set.items();
    for (std::size_t a = 0; a < items.size(); ++a) {
      for (std::size_t b = a + 1; b < items.size(); ++b) g.add_weight(index_of(items[a]), index_of(items[b]), 1.0);
    }
  };
  if (unit == CooccurrenceUnit::AuthorPaper) {
    for (const auto& p : profiles) count_pairs(p.activities);
    return g;
  }
  std::map<std::string, ActivitySet> pooled;
  for (const auto& p : profiles) pooled[p.paper_id] |= p.activities;
  for (const auto& [_, set] : pooled) count_pairs(set);
  return g;
}

std::optional<double> modularity(const WeightedGraph& graph, std::span<const std::uint32_t> labels,
                                 double resolution) {
  const std::size_t n = graph.size();
  if (labels.size() != n) throw std::invalid_argument("modularity: label count does not match node count");
  const double two_m = graph.total_weight();
  if (!(two_m > 0.0)) return std::nullopt;

  // Sum per community: internal weight and total strength.
  std::map<std::uint32_t, std::pair<double, double>> comm;
  for (std::size_t i = 0; i < n; ++i) {
    auto& [inner, tot] = comm[labels[i]];
    tot += graph.strength(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] == labels[i]) inner += graph.weight(i, j);
    }
  }
  double q = 0.0;
  for (const auto& [_, v] : comm) q += v.first / two_m - resolution * (v.second / two_m) * (v.second / two_m);
  return q;
}

std::size_t Partition::cluster_count() const {
  if (labels.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
}

std::vector<std::uint32_t> canonical_labels(std::span<const std::uint32_t> labels) {
  std::map<std::uint32_t, std::uint32_t> remap;
  std::vector<std::uint32_t> out;
  out.reserve(labels.size());
  for (auto l : labels) {
    auto [it, _] = remap.try_emplace(l, static_cast<std::uint32_t>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

namespace {

// Relative tolerance on modularity gains; moves must beat it to count.
constexpr double kGainEps = 1e-13;

// One Louvain level: local moving of nodes between communities.
// Returns true if any node moved.
bool local_moving(const WeightedGraph& g, double resolution, std::span<const std::size_t> order,
                  std::vector<std::uint32_t>& comm) {
  const std::size_t n = g.size();
  const double two_m = g.total_weight();
  std::vector<double> k(n), tot(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = g.strength(i);
    tot[comm[i]] += k[i];
    ++members[comm[i]];
  }
  std::vector<double> link(n, 0.0);
  bool moved_any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i : order) {
      const std::uint32_t own = comm[i];
      std::fill(link.begin(), link.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) link[comm[j]] += g.weight(i, j);
      }
      tot[own] -= k[i];
      --members[own];
      auto gain = [&](std::uint32_t c) { return link[c] - resolution * k[i] * tot[c] / two_m; };
      const double scale = std::max(1.0, k[i]);
      double best_gain = gain(own);
      std::uint32_t best = own;
      // Candidate communities in ascending index; only neighbours or the own one can gain.
      for (std::uint32_t c = 0; c < n; ++c) {
        if (c == own || link[c] <= 0.0) continue;
        const double gc = gain(c);
        if (gc > best_gain + kGainEps * scale) {
          best_gain = gc;
          best = c;
        }
      }
      // A node with no positive pull anywhere is better off alone.
      if (best_gain < -kGainEps * scale && members[own] > 0) {
        for (std::uint32_t c = 0; c < n; ++c) {
          if (members[c] == 0) {
            best = c;
            break;
          }
        }
      }
      tot[best] += k[i];
      ++members[best];
      if (best != own) {
        comm[i] = best;
        moved = true;
        moved_any = true;
      }
    }
  }
  return moved_any;
}

WeightedGraph aggregate(const WeightedGraph& g, std::span<const std::uint32_t> comm, std::size_t communities) {
  WeightedGraph out(communities);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i; j < g.size(); ++j) {
      const double w = g.weight(i, j);
      if (w == 0.0) continue;
      const std::size_t a = comm[i], b = comm[j];
      // A_ij and A_ji both land on the diagonal when i != j share a community.
      out.add_weight(a, b, (a == b && i != j) ? 2.0 * w : w);
    }
  }
  return out;
}

std::vector<std::uint32_t> louvain(const WeightedGraph& graph, double resolution, std::uint64_t seed) {
  const std::size_t n = graph.size();
  std::vector<std::uint32_t> membership(n);
  std::iota(membership.begin(), membership.end(), 0u);

  WeightedGraph level = graph;
  Rng rng(seed);
  while (true) {
    std::vector<std::size_t> order(level.size());
    std::iota(order.begin(), order.end(), 0u);
    shuffle(std::span(order), rng);
    std::vector<std::uint32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0u);
    if (!local_moving(level, resolution, order, comm)) break;
    comm = canonical_labels(comm);
    const std::size_t communities = *std::max_element(comm.begin(), comm.end()) + 1;
    for (auto& m : membership) m = comm[m];
    if (communities == level.size()) break;
    level = aggregate(level, comm, communities);
  }
  return canonical_labels(membership);
}

// Merges community pairs while some merge raises Q.
bool merge_pass(const WeightedGraph& g, double resolution, std::vector<std::uint32_t>& comm) {
  const double two_m = g.total_weight();
  bool merged_any = false;
  while (true) {
    comm = canonical_labels(comm);
    const std::size_t c = *std::max_element(comm.begin(), comm.end()) + 1;
    std::vector<double> tot(c, 0.0), e(c * c, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      tot[comm[i]] += g.strength(i);
      for (std::size_t j = 0; j < g.size(); ++j) e[comm[i] * c + comm[j]] += g.weight(i, j);
    }
    double best = kGainEps * std::max(1.0, two_m);
    std::size_t ba = 0, bb = 0;
    bool found = false;
    for (std::size_t a = 0; a < c; ++a) {
      for (std::size_t b = a + 1; b < c; ++b) {
        const double gain = 2.0 * e[a * c + b] - 2.0 * resolution * tot[a] * tot[b] / two_m;
        if (gain > best) {
          best = gain;
          ba = a;
          bb = b;
          found = true;
        }
      }
    }
    if (!found) return merged_any;
    for (auto& l : comm) {
      if (l == bb) l = static_cast<std::uint32_t>(ba);
    }
    merged_any = true;
  }
}

}  // namespace

Partition cluster_modularity(const WeightedGraph& graph, const ClusterOptions& options) {
  const std::size_t n = graph.size();
  Partition best;
  best.labels.resize(n);
  std::iota(best.labels.begin(), best.labels.end(), 0u);
  best.q = modularity(graph, best.labels, options.resolution);
  if (n == 0 || !best.q) return best;

  const std::size_t runs = std::max<std::size_t>(1, options.restarts);
  for (std::size_t r = 0; r < runs; ++r) {
    auto labels = louvain(graph, options.resolution, substream_seed(options.seed, r));

    // Polish on the original graph: node moves and merges until neither helps.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (int round = 0; round < 32; ++round) {
      const bool moved = local_moving(graph, options.resolution, order, labels);
      const bool merged = merge_pass(graph, options.resolution, labels);
      if (!moved && !merged) break;
    }
    labels = canonical_labels(labels);
    const auto q = modularity(graph, labels, options.resolution);
    if (*q > *best.q + kGainEps) {
      best.labels = std::move(labels);
      best.q = q;
    }
  }
  return best;
}

std::vector<std::uint32_t> reference_labels() {
  std::vector<std::uint32_t> out(kActivityCount);
  for (std::size_t i = 0; i < kActivityCount; ++i) out[i] = static_cast<std::uint32_t>(reference_cluster(activity_at(i)));
  return out;
}

double rand_agreement(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rand_agreement: partitions differ in size");
  if (a.size() < 2) return 1.0;
  std::size_t agree = 0, pairs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      ++pairs;
      if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

RoleMap reference_role_map() {
  RoleMap m{};
  for (std::size_t i = 0; i < kActivityCount; ++i) m[i] = reference_cluster(activity_at(i));
  return m;
}

RoleMap role_map_from_partition(std::span<const std::uint32_t> labels) {
  if (labels.size() != kActivityCount) throw std::invalid_argument("partition must label all 25 activities");
  std::map<std::uint32_t, std::array<std::size_t, 3>> votes;
  for (std::size_t i = 0; i < kActivityCount; ++i) ++votes[labels[i]][static_cast<std::size_t>(reference_cluster(activity_at(i)))];
  RoleMap m{};
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    const auto& v = votes[labels[i]];
    const auto winner = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    m[i] = static_cast<Cluster>(winner);
  }
  return m;
}

}  // namespace teamscope
