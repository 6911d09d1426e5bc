#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "teamscope/activity.hpp"

namespace teamscope {

struct ActivityProfile;

// Dense symmetric weight matrix; node counts here are tiny (25 activities).
// Node strength k_i = sum_j A_ij and total weight 2m = sum_ij A_ij, so a
// self-loop entry is counted once in its node's strength.
class WeightedGraph {
 public:
  explicit WeightedGraph(std::size_t n = 0) : n_(n), w_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double weight(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  void set_weight(std::size_t i, std::size_t j, double w);
  void add_weight(std::size_t i, std::size_t j, double w);
  double strength(std::size_t i) const;
  double total_weight() const;  // 2m
  bool is_symmetric() const;

 private:
  std::size_t n_;
  std::vector<double> w_;
};

enum class CooccurrenceUnit {
  AuthorPaper,  // each (paper, author) profile contributes its own activity pairs
  Paper,        // activities pooled over all authors of a paper
};

// weight(a, b) = number of units whose activity set holds both a and b, a != b.
WeightedGraph build_cooccurrence(std::span<const ActivityProfile> profiles,
                                 CooccurrenceUnit unit = CooccurrenceUnit::AuthorPaper);

// Q = (1/2m) sum_ij [A_ij - resolution * k_i k_j / 2m] delta(c_i, c_j).
// nullopt when the graph carries no weight.
std::optional<double> modularity(const WeightedGraph& graph, std::span<const std::uint32_t> labels,
                                 double resolution = 1.0);

struct Partition {
  std::vector<std::uint32_t> labels;  // canonical: numbered by first appearance
  std::optional<double> q;
  std::size_t cluster_count() const;
};

struct ClusterOptions {
  std::uint64_t seed = 0;
  double resolution = 1.0;
  std::size_t restarts = 8;  // independent Louvain runs with seed-derived node orders
};

// Louvain local moving + aggregation, best of `restarts` runs, then a
// polishing pass of single-node moves and pairwise community merges on the
// original graph. Ties go to the lowest-index community. Deterministic for a
// given seed.
Partition cluster_modularity(const WeightedGraph& graph, const ClusterOptions& options = {});

// Renumbers labels by order of first appearance.
std::vector<std::uint32_t> canonical_labels(std::span<const std::uint32_t> labels);

// Lead = 0, DirectSupport = 1, IndirectSupport = 2, indexed by activity.
std::vector<std::uint32_t> reference_labels();

// Fraction of node pairs on which two partitions agree (Rand index).
double rand_agreement(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

// Activity -> role cluster used for role assignment.
using RoleMap = std::array<Cluster, kActivityCount>;

RoleMap reference_role_map();

// Names each detected cluster after the reference cluster holding most of its
// members (ties: Lead, then DirectSupport, then IndirectSupport).
RoleMap role_map_from_partition(std::span<const std::uint32_t> labels);

}  // namespace teamscope
