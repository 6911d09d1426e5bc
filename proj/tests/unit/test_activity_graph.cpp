#include <doctest.h>

#include "support.hpp"
#include "teamscope/activity_graph.hpp"
#include "teamscope/statement_parser.hpp"

using namespace teamscope;

namespace {

WeightedGraph two_triangles() {
  WeightedGraph g(6);
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}) g.set_weight(a, b, 1.0);
  return g;
}

WeightedGraph random_graph(Rng& rng, std::size_t n, double density) {
  WeightedGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (bernoulli(rng, density)) g.set_weight(i, j, 1.0 + static_cast<double>(uniform_index(rng, 5)));
    }
  }
  return g;
}

ActivityProfile profile(ActivitySet s, std::string paper = "p") {
  ActivityProfile p;
  p.paper_id = std::move(paper);
  p.activities = s;
  return p;
}

}  // namespace

TEST_CASE("co-occurrence counts pairs") {
  const std::vector<ActivityProfile> one{profile({Activity::Design, Activity::Write})};
  const auto g = build_cooccurrence(one);
  CHECK(g.weight(index_of(Activity::Design), index_of(Activity::Write)) == 1.0);
  CHECK(g.total_weight() == 2.0);

  const std::vector<ActivityProfile> single{profile({Activity::Design})};
  CHECK(build_cooccurrence(single).total_weight() == 0.0);
}

TEST_CASE("co-occurrence equals a double-loop recount") {
  Rng rng(13);
  std::vector<ActivityProfile> profiles;
  for (int i = 0; i < 50; ++i) {
    profiles.push_back(profile(ActivitySet(static_cast<std::uint32_t>(rng())), "p" + std::to_string(i % 17)));
  }
  for (auto unit : {CooccurrenceUnit::AuthorPaper, CooccurrenceUnit::Paper}) {
    const auto g = build_cooccurrence(profiles, unit);
    CHECK(g.is_symmetric());
    std::vector<ActivitySet> units;
    if (unit == CooccurrenceUnit::AuthorPaper) {
      for (const auto& p : profiles) units.push_back(p.activities);
    } else {
      std::map<std::string, ActivitySet> pooled;
      for (const auto& p : profiles) pooled[p.paper_id] |= p.activities;
      for (const auto& [_, s] : pooled) units.push_back(s);
    }
    for (std::size_t a = 0; a < kActivityCount; ++a) {
      for (std::size_t b = 0; b < kActivityCount; ++b) {
        double expect = 0.0;
        if (a != b) {
          for (auto s : units) expect += (s.contains(activity_at(a)) && s.contains(activity_at(b))) ? 1.0 : 0.0;
        }
        CHECK(g.weight(a, b) == expect);
      }
    }
  }
}

TEST_CASE("modularity of two disconnected triangles is one half") {
  const auto g = two_triangles();
  const std::vector<std::uint32_t> split{0, 0, 0, 1, 1, 1};
  CHECK(*modularity(g, split) == doctest::Approx(0.5).epsilon(1e-15));
  const std::vector<std::uint32_t> one(6, 0);
  CHECK(*modularity(g, one) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("modularity matches the pairwise definition and is label invariant") {
  Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_graph(rng, 2 + uniform_index(rng, 9), 0.4);
    std::vector<std::uint32_t> labels(g.size());
    for (auto& l : labels) l = static_cast<std::uint32_t>(uniform_index(rng, 4));
    const auto q = modularity(g, labels);
    const auto brute = testsupport::brute_modularity(g, labels);
    REQUIRE(q.has_value() == brute.has_value());
    if (!q) continue;
    CHECK(std::abs(*q - *brute) < 1e-12);
    CHECK(*q <= 1.0);
    std::vector<std::uint32_t> relabeled(labels);
    for (auto& l : relabeled) l = 7 - l;
    CHECK(std::abs(*modularity(g, relabeled) - *q) < 1e-12);
    const std::vector<std::uint32_t> one(g.size(), 0);
    CHECK(std::abs(*modularity(g, one)) < 1e-12);
  }
}

TEST_CASE("clustering reaches the exhaustive optimum on small graphs") {
  Rng rng(31);
  std::size_t hits = 0, total = 0;
  for (int t = 0; t < 40; ++t) {
    const auto g = random_graph(rng, 3 + uniform_index(rng, 5), 0.45);
    if (g.total_weight() == 0.0) continue;
    ++total;
    const auto best = testsupport::exhaustive_best_modularity(g);
    const auto p = cluster_modularity(g, {.seed = static_cast<std::uint64_t>(t)});
    REQUIRE(p.q.has_value());
    CHECK(*p.q <= best + 1e-12);
    CHECK(std::abs(*testsupport::brute_modularity(g, p.labels) - *p.q) < 1e-12);
    if (std::abs(*p.q - best) <= 1e-12) ++hits;
  }
  CHECK(hits == total);
}

TEST_CASE("disconnected cliques become exactly their components") {
  WeightedGraph g(7);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) g.set_weight(i, j, 1.0);
  }
  for (std::size_t i = 4; i < 7; ++i) {
    for (std::size_t j = i + 1; j < 7; ++j) g.set_weight(i, j, 1.0);
  }
  const auto p = cluster_modularity(g);
  CHECK(p.labels == std::vector<std::uint32_t>{0, 0, 0, 0, 1, 1, 1});
}

TEST_CASE("planted three-block activity graph is recovered") {
  Rng rng(41);
  WeightedGraph g(kActivityCount);
  const auto ref = reference_labels();
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    for (std::size_t j = i + 1; j < kActivityCount; ++j) {
      g.set_weight(i, j, ref[i] == ref[j] ? 20.0 + static_cast<double>(uniform_index(rng, 10))
                                          : static_cast<double>(uniform_index(rng, 3)));
    }
  }
  const auto p = cluster_modularity(g, {.seed = 5});
  CHECK(p.cluster_count() == 3);
  CHECK(rand_agreement(p.labels, ref) == 1.0);
  const auto map = role_map_from_partition(p.labels);
  CHECK(map == reference_role_map());
}

TEST_CASE("degenerate graphs") {
  WeightedGraph single(1);
  const auto p = cluster_modularity(single);
  CHECK(p.labels == std::vector<std::uint32_t>{0});
  CHECK_FALSE(p.q.has_value());
  WeightedGraph empty(0);
  CHECK(cluster_modularity(empty).labels.empty());
}

TEST_CASE("clustering is deterministic under a seed") {
  Rng rng(3);
  const auto g = random_graph(rng, 25, 0.3);
  const auto a = cluster_modularity(g, {.seed = 9});
  const auto b = cluster_modularity(g, {.seed = 9});
  CHECK(a.labels == b.labels);
  CHECK(*a.q == *b.q);
}

TEST_CASE("canonical labels and rand agreement") {
  const std::vector<std::uint32_t> l{5, 5, 2, 9, 2};
  CHECK(canonical_labels(l) == std::vector<std::uint32_t>{0, 0, 1, 2, 1});
  CHECK(rand_agreement(l, canonical_labels(l)) == 1.0);
  const std::vector<std::uint32_t> a{0, 0, 1}, b{0, 1, 1};
  CHECK(rand_agreement(a, b) == doctest::Approx(1.0 / 3.0));
}
