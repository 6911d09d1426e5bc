#include <doctest.h>

#include "support.hpp"
#include "teamscope/activity_graph.hpp"
#include "teamscope/roles.hpp"
#include "teamscope/statement_parser.hpp"
#include "teamscope/synth.hpp"

using namespace teamscope;

TEST_CASE("same seed gives identical corpus bytes") {
  SynthConfig cfg;
  cfg.papers = 60;
  const auto a = generate_synthetic_corpus(cfg);
  const auto b = generate_synthetic_corpus(cfg);
  CHECK(a.papers_ndjson() == b.papers_ndjson());
  CHECK(a.truth_json(cfg.seed) == b.truth_json(cfg.seed));
  cfg.seed = 43;
  CHECK(generate_synthetic_corpus(cfg).papers_ndjson() != a.papers_ndjson());
}

TEST_CASE("planted activities map to the planted role") {
  Rng rng(3);
  const auto map = reference_role_map();
  for (int i = 0; i < 300; ++i) {
    for (auto r : {Role::Lead, Role::DirectSupport, Role::IndirectSupport}) {
      const auto s = plant_activities(r, rng);
      CHECK_FALSE(s.empty());
      CHECK(assign_role(s, map) == r);
    }
  }
}

TEST_CASE("parsed profiles equal planted profiles") {
  SynthConfig cfg;
  cfg.papers = 150;
  cfg.seed = 7;
  const auto syn = generate_synthetic_corpus(cfg);
  const auto lex = ActivityLexicon::builtin();
  std::size_t statements = 0;
  for (std::size_t i = 0; i < syn.papers.size(); ++i) {
    const auto& truth = syn.truth[i];
    CHECK(truth.lratio >= 1.0 / double(truth.authors.size()));
    CHECK(truth.lratio <= 1.0);
    if (!truth.has_statement) continue;
    ++statements;
    const auto ex = extract_paper_profiles(syn.papers[i], lex);
    REQUIRE(ex.profiles.size() == truth.authors.size());
    for (std::size_t a = 0; a < truth.authors.size(); ++a) {
      CAPTURE(*syn.papers[i].statement);
      CHECK(ex.profiles[a].author_id == truth.authors[a].author_id);
      CHECK(ex.profiles[a].activities == truth.authors[a].activities);
    }
    const auto roles = assign_roles(ex.profiles, reference_role_map());
    const auto l = compute_lratios(roles);
    REQUIRE(l.size() == 1);
    CHECK(l[0].defined());
    CHECK(l[0].value == truth.lratio);
  }
  CHECK(statements > 50);
}

TEST_CASE("planted block structure is recovered by clustering") {
  SynthConfig cfg;
  cfg.papers = 400;
  cfg.seed = 8;
  cfg.statement_fraction = 1.0;
  const auto syn = generate_synthetic_corpus(cfg);
  const auto ex = extract_profiles(Corpus(syn.papers), ActivityLexicon::builtin());
  const auto g = build_cooccurrence(ex.profiles);
  const auto p = cluster_modularity(g, {.seed = 1});
  CHECK(p.cluster_count() == 3);
  CHECK(rand_agreement(p.labels, reference_labels()) == 1.0);
}
