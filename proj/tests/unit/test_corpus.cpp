#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "teamscope/corpus.hpp"
#include "teamscope/error.hpp"

using namespace teamscope;
using testsupport::paper;

TEST_CASE("ingest counts malformed records and keeps the rest") {
  std::istringstream in(
      R"({"id":"a","year":2001,"authors":["x"]}
{"id":"b","year":2002,"authors":["x","y"],"refs":["a"]}
{"id":"c","year":"soon","authors":["x"]}
{"id":"d","year":2003,"authors":["y"],"refs":["b","a"]}
)");
  IngestReport report;
  const Corpus c = ingest_papers(in, {}, report);
  CHECK(c.size() == 3);
  CHECK(report.skipped == 1);
  CHECK(report.records == 4);
}

TEST_CASE("duplicate ids keep the last record") {
  std::istringstream in(
      R"({"id":"a","year":2001,"authors":["x"],"venue":"first"}
{"id":"a","year":2001,"authors":["x"],"venue":"second"}
)");
  IngestReport report;
  const Corpus c = ingest_papers(in, {}, report);
  REQUIRE(c.size() == 1);
  CHECK(c.paper(0).venue == "second");
  CHECK(report.duplicates == 1);
}

TEST_CASE("empty stream gives an empty corpus with undefined stats") {
  std::istringstream in("");
  IngestReport report;
  const Corpus c = ingest_papers(in, {}, report);
  CHECK(c.empty());
  const auto s = summarize(c, CitationGraph::build(c));
  CHECK(s.papers == 0);
  CHECK_FALSE(s.mean_team_size.has_value());
}

TEST_CASE("record parsing rejects schema violations") {
  const IngestOptions opts;
  CHECK_THROWS_AS(parse_paper_line("not json", opts), FormatError);
  CHECK_THROWS_AS(parse_paper_line(R"({"year":2000,"authors":["a"]})", opts), FormatError);
  CHECK_THROWS_AS(parse_paper_line(R"({"id":"p","year":2000,"authors":[]})", opts), FormatError);
  CHECK_THROWS_AS(parse_paper_line(R"({"id":"p","year":2000,"authors":["a","a"]})", opts), FormatError);
  CHECK_THROWS_AS(parse_paper_line(R"({"id":"p","year":2000,"authors":["a"],"corresponding":["b"]})", opts),
                  FormatError);
  IngestOptions narrow;
  narrow.min_year = 2005;
  CHECK_THROWS_AS(parse_paper_line(R"({"id":"p","year":2000,"authors":["a"]})", narrow), FormatError);
}

TEST_CASE("self and repeated references are dropped and counted") {
  IngestReport report;
  const auto p = parse_paper_line(R"({"id":"p","year":2000,"authors":["a"],"refs":["p","q","q","r"]})", {}, &report);
  CHECK(p.refs == std::vector<std::string>{"q", "r"});
  CHECK(report.self_refs_dropped == 1);
  CHECK(report.duplicate_refs_dropped == 1);
}

TEST_CASE("record JSON round-trips") {
  const auto p = parse_paper_line(
      R"({"id":"p","year":2000,"venue":"V","authors":[{"id":"a","name":"Ann Lee"},"b"],"corresponding":["b"],"refs":["q"],"topics":["t"],"statement":"A.L. wrote the paper."})",
      {});
  const auto q = parse_paper_line(to_json_line(p), {});
  CHECK(q.id == p.id);
  CHECK(q.authors == p.authors);
  CHECK(q.author_names == p.author_names);
  CHECK(q.author_names[0] == "Ann Lee");
  CHECK(q.corresponding == p.corresponding);
  CHECK(q.refs == p.refs);
  CHECK(q.topics == p.topics);
  CHECK(q.statement == p.statement);
}

TEST_CASE("citation graph transpose and dangling references") {
  const Corpus c({paper("A", 2003, {"u"}, {"B", "X"}), paper("B", 2002, {"u"}, {"C"}), paper("C", 2001, {"v"})});
  const auto g = CitationGraph::build(c);
  const auto a = *g.find("A"), b = *g.find("B"), cc = *g.find("C");
  REQUIRE(g.find("X").has_value());
  const auto x = *g.find("X");
  CHECK(g.is_dangling(x));
  CHECK_FALSE(g.year(x).has_value());
  CHECK(std::vector<CitationGraph::Node>(g.citers(b).begin(), g.citers(b).end()) == std::vector{a});
  CHECK(std::vector<CitationGraph::Node>(g.citers(cc).begin(), g.citers(cc).end()) == std::vector{b});
  CHECK(std::vector<CitationGraph::Node>(g.citers(x).begin(), g.citers(x).end()) == std::vector{a});
  CHECK(g.edge_count() == 3);
  CHECK(g.timestamp_anomalies() == 0);
}

TEST_CASE("edges appear in citers exactly when they appear in references") {
  Rng rng(3);
  const auto records = testsupport::random_citation_records(rng, 40, 0.1);
  const Corpus c(records);
  const auto g = CitationGraph::build(c);
  std::size_t edges = 0;
  for (CitationGraph::Node v = 0; v < g.node_count(); ++v) {
    const auto cit = g.citers(v);
    CHECK(std::is_sorted(cit.begin(), cit.end()));
    for (auto u : cit) {
      const auto refs = g.references(u);
      CHECK(std::find(refs.begin(), refs.end(), v) != refs.end());
    }
    edges += g.references(v).size();
  }
  CHECK(edges == g.edge_count());
  std::size_t raw = 0;
  for (const auto& p : records) raw += p.refs.size();
  CHECK(raw == g.edge_count());
}

TEST_CASE("author history uses strictly prior years") {
  const Corpus c({paper("a", 2005, {"x"}), paper("b", 2008, {"x"}), paper("c", 2010, {"y"})});
  const auto idx = AuthorIndex::build(c, CitationGraph::build(c));
  CHECK(idx.prior_papers("y", 2010) == 0);
  CHECK(idx.career_age("y", 2010) == 0);
  CHECK(idx.prior_papers("x", 2008) == 1);
  CHECK(idx.career_age("x", 2008) == 3);
  CHECK(idx.papers_in_year("x", 2008) == 1);
  CHECK_FALSE(idx.contains("z"));
}

TEST_CASE("prior citations equal a brute-force recount") {
  Rng rng(19);
  auto records = testsupport::random_citation_records(rng, 20, 0.2);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].authors = {"a" + std::to_string(i % 4), "a" + std::to_string((i + 1) % 4)};
    records[i].author_names = records[i].authors;
  }
  const Corpus c(records);
  const auto idx = AuthorIndex::build(c, CitationGraph::build(c));
  for (int year = 2000; year <= 2008; ++year) {
    for (int a = 0; a < 4; ++a) {
      const std::string author = "a" + std::to_string(a);
      std::size_t brute = 0;
      for (const auto& target : records) {
        if (target.year >= year) continue;
        if (std::find(target.authors.begin(), target.authors.end(), author) == target.authors.end()) continue;
        for (const auto& citer : records) {
          if (citer.year >= year) continue;
          if (std::find(citer.refs.begin(), citer.refs.end(), target.id) != citer.refs.end()) ++brute;
        }
      }
      CAPTURE(year);
      CAPTURE(author);
      CHECK(idx.prior_citations(author, year) == brute);
    }
  }
}

TEST_CASE("summary statistics") {
  const Corpus c({paper("a", 2000, {"1", "2"}, {"z", "y", "x"}), paper("b", 2001, {"1", "2", "3", "4", "5", "6"})});
  const auto s = summarize(c, CitationGraph::build(c));
  CHECK(*s.mean_team_size == doctest::Approx(4.0));
  CHECK(*s.mean_references == doctest::Approx(1.5));

  const Corpus one({paper("a", 2000, {"1"}, {"z", "y", "x"})});
  CHECK(*summarize(one, CitationGraph::build(one)).mean_references == doctest::Approx(3.0));
}

TEST_CASE("snapshot round-trips corpus and graph") {
  Rng rng(5);
  const Corpus c(testsupport::random_citation_records(rng, 30, 0.15));
  const auto g = CitationGraph::build(c);
  const auto dir = testsupport::fresh_dir("snapshot");
  save_snapshot(dir / "s.bin", c, g);
  const auto s = load_snapshot(dir / "s.bin");
  REQUIRE(s.corpus.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(to_json_line(s.corpus.paper(i)) == to_json_line(c.paper(i)));
  REQUIRE(s.graph.node_count() == g.node_count());
  for (CitationGraph::Node v = 0; v < g.node_count(); ++v) {
    CHECK(s.graph.id(v) == g.id(v));
    CHECK(std::equal(s.graph.citers(v).begin(), s.graph.citers(v).end(), g.citers(v).begin(), g.citers(v).end()));
  }
}

TEST_CASE("corrupt snapshots are rejected") {
  const auto dir = testsupport::fresh_dir("snapshot_bad");
  {
    std::ofstream out(dir / "bad.bin", std::ios::binary);
    out << "definitely not a snapshot";
  }
  CHECK_THROWS_AS(load_snapshot(dir / "bad.bin"), FormatError);
  CHECK_THROWS_AS(load_snapshot(dir / "missing.bin"), IoError);
}
