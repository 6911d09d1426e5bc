#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "teamscope/activity.hpp"
#include "teamscope/corpus.hpp"
#include "teamscope/error.hpp"
#include "teamscope/statement_parser.hpp"

using namespace teamscope;

namespace {

const ActivityLexicon& lex() {
  static const ActivityLexicon l = ActivityLexicon::builtin();
  return l;
}

StatementParse parse_with(std::string_view text, const std::vector<BylineEntry>& byline) {
  const auto m = resolve_author_mentions(text, byline, lex().collective_phrases());
  return parse_statement(text, m);
}

const std::vector<BylineEntry> kPair{{"mr", "Maria Rossi"}, {"ks", "Kenji Sato"}};

}  // namespace

TEST_CASE("initials") {
  CHECK(initials_of("Maria Rossi") == "MR");
  CHECK(initials_of("Jean-Paul Sartre") == "JPS");
  CHECK(normalize_initials("M.-R.") == "MR");
  CHECK(looks_like_initials("M.R."));
  CHECK(looks_like_initials("Ch.W."));
  CHECK(looks_like_initials("MR"));
  CHECK_FALSE(looks_like_initials("designed"));
  CHECK_FALSE(looks_like_initials("The"));
}

TEST_CASE("unique initials resolve to one author") {
  const auto m = resolve_author_mentions("M.R. wrote the paper.", kPair, lex().collective_phrases());
  const auto* hit = m.find("M.R.");
  REQUIRE(hit != nullptr);
  CHECK(*hit == std::vector<std::string>{"mr"});
  CHECK(m.ambiguous.empty());
}

TEST_CASE("shared initials map to every matching author") {
  const std::vector<BylineEntry> byline{{"a", "John Smith"}, {"b", "Jane Stone"}};
  const auto m = resolve_author_mentions("J.S. wrote the paper.", byline, lex().collective_phrases());
  const auto* hit = m.find("J.S.");
  REQUIRE(hit != nullptr);
  CHECK(*hit == std::vector<std::string>{"a", "b"});
  CHECK(m.ambiguous.size() == 1);
}

TEST_CASE("collective phrases cover the whole byline") {
  const std::vector<BylineEntry> byline{{"a", "Ann Ko"}, {"b", "Bo Li"}, {"c", "Cy Ma"}};
  const auto p = parse_with("All authors discussed the results.", byline);
  REQUIRE(p.clauses.size() == 1);
  CHECK(p.clauses[0].authors == std::vector<std::string>{"a", "b", "c"});
  CHECK(p.clauses[0].verb == "discussed");
}

TEST_CASE("plain genre clause rules") {
  const auto p = parse_with("M.R. and K.S. designed research; M.R. performed research.", kPair);
  REQUIRE(p.clauses.size() == 2);
  CHECK(p.clauses[0].authors == std::vector<std::string>{"mr", "ks"});
  CHECK(p.clauses[0].verb == "designed");
  CHECK(p.clauses[1].authors == std::vector<std::string>{"mr"});
  CHECK(p.clauses[1].verb == "performed");
  CHECK(p.unattributed == 0);

  const auto q = parse_with("K.S. wrote the paper.", kPair);
  REQUIRE(q.clauses.size() == 1);
  CHECK(q.clauses[0].authors == std::vector<std::string>{"ks"});
  CHECK(q.clauses[0].verb == "wrote");
}

TEST_CASE("coordinated predicates share the subject") {
  const auto p = parse_with("M.R. conceived, designed and wrote the paper.", kPair);
  REQUIRE(p.clauses.size() == 3);
  CHECK(p.clauses[0].verb == "conceived");
  CHECK(p.clauses[1].verb == "designed");
  CHECK(p.clauses[2].verb == "wrote");
  for (const auto& c : p.clauses) CHECK(c.authors == std::vector<std::string>{"mr"});
}

TEST_CASE("colon genre") {
  const auto p = parse_with("Conceived and designed the experiments: MR KS. Wrote the paper: KS.", kPair);
  REQUIRE(p.clauses.size() == 3);
  CHECK(p.clauses[0].verb == "Conceived");
  CHECK(p.clauses[0].authors == std::vector<std::string>{"mr", "ks"});
  CHECK(p.clauses[1].verb == "designed");
  CHECK(p.clauses[2].verb == "Wrote");
  CHECK(p.clauses[2].authors == std::vector<std::string>{"ks"});
}

TEST_CASE("degenerate statements never throw") {
  CHECK(parse_with("", kPair).clauses.empty());
  CHECK_NOTHROW(parse_with(";;;..::", kPair));
  CHECK_NOTHROW(parse_with("M.R.", kPair));
  CHECK_NOTHROW(parse_with(": : MR", kPair));
  const auto p = parse_with("Designed research.", kPair);
  CHECK(p.clauses.empty());
  CHECK(p.unattributed >= 1);
}

TEST_CASE("lexicon canonicalization") {
  CHECK(lex().canonicalize("designed") == Activity::Design);
  CHECK(lex().canonicalize("wrote") == Activity::Write);
  CHECK(lex().canonicalize("Analysed") == Activity::Analyze);
  CHECK(lex().canonicalize("supervising") == Activity::Supervise);
  CHECK(lex().canonicalize("purified") == Activity::Purify);
  CHECK_FALSE(lex().canonicalize("validated").has_value());
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    for (const auto& f : lex().forms(activity_at(i))) CHECK(lex().canonicalize(f) == activity_at(i));
    CHECK(lex().cluster(activity_at(i)) == reference_cluster(activity_at(i)));
  }
}

TEST_CASE("lexicon files are validated") {
  std::istringstream bad_cluster("design\tdesigned\tdirect\n");
  CHECK_THROWS_AS(ActivityLexicon::parse(bad_cluster, "t"), FormatError);
  std::istringstream missing("design\tdesigned\tlead\n");
  CHECK_THROWS_AS(ActivityLexicon::parse(missing, "t"), FormatError);
  std::istringstream round(lex().to_tsv());
  const auto again = ActivityLexicon::parse(round, "t");
  CHECK(again.to_tsv() == lex().to_tsv());
}

TEST_CASE("profiles: one per byline author with matched activities") {
  const auto rec = testsupport::paper("p1", 2010, {"mr", "ks", "xx"}, {}, {},
                                      "M.R. and K.S. designed research; M.R. performed research; K.S. validated the data.",
                                      {"ks"});
  PaperRecord p = rec;
  p.author_names = {"Maria Rossi", "Kenji Sato", "Xu Xi"};
  const auto ex = extract_paper_profiles(p, lex());
  REQUIRE(ex.profiles.size() == 3);
  CHECK(ex.profiles[0].activities == ActivitySet{Activity::Design, Activity::Perform});
  CHECK(ex.profiles[1].activities == ActivitySet{Activity::Design});
  CHECK(ex.profiles[1].corresponding);
  CHECK(ex.profiles[1].unmatched_verbs == std::vector<std::string>{"validated"});
  CHECK(ex.profiles[2].activities.empty());
  CHECK(ex.profiles[2].position == 2);
  CHECK(ex.profiles[2].team_size == 3);
  REQUIRE(ex.report.papers.size() == 1);
  CHECK(*ex.report.papers[0].match_fraction() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("closed-vocabulary statements give full coverage") {
  std::vector<PaperRecord> papers;
  const char* statements[] = {
      "A.B. conceived the study; C.D. performed experiments.",
      "A.B. and C.D. wrote the paper.",
      "C.D. analyzed data; A.B. supervised the work.",
      "Designed the experiments: AB. Collected data: CD.",
      "A.B. coordinated the study. C.D. purified proteins.",
      "All authors discussed the results.",
      "C.D. generated reagents; A.B. interpreted the data.",
      "Both authors edited the manuscript.",
      "A.B. led the project; C.D. conducted simulations and prepared samples.",
      "Provided materials: CD. Commented on drafts: AB.",
  };
  for (std::size_t i = 0; i < 10; ++i) {
    auto p = testsupport::paper(testsupport::pid(i), 2000, {"ab", "cd"}, {}, {}, std::string(statements[i]));
    p.author_names = {"Ann Bell", "Carl Dunn"};
    papers.push_back(p);
  }
  const auto ex = extract_profiles(Corpus(papers), lex(), 2);
  CHECK(ex.report.papers_parsed == 10);
  REQUIRE(ex.report.coverage().has_value());
  CHECK(*ex.report.coverage() == 1.0);
  CHECK(ex.report.unattributed == 0);
  CHECK(ex.profiles.size() == 20);
}
