#include <doctest.h>

#include "support.hpp"
#include "teamscope/error.hpp"
#include "teamscope/records.hpp"

using namespace teamscope;

TEST_CASE("numbers use shortest round-trip form") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(std::nan("")) == "NA");
  CHECK(format_optional(std::nullopt).empty());
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double v = standard_normal(rng) * std::pow(10.0, double(uniform_index(rng, 12)) - 6.0);
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("CSV escaping and parsing round-trip") {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  const auto text = csv_row(std::vector<std::string>{"a", "b", "c", "d", "e"}) + csv_row(fields);
  const auto t = parse_csv(text, "t");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == fields);
  CHECK(t.column("c") == 2);
  CHECK(t.has_column("e"));
  CHECK_THROWS_AS(t.column("zzz"), DataError);
}

TEST_CASE("cells") {
  CHECK_FALSE(parse_cell("", "x").has_value());
  CHECK_FALSE(parse_cell("NA", "x").has_value());
  CHECK(*parse_cell("-1.5", "x") == -1.5);
  CHECK_THROWS_AS(parse_cell("abc", "x"), FormatError);
}

TEST_CASE("profiles and roles round-trip through NDJSON") {
  ActivityProfile p;
  p.paper_id = "p";
  p.author_id = "a";
  p.position = 2;
  p.team_size = 4;
  p.corresponding = true;
  p.activities = {Activity::Design, Activity::Edit};
  p.unmatched_verbs = {"validated"};
  const auto q = profile_from_json(profile_to_json(p));
  CHECK(q.paper_id == p.paper_id);
  CHECK(q.author_id == p.author_id);
  CHECK(q.position == p.position);
  CHECK(q.team_size == p.team_size);
  CHECK(q.corresponding);
  CHECK(q.activities == p.activities);
  CHECK(q.unmatched_verbs == p.unmatched_verbs);

  RoleAssignment r{"p", "a", 1, 3, false, Role::IndirectSupport, RoleSource::Parsed, true};
  const auto s = role_from_json(role_to_json(r));
  CHECK(s.role == Role::IndirectSupport);
  CHECK(s.promoted);
  CHECK(s.position == 1);
  CHECK_THROWS_AS(role_from_json("{\"paper_id\":1}"), FormatError);
}

TEST_CASE("L-ratio CSV keeps defined rows") {
  std::vector<LRatio> ls(2);
  ls[0].paper_id = "a";
  ls[0].n = 4;
  ls[0].n_lead = 1;
  ls[0].value = 0.25;
  ls[0].tall = true;
  ls[1].paper_id = "b";
  ls[1].status = LRatioStatus::NoLead;
  const auto dir = testsupport::fresh_dir("lratio_csv");
  write_lratio_csv(dir / "l.csv", ls);
  CHECK(read_text_file(dir / "l.csv") == "paper_id,n,n_lead,lratio,tall,source\na,4,1,0.25,1,parsed\n");
  const auto back = read_lratio_csv(dir / "l.csv");
  REQUIRE(back.size() == 1);
  CHECK(back[0].value == 0.25);
  CHECK(back[0].tall);
}

TEST_CASE("partition artifacts carry the role map") {
  PartitionArtifact a;
  a.partition.labels = reference_labels();
  a.partition.q = 0.3;
  a.agreement = 1.0;
  a.roles = reference_role_map();
  a.roles[0] = Cluster::IndirectSupport;
  const auto dir = testsupport::fresh_dir("partition");
  write_partition(dir / "p.json", a);
  CHECK(read_partition_roles(dir / "p.json") == a.roles);
}
