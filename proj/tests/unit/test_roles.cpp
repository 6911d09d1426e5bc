#include <doctest.h>

#include <map>

#include "support.hpp"
#include "teamscope/roles.hpp"
#include "teamscope/statement_parser.hpp"
#include "teamscope/stats.hpp"

using namespace teamscope;

namespace {

ActivityProfile prof(std::string paper, std::string author, std::size_t pos, std::size_t n, ActivitySet s,
                     bool corresponding = false) {
  ActivityProfile p;
  p.paper_id = std::move(paper);
  p.author_id = std::move(author);
  p.position = pos;
  p.team_size = n;
  p.activities = s;
  p.corresponding = corresponding;
  return p;
}

}  // namespace

TEST_CASE("role priority") {
  const auto m = reference_role_map();
  CHECK(assign_role({Activity::Design, Activity::Analyze}, m) == Role::Lead);
  CHECK(assign_role({Activity::Perform, Activity::Analyze}, m) == Role::DirectSupport);
  CHECK(assign_role({Activity::Edit, Activity::Analyze}, m) == Role::DirectSupport);
  CHECK(assign_role({Activity::Edit}, m) == Role::IndirectSupport);
  CHECK(assign_role({}, m) == Role::Unknown);
}

TEST_CASE("role names round-trip") {
  for (auto r : {Role::Lead, Role::DirectSupport, Role::IndirectSupport, Role::Unknown}) {
    CHECK(role_from_name(role_name(r)) == r);
  }
  CHECK_FALSE(role_from_name("boss").has_value());
}

TEST_CASE("L-ratio arithmetic") {
  const std::vector<Role> a{Role::Lead, Role::Lead, Role::DirectSupport, Role::IndirectSupport};
  const auto la = compute_lratio("a", a);
  CHECK(la.value == 0.5);
  CHECK_FALSE(la.tall);

  const std::vector<Role> b{Role::Lead, Role::DirectSupport, Role::DirectSupport, Role::DirectSupport,
                            Role::IndirectSupport};
  const auto lb = compute_lratio("b", b);
  CHECK(lb.value == 0.2);
  CHECK(lb.value == 1.0 / 5.0);
  CHECK(lb.tall);

  const std::vector<Role> c(3, Role::Lead);
  CHECK(compute_lratio("c", c).value == 1.0);
  CHECK_FALSE(compute_lratio("c", c).tall);

  const std::vector<Role> none{Role::DirectSupport, Role::IndirectSupport};
  CHECK(compute_lratio("d", none).status == LRatioStatus::NoLead);
  const std::vector<Role> unknown{Role::Lead, Role::Unknown};
  CHECK(compute_lratio("e", unknown).status == LRatioStatus::Incomplete);
}

TEST_CASE("defined L-ratios lie in [1/n, 1]") {
  Rng rng(17);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    std::vector<Role> roles(n);
    for (auto& r : roles) r = static_cast<Role>(uniform_index(rng, 3));
    const auto l = compute_lratio("p", roles);
    if (!l.defined()) continue;
    CHECK(l.value >= 1.0 / static_cast<double>(n));
    CHECK(l.value <= 1.0);
    CHECK(l.tall == (l.value < 0.5));
  }
}

TEST_CASE("promotion only touches papers without a lead") {
  const std::vector<ActivityProfile> profiles{
      prof("p", "a", 0, 2, {Activity::Perform}), prof("p", "b", 1, 2, {Activity::Edit}, true),
      prof("q", "c", 0, 2, {Activity::Design}), prof("q", "d", 1, 2, {Activity::Perform}, true)};
  const auto m = reference_role_map();
  const auto none = assign_roles(profiles, m);
  CHECK(compute_lratios(none)[0].status == LRatioStatus::NoLead);

  const auto corr = assign_roles(profiles, m, Promotion::Corresponding);
  CHECK(corr[1].role == Role::Lead);
  CHECK(corr[1].promoted);
  CHECK(corr[0].role == Role::DirectSupport);
  CHECK(corr[3].role == Role::DirectSupport);
  CHECK_FALSE(corr[3].promoted);

  const auto first = assign_roles(profiles, m, Promotion::First);
  CHECK(first[0].role == Role::Lead);
  CHECK(first[0].promoted);
  CHECK(compute_lratios(first)[0].value == 0.5);
}

TEST_CASE("papers with missing profiles are incomplete") {
  const std::vector<ActivityProfile> profiles{prof("p", "a", 0, 3, {Activity::Design}),
                                              prof("p", "b", 1, 3, {Activity::Perform})};
  const auto l = compute_lratios(assign_roles(profiles, reference_role_map()));
  REQUIRE(l.size() == 1);
  CHECK(l[0].status == LRatioStatus::Incomplete);
}

TEST_CASE("composition by size equals a recount") {
  std::vector<ActivityProfile> pairs;
  for (int i = 0; i < 5; ++i) {
    const auto id = "s" + std::to_string(i);
    pairs.push_back(prof(id, "a", 0, 2, {Activity::Design}));
    pairs.push_back(prof(id, "b", 1, 2, {Activity::Collect}));
  }
  const auto c2 = composition_by_size(assign_roles(pairs, reference_role_map()), 10);
  REQUIRE(c2.count(2));
  CHECK(c2.at(2).lead_fraction() == 0.5);
  CHECK(c2.at(2).direct_fraction() == 0.5);
  CHECK(c2.at(2).indirect_fraction() == 0.0);
  CHECK_FALSE(c2.count(3));

  Rng rng(23);
  std::vector<ActivityProfile> profiles;
  for (int p = 0; p < 60; ++p) {
    const std::size_t n = 1 + uniform_index(rng, 9);
    for (std::size_t i = 0; i < n; ++i) {
      profiles.push_back(prof("p" + std::to_string(p), "a" + std::to_string(i), i, n,
                              ActivitySet(static_cast<std::uint32_t>(rng()) & static_cast<std::uint32_t>(rng()) &
                                          static_cast<std::uint32_t>(rng()))));
    }
  }
  const auto assigned = assign_roles(profiles, reference_role_map());
  const auto comp = composition_by_size(assigned, 6);
  std::map<std::size_t, std::array<std::size_t, 5>> tally;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (profiles[i].team_size > 6) continue;
    auto& t = tally[profiles[i].team_size];
    ++t[0];
    bool lead = false, direct = false;
    for (auto a : profiles[i].activities.items()) {
      lead |= reference_cluster(a) == Cluster::Lead;
      direct |= reference_cluster(a) == Cluster::DirectSupport;
    }
    if (lead) {
      ++t[1];
    } else if (direct) {
      ++t[2];
    } else if (!profiles[i].activities.empty()) {
      ++t[3];
    } else {
      ++t[4];
    }
  }
  REQUIRE(comp.size() == tally.size());
  for (const auto& [size, t] : tally) {
    const auto& c = comp.at(size);
    CHECK(c.authors == t[0]);
    CHECK(c.lead == t[1]);
    CHECK(c.direct == t[2]);
    CHECK(c.indirect == t[3]);
    CHECK(c.unknown == t[4]);
  }
}

TEST_CASE("L-ratio distribution by size") {
  auto make = [](std::string id, std::size_t n, std::size_t lead) {
    LRatio l;
    l.paper_id = std::move(id);
    l.n = n;
    l.n_lead = lead;
    l.value = static_cast<double>(lead) / static_cast<double>(n);
    return l;
  };
  std::vector<LRatio> v{make("a", 4, 2)};
  CHECK(lratio_distribution_by_size(v).at(4).mean == 0.5);
  std::vector<LRatio> w{make("a", 2, 1), make("b", 2, 2)};
  CHECK(lratio_distribution_by_size(w).at(2).mean == 0.75);

  Rng rng(37);
  std::vector<LRatio> many;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 3 + uniform_index(rng, 3);
    many.push_back(make("p" + std::to_string(i), n, 1 + uniform_index(rng, n)));
  }
  many[0].status = LRatioStatus::NoLead;
  const auto dist = lratio_distribution_by_size(many);
  for (const auto& [n, d] : dist) {
    std::vector<double> xs;
    for (const auto& l : many) {
      if (l.n == n && l.defined()) xs.push_back(l.value);
    }
    std::sort(xs.begin(), xs.end());
    CHECK(d.count == xs.size());
    auto q = [&](double p) {
      const double h = (static_cast<double>(xs.size()) - 1.0) * p;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const auto hi = std::min(lo + 1, xs.size() - 1);
      return xs[lo] + (h - std::floor(h)) * (xs[hi] - xs[lo]);
    };
    CHECK(d.q1 == doctest::Approx(q(0.25)).epsilon(1e-12));
    CHECK(d.median == doctest::Approx(q(0.5)).epsilon(1e-12));
    CHECK(d.q3 == doctest::Approx(q(0.75)).epsilon(1e-12));
    std::size_t hist = 0;
    for (auto h : d.histogram) hist += h;
    CHECK(hist == xs.size());
  }
  CHECK(lratio_bin(0.0) == 0);
  CHECK(lratio_bin(0.1) == 1);
  CHECK(lratio_bin(0.3) == 3);
  CHECK(lratio_bin(1.0) == 9);
}
