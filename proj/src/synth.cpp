#include "teamscope/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "teamscope/error.hpp"
#include "teamscope/records.hpp"

namespace teamscope {
namespace {

struct VerbForm {
  std::string_view past;
  std::array<std::string_view, 2> objects;
};

// Past-tense surface form and object phrases per activity, in canonical order.
constexpr std::array<VerbForm, kActivityCount> kForms = {{
    {"conceived", {"the study", "the project"}},
    {"designed", {"research", "the experiments"}},
    {"led", {"the project", "the study"}},
    {"supervised", {"the work", "the project"}},
    {"coordinated", {"the study", "the collaboration"}},
    {"interpreted", {"the results", "the data"}},
    {"wrote", {"the paper", "the manuscript"}},
    {"helped", {"with experiments", "with the analysis"}},
    {"assisted", {"with experiments", "with sample preparation"}},
    {"prepared", {"samples", "the figures"}},
    {"developed", {"new methods", "analytic tools"}},
    {"collected", {"data", "field samples"}},
    {"generated", {"reagents", "mutant strains"}},
    {"purified", {"proteins", "samples"}},
    {"carried", {"out experiments", "out simulations"}},
    {"did", {"fieldwork", "the measurements"}},
    {"performed", {"experiments", "research"}},
    {"conducted", {"simulations", "the survey"}},
    {"analyzed", {"data", "the results"}},
    {"participated", {"in discussions", "in the fieldwork"}},
    {"provided", {"materials", "new reagents"}},
    {"contributed", {"new tools", "to the analysis"}},
    {"commented", {"on the manuscript", "on drafts"}},
    {"discussed", {"the results", "the findings"}},
    {"edited", {"the manuscript", "the paper"}},
}};

constexpr std::array<std::string_view, 26> kGiven = {
    "Alice", "Bruno", "Chen",  "Dana",  "Elena", "Farid", "Greta", "Hiro",  "Ines",  "Jonas", "Kofi",  "Lena",  "Mateo",
    "Nadia", "Oscar", "Priya", "Quinn", "Rosa",  "Sven",  "Tara",  "Umar",  "Vera",  "Wei",   "Xenia", "Yusuf", "Zoe"};
constexpr std::array<std::string_view, 26> kFamily = {
    "Abbott", "Bauer",  "Costa",  "Diaz",   "Engel", "Fischer", "Garcia", "Haas",  "Ito",
    "Jensen", "Kim",    "Lopez",  "Moreau", "Novak", "Okafor",  "Park",   "Quist", "Rossi",
    "Sato",   "Torres", "Ueda",   "Varga",  "Weber", "Xu",      "Yang",   "Zhou"};

std::vector<Activity> cluster_members(Cluster c) {
  std::vector<Activity> out;
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    if (reference_cluster(activity_at(i)) == c) out.push_back(activity_at(i));
  }
  return out;
}

std::size_t uniform_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(uniform_index(rng, hi - lo + 1));
}

void pick_from(const std::vector<Activity>& pool, std::size_t k, ActivitySet& set, Rng& rng) {
  std::vector<Activity> copy = pool;
  shuffle(std::span(copy), rng);
  for (std::size_t i = 0; i < std::min(k, copy.size()); ++i) set.insert(copy[i]);
}

std::string dotted(const std::string& initials) {
  std::string out;
  for (char c : initials) {
    out += c;
    out += '.';
  }
  return out;
}

std::string subject_phrase(const std::vector<std::size_t>& members, std::span<const BylineEntry> byline, bool dots,
                           Rng& rng) {
  if (members.size() == byline.size() && byline.size() >= 2 && bernoulli(rng, 0.5)) {
    return byline.size() == 2 && bernoulli(rng, 0.5) ? "Both authors" : "All authors";
  }
  std::vector<std::string> names;
  for (auto m : members) {
    const auto ini = initials_of(byline[m].name);
    names.push_back(dots ? dotted(ini) : ini);
  }
  if (!dots) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? " " : "") + names[i];
    return out;
  }
  if (names.size() == 1) return names[0];
  if (names.size() == 2) return names[0] + " and " + names[1];
  std::string out;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) out += (i ? ", " : "") + names[i];
  out += bernoulli(rng, 0.5) ? ", and " : " and ";
  return out + names.back();
}

std::string verb_phrase(const std::vector<Activity>& acts, Rng& rng, bool capitalize) {
  std::string out;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (i > 0) out += i + 1 == acts.size() ? " and " : ", ";
    std::string_view v = kForms[index_of(acts[i])].past;
    if (acts[i] == Activity::Analyze && bernoulli(rng, 0.3)) v = "analysed";
    out += v;
  }
  if (capitalize && !out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  const auto& objects = kForms[index_of(acts.back())].objects;
  out += ' ';
  out += objects[uniform_index(rng, objects.size())];
  return out;
}

}  // namespace

std::string_view pattern_name(CitationPattern p) {
  switch (p) {
    case CitationPattern::Neutral:
      return "neutral";
    case CitationPattern::Disruptive:
      return "disruptive";
    case CitationPattern::Developmental:
      return "developmental";
  }
  return "neutral";
}

ActivitySet plant_activities(Role role, Rng& rng) {
  static const auto lead = cluster_members(Cluster::Lead);
  static const auto direct = cluster_members(Cluster::DirectSupport);
  static const auto indirect = cluster_members(Cluster::IndirectSupport);
  ActivitySet s;
  switch (role) {
    case Role::Lead:
      pick_from(lead, uniform_between(rng, 2, 4), s, rng);
      if (bernoulli(rng, 0.25)) pick_from(direct, 1, s, rng);
      break;
    case Role::DirectSupport:
      pick_from(direct, uniform_between(rng, 2, 4), s, rng);
      if (bernoulli(rng, 0.1)) pick_from(indirect, 1, s, rng);
      break;
    case Role::IndirectSupport:
      pick_from(indirect, uniform_between(rng, 2, 3), s, rng);
      break;
    case Role::Unknown:
      break;
  }
  return s;
}

std::string render_statement(std::span<const BylineEntry> byline, std::span<const ActivitySet> activities,
                             StatementGenre genre, Rng& rng) {
  if (byline.size() != activities.size()) throw std::invalid_argument("render_statement: size mismatch");
  // Group activities by the exact set of authors performing them.
  std::map<std::vector<std::size_t>, std::vector<Activity>> groups;
  std::vector<std::vector<std::size_t>> order;
  for (std::size_t a = 0; a < kActivityCount; ++a) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < byline.size(); ++i) {
      if (activities[i].contains(activity_at(a))) members.push_back(i);
    }
    if (members.empty()) continue;
    auto [it, fresh] = groups.try_emplace(members);
    if (fresh) order.push_back(members);
    it->second.push_back(activity_at(a));
  }

  std::string out;
  if (genre == StatementGenre::Colon) {
    for (const auto& members : order) {
      if (!out.empty()) out += ' ';
      out += verb_phrase(groups[members], rng, true) + ": " + subject_phrase(members, byline, false, rng) + ".";
    }
    return out;
  }
  for (std::size_t g = 0; g < order.size(); ++g) {
    const auto& members = order[g];
    if (g > 0) out += bernoulli(rng, 0.7) ? "; " : ". ";
    out += subject_phrase(members, byline, true, rng) + " " + verb_phrase(groups[members], rng, false);
  }
  if (!out.empty()) out += '.';
  return out;
}

std::string SyntheticCorpus::papers_ndjson() const {
  std::string out;
  for (const auto& p : papers) {
    out += to_json_line(p);
    out += '\n';
  }
  return out;
}

std::string SyntheticCorpus::truth_json(std::uint64_t seed) const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  nlohmann::ordered_json ref;
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    ref[std::string(activity_name(activity_at(i)))] = std::string(cluster_name(reference_cluster(activity_at(i))));
  }
  j["reference_partition"] = ref;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : truth) {
    nlohmann::ordered_json p;
    p["paper_id"] = t.paper_id;
    p["n"] = t.authors.size();
    p["n_lead"] = t.n_lead;
    p["lratio"] = t.lratio;
    p["tall"] = t.lratio < 0.5;
    p["has_statement"] = t.has_statement;
    p["genre"] = t.genre == StatementGenre::Plain ? "plain" : "colon";
    p["pattern"] = std::string(pattern_name(t.pattern));
    auto authors = nlohmann::ordered_json::array();
    for (const auto& a : t.authors) {
      nlohmann::ordered_json e;
      e["author_id"] = a.author_id;
      e["role"] = std::string(role_name(a.role));
      auto acts = nlohmann::ordered_json::array();
      for (Activity x : a.activities.items()) acts.push_back(std::string(activity_name(x)));
      e["activities"] = acts;
      authors.push_back(e);
    }
    p["authors"] = authors;
    arr.push_back(p);
  }
  j["papers"] = arr;
  return j.dump(1) + "\n";
}

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& cfg) {
  if (cfg.authors < cfg.max_team || cfg.authors > kGiven.size() * kFamily.size()) {
    throw ConfigError(fmt::format("synthetic author count must lie in [{}, {}]", cfg.max_team,
                                  kGiven.size() * kFamily.size()));
  }
  if (cfg.min_team < 1 || cfg.min_team > cfg.max_team) throw ConfigError("invalid synthetic team size range");
  if (cfg.last_year < cfg.first_year) throw ConfigError("invalid synthetic year range");
  if (cfg.topic_clusters == 0 || cfg.keywords_per_cluster == 0 || cfg.min_keywords > cfg.max_keywords ||
      cfg.max_keywords > cfg.keywords_per_cluster) {
    throw ConfigError("invalid synthetic keyword settings");
  }
  Rng rng(substream_seed(cfg.seed, 0x5e7, 0));

  struct Author {
    std::string id, name;
    int entry = 0;
  };
  std::vector<Author> authors(cfg.authors);
  const int span_years = cfg.last_year - cfg.first_year;
  for (std::size_t k = 0; k < cfg.authors; ++k) {
    authors[k].id = fmt::format("a{:03d}", k);
    authors[k].name = fmt::format("{} {}", kGiven[k % 26], kFamily[(k / 26 + k) % 26]);
    authors[k].entry = cfg.first_year - 15 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(span_years + 13)));
  }

  std::vector<int> years(cfg.papers);
  for (auto& y : years) y = cfg.first_year + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(span_years + 1)));
  std::sort(years.begin(), years.end());

  static constexpr std::array<double, 7> kSizeWeights = {5, 5, 4, 3, 2, 1.5, 1};
  static constexpr std::array<std::string_view, 5> kVenues = {"Journal of Synthetic Biology", "Synthetic Physics Letters",
                                                              "Annals of Simulated Science", "Proceedings of Examples",
                                                              "Open Test Journal"};

  SyntheticCorpus out;
  std::vector<std::size_t> paper_cluster(cfg.papers);
  for (std::size_t p = 0; p < cfg.papers; ++p) {
    const int year = years[p];
    PaperRecord rec;
    rec.id = fmt::format("p{:04d}", p);
    rec.year = year;
    rec.venue = std::string(kVenues[uniform_index(rng, kVenues.size())]);

    // Team size: weights favour small teams.
    std::vector<double> w;
    for (std::size_t n = cfg.min_team; n <= cfg.max_team; ++n) {
      w.push_back(n >= 2 && n - 2 < kSizeWeights.size() ? kSizeWeights[n - 2] : 1.0);
    }
    double u = uniform01(rng) * std::accumulate(w.begin(), w.end(), 0.0);
    std::size_t n = cfg.max_team;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (u < w[i]) {
        n = cfg.min_team + i;
        break;
      }
      u -= w[i];
    }

    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < authors.size(); ++k) {
      if (authors[k].entry <= year) active.push_back(k);
    }
    if (active.size() < n) {
      active.resize(authors.size());
      std::iota(active.begin(), active.end(), 0u);
    }
    shuffle(std::span(active), rng);
    std::vector<std::size_t> team(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(n));

    // Leads are the most senior members after noise.
    const std::size_t k = uniform_between(rng, 1, n);
    std::vector<std::pair<double, std::size_t>> score;
    for (auto m : team) score.emplace_back(static_cast<double>(year - authors[m].entry) + 3.0 * standard_normal(rng), m);
    std::sort(score.begin(), score.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::size_t> leads, supports;
    for (std::size_t i = 0; i < n; ++i) (i < k ? leads : supports).push_back(score[i].second);

    // Byline: a junior lead first, the most senior lead last, support in between.
    std::vector<std::size_t> byline;
    std::vector<std::size_t> middle = supports;
    byline.push_back(leads.back());
    if (leads.size() >= 2) {
      for (std::size_t i = 1; i + 1 < leads.size(); ++i) middle.push_back(leads[i]);
    }
    shuffle(std::span(middle), rng);
    byline.insert(byline.end(), middle.begin(), middle.end());
    if (leads.size() >= 2) byline.push_back(leads.front());

    PlantedPaper truth;
    truth.paper_id = rec.id;
    truth.n_lead = k;
    truth.lratio = static_cast<double>(k) / static_cast<double>(n);
    std::vector<BylineEntry> entries;
    std::vector<ActivitySet> acts;
    for (auto m : byline) {
      const bool is_lead = std::find(leads.begin(), leads.end(), m) != leads.end();
      const Role role = is_lead ? Role::Lead : (bernoulli(rng, 0.7) ? Role::DirectSupport : Role::IndirectSupport);
      PlantedAuthor pa{authors[m].id, role, plant_activities(role, rng)};
      rec.authors.push_back(authors[m].id);
      rec.author_names.push_back(authors[m].name);
      entries.push_back({authors[m].id, authors[m].name});
      acts.push_back(pa.activities);
      truth.authors.push_back(std::move(pa));
    }
    rec.corresponding.push_back(authors[leads.front()].id);

    truth.has_statement = bernoulli(rng, cfg.statement_fraction);
    truth.genre = bernoulli(rng, cfg.colon_fraction) ? StatementGenre::Colon : StatementGenre::Plain;
    if (truth.has_statement) rec.statement = render_statement(entries, acts, truth.genre, rng);

    // Topics: mostly from the paper's own cluster.
    const std::size_t cluster = uniform_index(rng, cfg.topic_clusters);
    paper_cluster[p] = cluster;
    const std::size_t m = uniform_between(rng, cfg.min_keywords, cfg.max_keywords);
    std::set<std::string> topics;
    while (topics.size() < m) {
      std::size_t c = cluster;
      if (cfg.topic_clusters > 1 && bernoulli(rng, 0.1)) c = uniform_index(rng, cfg.topic_clusters);
      topics.insert(fmt::format("t{}-{:02d}", c, uniform_index(rng, cfg.keywords_per_cluster)));
    }
    rec.topics.assign(topics.begin(), topics.end());

    const double roll = uniform01(rng);
    truth.pattern = roll < 0.3 ? CitationPattern::Disruptive
                               : (roll < 0.6 ? CitationPattern::Developmental : CitationPattern::Neutral);

    // References: earlier papers, preferring the same topic cluster.
    std::set<std::string> refs;
    if (p > 0) {
      const std::size_t want = std::min(p, uniform_between(rng, cfg.min_refs, cfg.max_refs));
      std::vector<std::size_t> same, other;
      for (std::size_t q = 0; q < p; ++q) (paper_cluster[q] == cluster ? same : other).push_back(q);
      std::set<std::size_t> targets;
      for (std::size_t attempt = 0; targets.size() < want && attempt < 20 * want; ++attempt) {
        const auto& pool = (!same.empty() && (other.empty() || bernoulli(rng, 0.8))) ? same : other;
        targets.insert(pool[uniform_index(rng, pool.size())]);
      }
      for (auto t : targets) {
        refs.insert(out.papers[t].id);
        const auto& cited = out.papers[t];
        if (out.truth[t].pattern == CitationPattern::Developmental && !cited.refs.empty()) {
          const std::size_t extra = uniform_between(rng, 1, std::min<std::size_t>(2, cited.refs.size()));
          for (std::size_t e = 0; e < extra; ++e) refs.insert(cited.refs[uniform_index(rng, cited.refs.size())]);
        }
      }
      // Disruptive papers eclipse their references.
      std::set<std::string> direct;
      for (auto t : targets) direct.insert(out.papers[t].id);
      for (auto t : targets) {
        if (out.truth[t].pattern != CitationPattern::Disruptive) continue;
        for (const auto& r : out.papers[t].refs) {
          if (!direct.count(r)) refs.erase(r);
        }
      }
    }
    const std::size_t ext = uniform_index(rng, 3);
    for (std::size_t e = 0; e < ext; ++e) refs.insert(fmt::format("ext-{:03d}", uniform_index(rng, 100)));
    rec.refs.assign(refs.begin(), refs.end());

    out.papers.push_back(std::move(rec));
    out.truth.push_back(std::move(truth));
  }
  return out;
}

void write_synthetic_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "papers.ndjson", corpus.papers_ndjson());
  write_text_file(dir / "truth.json", corpus.truth_json(seed));
}

}  // namespace teamscope
