#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lexicon_builtin.hpp"
#include "teamscope/activity.hpp"
#include "teamscope/error.hpp"

namespace teamscope {
namespace {

constexpr std::array<std::string_view, kActivityCount> kNames = {
    "conceive", "design",  "lead",     "supervise", "coordinate",  "interpret", "write",
    "help",     "assist",  "prepare",  "develop",   "collect",     "generate",  "purify",
    "carry",    "do",      "perform",  "conduct",   "analyze",     "participate", "provide",
    "contribute", "comment", "discuss", "edit",
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto end = pos == std::string_view::npos ? s.size() : pos;
    out.push_back(trim(s.substr(start, end - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string normalize_phrase(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : lower(trim(s))) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

}  // namespace

std::string_view activity_name(Activity a) { return kNames[index_of(a)]; }

std::optional<Activity> activity_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    if (kNames[i] == name) return activity_at(i);
  }
  return std::nullopt;
}

std::string_view cluster_name(Cluster c) {
  switch (c) {
    case Cluster::Lead:
      return "lead";
    case Cluster::DirectSupport:
      return "direct";
    case Cluster::IndirectSupport:
      return "indirect";
  }
  return "?";
}

std::optional<Cluster> cluster_from_name(std::string_view name) {
  if (name == "lead") return Cluster::Lead;
  if (name == "direct") return Cluster::DirectSupport;
  if (name == "indirect") return Cluster::IndirectSupport;
  return std::nullopt;
}

Cluster reference_cluster(Activity a) {
  const auto i = index_of(a);
  if (i <= index_of(Activity::Write)) return Cluster::Lead;
  if (i <= index_of(Activity::Analyze)) return Cluster::DirectSupport;
  return Cluster::IndirectSupport;
}

std::vector<Activity> ActivitySet::items() const {
  std::vector<Activity> out;
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    if (bits_ & (1u << i)) out.push_back(activity_at(i));
  }
  return out;
}

ActivityLexicon ActivityLexicon::builtin() {
  static const ActivityLexicon lex = [] {
    std::istringstream in(detail::kBuiltinLexicon);
    return parse(in, "<builtin lexicon>");
  }();
  return lex;
}

ActivityLexicon ActivityLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read lexicon " + path.string());
  return parse(in, path.string());
}

ActivityLexicon ActivityLexicon::parse(std::istream& in, const std::string& source) {
  ActivityLexicon lex;
  std::array<bool, kActivityCount> seen{};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto where = source + ":" + std::to_string(lineno);
    const auto cols = split(t, '\t');
    if (cols.size() >= 2 && cols[0] == "@collective") {
      for (const auto& p : split(cols[1], ',')) {
        if (!p.empty()) lex.collective_.push_back(normalize_phrase(p));
      }
      continue;
    }
    if (cols.size() != 3) throw FormatError(where + ": expected 3 tab-separated columns");
    const auto act = activity_from_name(cols[0]);
    if (!act) throw FormatError(where + ": '" + cols[0] + "' is not a canonical activity");
    const auto cl = cluster_from_name(cols[2]);
    if (!cl) throw FormatError(where + ": unknown cluster '" + cols[2] + "'");
    if (*cl != reference_cluster(*act)) {
      throw FormatError(where + ": activity '" + cols[0] + "' must be in cluster '" +
                        std::string(cluster_name(reference_cluster(*act))) + "'");
    }
    if (seen[index_of(*act)]) throw FormatError(where + ": duplicate activity '" + cols[0] + "'");
    seen[index_of(*act)] = true;
    lex.clusters_[index_of(*act)] = *cl;
    auto& forms = lex.form_lists_[index_of(*act)];
    forms.push_back(cols[0]);
    for (const auto& f : split(cols[1], ',')) {
      const std::string w = lower(f);
      if (w.empty()) continue;
      if (std::find(forms.begin(), forms.end(), w) == forms.end()) forms.push_back(w);
    }
    for (const auto& w : forms) {
      auto [it, fresh] = lex.form_index_.emplace(w, *act);
      if (!fresh && it->second != *act) {
        throw FormatError(where + ": surface form '" + w + "' already maps to " + std::string(activity_name(it->second)));
      }
    }
  }
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    if (!seen[i]) throw FormatError(source + ": missing activity '" + std::string(kNames[i]) + "'");
  }
  return lex;
}

std::optional<Activity> ActivityLexicon::lookup(const std::string& word) const {
  auto it = form_index_.find(word);
  if (it == form_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Activity> ActivityLexicon::canonicalize(std::string_view surface) const {
  std::string w;
  for (char c : surface) {
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '-') {
      w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (w.empty()) return std::nullopt;
  if (auto a = lookup(w)) return a;

  auto ends = [&w](std::string_view suffix) { return w.size() > suffix.size() + 1 && w.ends_with(suffix); };
  std::vector<std::string> stems;
  auto stem_variants = [&stems](std::string s) {
    stems.push_back(s);
    stems.push_back(s + "e");
    // planned -> plan, submitting -> submit
    if (s.size() >= 3 && s[s.size() - 1] == s[s.size() - 2] && !is_vowel(s.back())) {
      stems.push_back(s.substr(0, s.size() - 1));
    }
  };
  if (ends("ied") || ends("ies")) stems.push_back(w.substr(0, w.size() - 3) + "y");
  if (ends("ing")) stem_variants(w.substr(0, w.size() - 3));
  if (ends("ed")) stem_variants(w.substr(0, w.size() - 2));
  if (ends("es")) stems.push_back(w.substr(0, w.size() - 2));
  if (ends("s")) stems.push_back(w.substr(0, w.size() - 1));
  for (const auto& s : stems) {
    if (auto a = lookup(s)) return a;
  }
  return std::nullopt;
}

std::string ActivityLexicon::to_tsv() const {
  std::string out;
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    out += kNames[i];
    out += '\t';
    const auto& forms = form_lists_[i];
    for (std::size_t k = 0; k < forms.size(); ++k) {
      if (k) out += ',';
      out += forms[k];
    }
    out += '\t';
    out += cluster_name(clusters_[i]);
    out += '\n';
  }
  out += "@collective\t";
  for (std::size_t k = 0; k < collective_.size(); ++k) {
    if (k) out += ',';
    out += collective_[k];
  }
  out += '\n';
  return out;
}

}  // namespace teamscope
